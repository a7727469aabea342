// SPDX-License-Identifier: Apache-2.0

#include "maxcon/heuristic.hpp"

#include <cassert>

#include "maxcon/errors.hpp"

namespace maxcon {

namespace {

// Cap on memoized evaluations; beyond it the cache is dropped wholesale.
// Recomputation is pure, so this only trades time for memory.
constexpr std::size_t kCacheCap = 2'000'000;

HeuristicResult compute_impl(const ProblemInstance& instance, const IndexSet& coverage,
                             const IndexSet& forced, const MinimaxSolution* seed) {
    const double eps = instance.epsilon;
    HeuristicResult out;

    MinimaxSolution sol;
    if (seed && forced.empty()) {
        sol = *seed;
    } else {
        auto s = try_solve_minimax_constrained(instance, coverage, forced);
        if (!s) {
            out.forced_infeasible = true;
            return out;
        }
        sol = std::move(*s);
    }

    if (sol.value <= eps) {
        out.theta_g = sol.model;
        out.feasible_set = coverage;
        return out;
    }

    // Removal phase: peel off support sets until the remainder is feasible.
    std::vector<IndexSet> removed;
    IndexSet working = coverage;
    while (sol.value > eps) {
        if (sol.basis.empty())
            throw SolverError("infeasible set with empty support basis");
        removed.push_back(sol.basis);
        working = set_difference(working, sol.basis);
        auto s = try_solve_minimax_constrained(instance, working, forced);
        if (!s) throw SolverError("constrained solve lost feasibility during removal");
        sol = std::move(*s);
    }

    // Insertion phase. (feasible_value, witness) stay exact for the current
    // F; a reinserted point whose residual under the witness does not exceed
    // the value leaves the optimum untouched, so the solve is skipped.
    IndexSet feasible = working;
    double feasible_value = sol.value;
    Model witness = sol.model;

    for (const IndexSet& basis : removed) {
        for (Index s : basis) {
            const double r = residual_or_infinity(instance, witness, s);
            if (r <= feasible_value + active_tolerance(feasible_value)) {
                feasible = inserted(feasible, s);
                continue;
            }
            IndexSet expanded = inserted(feasible, s);
            auto trial = try_solve_minimax_constrained(instance, expanded, forced);
            if (!trial) throw SolverError("constrained solve lost feasibility during insertion");
            if (trial->value <= eps) {
                feasible = std::move(expanded);
                feasible_value = trial->value;
                witness = std::move(trial->model);
            } else {
                ++out.h_ins;
                out.removed_basis_sizes.push_back(static_cast<int>(trial->basis.size()));
                feasible = set_difference(expanded, trial->basis);
                auto back = try_solve_minimax_constrained(instance, feasible, forced);
                if (!back) throw SolverError("constrained solve lost feasibility after ejection");
                feasible_value = back->value;
                witness = std::move(back->model);
            }
        }
    }

    out.g = static_cast<int>(coverage.size() - feasible.size());
    out.theta_g = std::move(witness);
    out.feasible_set = std::move(feasible);
    assert(out.h_ins <= out.g);
    return out;
}

}  // namespace

HeuristicResult compute_hins(const ProblemInstance& instance, const IndexSet& coverage,
                             const MinimaxSolution* seed) {
    return compute_impl(instance, coverage, {}, seed);
}

HeuristicResult compute_hins_constrained(const ProblemInstance& instance,
                                         const IndexSet& coverage, const IndexSet& forced) {
    return compute_impl(instance, coverage, forced, nullptr);
}

HinsCache::Key HinsCache::make_key(const IndexSet& coverage, const IndexSet& forced) const {
    Key key;
    key.complement.reserve(static_cast<std::size_t>(instance_size_) - coverage.size());
    auto it = coverage.begin();
    for (Index i = 1; i <= instance_size_; ++i) {
        if (it != coverage.end() && *it == i)
            ++it;
        else
            key.complement.push_back(i);
    }
    key.forced = forced;
    return key;
}

std::shared_ptr<const HeuristicResult> HinsCache::lookup(const IndexSet& coverage,
                                                         const IndexSet& forced) const {
    auto found = map_.find(make_key(coverage, forced));
    return found == map_.end() ? nullptr : found->second;
}

void HinsCache::store(const IndexSet& coverage, const IndexSet& forced,
                      std::shared_ptr<const HeuristicResult> result) {
    if (map_.size() >= kCacheCap) map_.clear();
    map_.emplace(make_key(coverage, forced), std::move(result));
}

std::shared_ptr<const HeuristicResult> compute_hins_cached(
    const ProblemInstance& instance, const IndexSet& coverage, const IndexSet& forced,
    HinsCache* cache, const MinimaxSolution* seed) {
    if (cache) {
        if (auto hit = cache->lookup(coverage, forced)) return hit;
    }
    auto result = std::make_shared<const HeuristicResult>(
        compute_impl(instance, coverage, forced, seed));
    if (cache) cache->store(coverage, forced, result);
    return result;
}

}  // namespace maxcon
