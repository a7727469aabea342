// SPDX-License-Identifier: Apache-2.0

#include "maxcon/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "maxcon/errors.hpp"
#include "maxcon/minimax.hpp"
#include "maxcon/rng.hpp"

namespace maxcon {

namespace {

constexpr std::uint64_t kSubsetGuard = 3'000'000;

std::uint64_t subset_count(std::size_t n, std::size_t max_size) {
    std::uint64_t total = 0;
    std::uint64_t binom = 1;
    for (std::size_t k = 1; k <= std::min(n, max_size); ++k) {
        binom = binom * (n - k + 1) / k;
        total += binom;
        if (total > kSubsetGuard) return total;
    }
    return total;
}

// Visit subsets of `pool` of size 1..max_size in lexicographic order.
template <typename Fn>
void for_each_subset(const IndexSet& pool, std::size_t max_size, Fn&& fn) {
    const std::size_t n = pool.size();
    IndexSet current;
    auto recurse = [&](auto&& self, std::size_t start) -> void {
        for (std::size_t k = start; k < n; ++k) {
            current.push_back(pool[k]);
            fn(current);
            if (current.size() < max_size) self(self, k + 1);
            current.pop_back();
        }
    };
    recurse(recurse, 0);
}

void check_guard(const ProblemInstance& instance, std::size_t pool_size) {
    const std::size_t basis_cap = static_cast<std::size_t>(instance.dim) + 1;
    if (subset_count(pool_size, basis_cap) > kSubsetGuard)
        throw InstanceTooLarge("oracle enumeration would exceed the desk-scale guard");
}

// Best consensus over all candidate bases drawn from `pool`, counting
// consistency within `pool` and requiring `forced` to be covered.
std::optional<OracleResult> best_over_pool(const ProblemInstance& instance,
                                           const IndexSet& pool, const IndexSet& forced) {
    check_guard(instance, pool.size());
    const std::size_t basis_cap = static_cast<std::size_t>(instance.dim) + 1;

    std::optional<OracleResult> best;
    for_each_subset(pool, basis_cap, [&](const IndexSet& subset) {
        MinimaxSolution sol;
        try {
            sol = solve_minimax(instance, subset);
        } catch (const DomainEmpty&) {
            return;
        }
        if (sol.value > instance.epsilon) return;
        IndexSet consistent;
        for (Index i : pool)
            if (residual_or_infinity(instance, sol.model, i) <= instance.epsilon)
                consistent.push_back(i);
        for (Index j : forced)
            if (!contains(consistent, j)) return;
        if (!best || consistent.size() > best->max_feasible_set.size()) {
            OracleResult r;
            r.consensus = static_cast<Index>(consistent.size());
            r.witness_model = sol.model;
            r.max_feasible_set = std::move(consistent);
            best = std::move(r);
        }
    });
    return best;
}

}  // namespace

OracleResult enumerate_optimal(const ProblemInstance& instance) {
    auto best = best_over_pool(instance, instance.all_indices(), {});
    if (!best) throw SolverError("oracle found no feasible basis");
    return *best;
}

std::optional<OracleResult> max_feasible_subset(const ProblemInstance& instance,
                                                const IndexSet& coverage,
                                                const IndexSet& forced) {
    return best_over_pool(instance, coverage, forced);
}

std::optional<int> min_removal(const ProblemInstance& instance, const IndexSet& coverage,
                               const IndexSet& forced) {
    auto best = best_over_pool(instance, coverage, forced);
    if (!best) return std::nullopt;
    return static_cast<int>(coverage.size() - best->max_feasible_set.size());
}

OracleResult lo_ransac(const ProblemInstance& instance, int iterations,
                       std::uint64_t seed) {
    const Index n = instance.size();
    const int d = instance.dim;
    SplitMix64 rng(seed);

    OracleResult best;
    best.consensus = 0;
    best.witness_model.theta = Eigen::VectorXd::Zero(d);

    auto score = [&](const Model& model) -> IndexSet {
        IndexSet consistent;
        for (Index i = 1; i <= n; ++i)
            if (residual_or_infinity(instance, model, i) <= instance.epsilon)
                consistent.push_back(i);
        return consistent;
    };

    auto consider = [&](Model model) {
        IndexSet consistent = score(model);
        if (static_cast<Index>(consistent.size()) <= best.consensus) return;
        // Local optimization: re-fit on the current consensus set until the
        // count stops growing.
        for (int round = 0; round < 8 && !consistent.empty(); ++round) {
            MinimaxSolution refit;
            try {
                refit = solve_minimax(instance, consistent);
            } catch (const DomainEmpty&) {
                break;
            }
            IndexSet next = score(refit.model);
            if (next.size() <= consistent.size()) break;
            consistent = std::move(next);
            model = refit.model;
        }
        if (static_cast<Index>(consistent.size()) > best.consensus) {
            best.consensus = static_cast<Index>(consistent.size());
            best.witness_model = std::move(model);
            best.max_feasible_set = std::move(consistent);
        }
    };

    // The global fit is a free hypothesis; on outlier-free data it already
    // covers everything.
    try {
        consider(solve_minimax(instance, instance.all_indices()).model);
    } catch (const DomainEmpty&) {
    }

    std::vector<Index> pool(static_cast<std::size_t>(n));
    for (Index i = 1; i <= n; ++i) pool[static_cast<std::size_t>(i - 1)] = i;
    for (int it = 0; it < iterations; ++it) {
        // Partial Fisher-Yates draw of d distinct indices.
        for (int k = 0; k < d && k < static_cast<int>(pool.size()); ++k) {
            const auto j = k + static_cast<int>(rng.next_below(pool.size() - static_cast<std::size_t>(k)));
            std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(j)]);
        }
        IndexSet sample(pool.begin(), pool.begin() + std::min<std::ptrdiff_t>(d, n));
        canonicalize(sample);
        try {
            consider(solve_minimax(instance, sample).model);
        } catch (const DomainEmpty&) {
        }
    }
    return best;
}

}  // namespace maxcon
