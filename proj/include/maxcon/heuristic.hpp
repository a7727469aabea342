// SPDX-License-Identifier: Apache-2.0

#ifndef MAXCON_HEURISTIC_HPP
#define MAXCON_HEURISTIC_HPP

#include <memory>
#include <unordered_map>

#include "maxcon/minimax.hpp"
#include "maxcon/types.hpp"

namespace maxcon {

/// Result of one admissible-heuristic evaluation over a coverage set.
///
/// `h_ins` is the insertion heuristic: a lower bound on the number of
/// points that must leave the coverage for the remainder to be feasible.
/// `g` is the matching upper bound: the coverage minus the final feasible
/// set F, whose minimax model `theta_g` witnesses it. `removed_basis_sizes`
/// records the size of each support set ejected at an h_ins increment; its
/// mean is the phi used by the branch-pruning bounds.
///
/// `forced_infeasible` is the +infinity sentinel of the constrained
/// variant: the forced set alone admits no model, so any bound comparison
/// against h_ins must treat it as larger than every finite value.
struct HeuristicResult {
    bool forced_infeasible = false;
    int h_ins = 0;
    int g = 0;
    Model theta_g;
    std::vector<int> removed_basis_sizes;
    IndexSet feasible_set;

    /// h_ins > bound, with the sentinel counting as +infinity.
    bool exceeds(int bound) const { return forced_infeasible || h_ins > bound; }

    /// Mean removed-basis size. Only meaningful when the list is nonempty.
    double phi() const {
        if (removed_basis_sizes.empty()) return 0.0;
        double sum = 0.0;
        for (int s : removed_basis_sizes) sum += s;
        return sum / static_cast<double>(removed_basis_sizes.size());
    }
};

/// Admissible heuristic for a coverage set (insertion method).
///
/// First removes whole support sets until the remaining set is feasible,
/// then reinserts the removed points one basis at a time in removal order,
/// ascending data index within a basis. A reinsertion that breaks
/// feasibility increments h_ins and ejects the support set of the expanded
/// set. `seed` may carry the already-known minimax solution of `coverage`
/// and must equal what solve_minimax would return.
HeuristicResult compute_hins(const ProblemInstance& instance, const IndexSet& coverage,
                             const MinimaxSolution* seed = nullptr);

/// Constrained variant: every minimax solve carries the forced set as hard
/// epsilon-constraints. Returns the sentinel when `forced` alone is
/// infeasible. forced = {} gives output identical to compute_hins.
HeuristicResult compute_hins_constrained(const ProblemInstance& instance,
                                         const IndexSet& coverage, const IndexSet& forced);

/// Per-search memo of heuristic evaluations, keyed by the coverage's
/// complement (small) plus the forced set. Single-threaded use; results are
/// shared immutable values.
class HinsCache {
public:
    explicit HinsCache(Index instance_size) : instance_size_(instance_size) {}

    std::shared_ptr<const HeuristicResult> lookup(const IndexSet& coverage,
                                                  const IndexSet& forced) const;
    void store(const IndexSet& coverage, const IndexSet& forced,
               std::shared_ptr<const HeuristicResult> result);

    std::size_t size() const { return map_.size(); }

private:
    struct Key {
        IndexSet complement;
        IndexSet forced;
        bool operator==(const Key& o) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            IndexSetHash h;
            return h(k.complement) * 0x9e3779b97f4a7c15ULL ^ h(k.forced);
        }
    };

    Key make_key(const IndexSet& coverage, const IndexSet& forced) const;

    Index instance_size_;
    std::unordered_map<Key, std::shared_ptr<const HeuristicResult>, KeyHash> map_;
};

/// Cached evaluation: returns the memoized result or computes and stores it.
std::shared_ptr<const HeuristicResult> compute_hins_cached(
    const ProblemInstance& instance, const IndexSet& coverage, const IndexSet& forced,
    HinsCache* cache, const MinimaxSolution* seed = nullptr);

}  // namespace maxcon

#endif  // MAXCON_HEURISTIC_HPP
