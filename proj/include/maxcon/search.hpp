// SPDX-License-Identifier: Apache-2.0

#ifndef MAXCON_SEARCH_HPP
#define MAXCON_SEARCH_HPP

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_set>

#include "maxcon/heuristic.hpp"
#include "maxcon/minimax.hpp"
#include "maxcon/types.hpp"

namespace maxcon {

enum class SearchVariant {
    Astar,          // plain best-first tree search
    AstarTod,       // + single true-outlier detection before expansion
    AstarNapa,      // + non-adjacent path avoidance
    AstarNapaTod,   // NAPA + TOD
    AstarNapaDibp,  // NAPA + dimension-insensitive branch pruning
};

const char* variant_name(SearchVariant v);
std::optional<SearchVariant> variant_from_name(std::string_view name);

enum class SearchStatus { Optimal, Timeout, NoSolution };

const char* status_name(SearchStatus s);

/// One basis in the search tree, with its violation set and evaluation.
struct SearchNode {
    IndexSet basis;      // support set, <= d+1 points
    IndexSet violation;  // V(B) against the full instance, canonical
    int level = 0;       // |violation|
    double f_value = 0.0;
    Model model;  // theta(B)
    std::shared_ptr<const HeuristicResult> heuristic;
    int evaluation = 0;  // level + h_ins once evaluated
};

/// C(B) = S \ V(B).
IndexSet node_coverage(const ProblemInstance& instance, const SearchNode& node);

struct DibpOutcome {
    IndexSet s_b;  // S_B in insertion order (descending residual scan)
    bool fired = false;
    int evaluations = 0;  // bound checks executed (NOBP contribution)
    int z = 1;
    std::shared_ptr<const HeuristicResult> firing_result;
    std::vector<IndexSet> admitted_children;  // violation keys pushed
};

/// Test and diagnostics hooks. All callbacks fire on the search thread.
class SearchObserver {
public:
    virtual ~SearchObserver() = default;
    virtual void on_expand(const SearchNode&) {}
    virtual void on_child(const SearchNode& /*parent*/, Index /*removed*/,
                          const SearchNode& /*child*/, bool /*admitted*/) {}
    virtual void on_constrained_eval(const SearchNode& /*node*/, const IndexSet& /*forced*/,
                                     const HeuristicResult& /*result*/) {}
    virtual void on_tod(const SearchNode& /*node*/, std::optional<Index> /*detected*/) {}
    virtual void on_dibp(const SearchNode& /*node*/, const DibpOutcome& /*outcome*/) {}
    virtual void on_adaptive_start_check(const SearchNode& /*node*/, bool /*identical*/,
                                         const DibpOutcome& /*adaptive*/,
                                         const DibpOutcome& /*from_one*/) {}
};

struct SearchConfig {
    SearchVariant variant = SearchVariant::AstarNapaDibp;
    std::chrono::milliseconds time_limit{600000};
    std::optional<long> node_limit;  // cap on expansions; exceeding it times out
    SearchObserver* observer = nullptr;
    // Re-run every branch-pruning expansion with the adaptive start forced
    // to 1 against a snapshot of the dedup index and report whether the
    // outcomes agree. Testing aid; roughly doubles expansion cost.
    bool verify_adaptive_start = false;
};

struct SearchResult {
    SearchStatus status = SearchStatus::NoSolution;
    IndexSet basis_star;
    Model theta_star;
    Index consensus = 0;
    Index outliers = 0;
    long nun = 0;             // distinct nodes ever queued, root included
    long nobp = 0;            // branch-pruning bound checks executed
    long nodes_expanded = 0;  // infeasible nodes whose children were generated
    std::chrono::nanoseconds runtime{0};
};

/// Root node: the support set of the full instance, violation-free by
/// construction, with its heuristic evaluated.
SearchNode make_root(const ProblemInstance& instance);

/// Child reached by removing `s` from the parent's coverage: solves the
/// minimax problem on C(B) \ {s} and recomputes the violation set against
/// the full instance. The heuristic is left unevaluated.
SearchNode generate_child(const ProblemInstance& instance, const SearchNode& parent,
                          Index s);

/// Non-adjacent path avoidance: admit only children that moved one level up.
inline bool napa_admit(const SearchNode& parent, const SearchNode& child) {
    return child.level > parent.level;
}

/// True-outlier detection. Scans the basis in descending residual order
/// under the node's upper-bound witness and returns the first point whose
/// constrained heuristic exceeds g(B), if any.
std::optional<Index> tod_reduce(const ProblemInstance& instance, const SearchNode& node,
                                HinsCache* cache = nullptr,
                                SearchObserver* observer = nullptr);

/// Adaptive start z(B) for the branch-pruning subset size (linear residuals
/// only; returns 1 for fractional instances). Exact integer arithmetic on
/// max{1, d + 2 - ceil((|C(B)|-1) / g(B))}, capped to the basis size.
int adaptive_start(const ProblemInstance& instance, const SearchNode& node);

/// One branch-pruning expansion of `node` (the inner loop of the main
/// algorithm): scans the basis in descending residual order, generates
/// admissible children through `emit_child` (pass nullptr to discard them),
/// grows S_B and stops early when the constrained bound check fires.
/// `z_override` forces the starting size; 0 means use adaptive_start.
DibpOutcome dibp_expand(const ProblemInstance& instance, const SearchNode& node,
                        std::unordered_set<IndexSet, IndexSetHash>& dedup,
                        HinsCache* cache,
                        const std::function<void(SearchNode&&)>* emit_child,
                        SearchObserver* observer, int z_override = 0);

/// Standalone branch-pruning evaluation with a fresh dedup index; children
/// are generated and discarded. Mirrors exactly what the search would do on
/// this node first.
DibpOutcome dibp_prune(const ProblemInstance& instance, const SearchNode& node,
                       HinsCache* cache = nullptr, int z_override = 0);

/// A* tree search over the basis tree with the configured strategy set.
SearchResult search(const ProblemInstance& instance, const SearchConfig& config);

}  // namespace maxcon

#endif  // MAXCON_SEARCH_HPP
