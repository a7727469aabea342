// SPDX-License-Identifier: Apache-2.0

#include "maxcon/search.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <queue>

#include "maxcon/errors.hpp"

namespace maxcon {

namespace {

// Basis points sorted by descending residual under the upper-bound witness
// theta_g, ties by ascending data index. This is the order in which both
// pruning techniques probe for true outliers.
std::vector<Index> pruning_scan_order(const ProblemInstance& instance,
                                      const SearchNode& node) {
    std::vector<std::pair<double, Index>> scored;
    scored.reserve(node.basis.size());
    for (Index s : node.basis)
        scored.push_back({residual_or_infinity(instance, node.heuristic->theta_g, s), s});
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<Index> order;
    order.reserve(scored.size());
    for (const auto& [r, s] : scored) order.push_back(s);
    return order;
}

MinimaxSolution node_solution(const SearchNode& node) {
    return MinimaxSolution{node.f_value, node.model, node.basis};
}

void evaluate_heuristic(const ProblemInstance& instance, SearchNode& node,
                        HinsCache* cache) {
    const MinimaxSolution seed = node_solution(node);
    node.heuristic =
        compute_hins_cached(instance, node_coverage(instance, node), {}, cache, &seed);
    node.evaluation = node.level + node.heuristic->h_ins;
}

}  // namespace

const char* variant_name(SearchVariant v) {
    switch (v) {
        case SearchVariant::Astar: return "astar";
        case SearchVariant::AstarTod: return "tod";
        case SearchVariant::AstarNapa: return "napa";
        case SearchVariant::AstarNapaTod: return "napa-tod";
        case SearchVariant::AstarNapaDibp: return "napa-dibp";
    }
    return "?";
}

std::optional<SearchVariant> variant_from_name(std::string_view name) {
    for (SearchVariant v :
         {SearchVariant::Astar, SearchVariant::AstarTod, SearchVariant::AstarNapa,
          SearchVariant::AstarNapaTod, SearchVariant::AstarNapaDibp})
        if (name == variant_name(v)) return v;
    return std::nullopt;
}

const char* status_name(SearchStatus s) {
    switch (s) {
        case SearchStatus::Optimal: return "OPTIMAL";
        case SearchStatus::Timeout: return "TIMEOUT";
        case SearchStatus::NoSolution: return "NO_SOLUTION";
    }
    return "?";
}

IndexSet node_coverage(const ProblemInstance& instance, const SearchNode& node) {
    IndexSet coverage;
    coverage.reserve(static_cast<std::size_t>(instance.size()) - node.violation.size());
    auto it = node.violation.begin();
    for (Index i = 1; i <= instance.size(); ++i) {
        if (it != node.violation.end() && *it == i)
            ++it;
        else
            coverage.push_back(i);
    }
    return coverage;
}

SearchNode make_root(const ProblemInstance& instance) {
    SearchNode root;
    MinimaxSolution sol = solve_minimax(instance, instance.all_indices());
    root.basis = sol.basis;
    root.violation = violation_set(instance, sol);
    root.level = static_cast<int>(root.violation.size());
    root.f_value = sol.value;
    root.model = sol.model;
    evaluate_heuristic(instance, root, nullptr);
    return root;
}

SearchNode generate_child(const ProblemInstance& instance, const SearchNode& parent,
                          Index s) {
    SearchNode child;
    MinimaxSolution sol =
        solve_minimax(instance, erased(node_coverage(instance, parent), s));
    child.violation = violation_set(instance, sol);
    child.level = static_cast<int>(child.violation.size());
    child.basis = std::move(sol.basis);
    child.f_value = sol.value;
    child.model = std::move(sol.model);
    return child;
}

std::optional<Index> tod_reduce(const ProblemInstance& instance, const SearchNode& node,
                                HinsCache* cache, SearchObserver* observer) {
    const IndexSet coverage = node_coverage(instance, node);
    for (Index s : pruning_scan_order(instance, node)) {
        auto res = compute_hins_cached(instance, coverage, {s}, cache);
        if (observer) observer->on_constrained_eval(node, {s}, *res);
        if (res->exceeds(node.heuristic->g)) {
            if (observer) observer->on_tod(node, s);
            return s;
        }
    }
    if (observer) observer->on_tod(node, std::nullopt);
    return std::nullopt;
}

int adaptive_start(const ProblemInstance& instance, const SearchNode& node) {
    if (instance.kind != ResidualKind::Linear) return 1;
    const long g = node.heuristic ? node.heuristic->g : 0;
    if (g < 1) return 1;
    const long coverage = instance.size() - node.level;
    const long q = coverage - 1;
    const long z = static_cast<long>(instance.dim) + 2 - (q + g - 1) / g;
    const long cap = static_cast<long>(node.basis.size());
    return static_cast<int>(std::max(1L, std::min(z, std::max(cap, 1L))));
}

DibpOutcome dibp_expand(const ProblemInstance& instance, const SearchNode& node,
                        std::unordered_set<IndexSet, IndexSetHash>& dedup,
                        HinsCache* cache,
                        const std::function<void(SearchNode&&)>* emit_child,
                        SearchObserver* observer, int z_override) {
    DibpOutcome out;
    out.z = z_override > 0 ? z_override : adaptive_start(instance, node);
    const IndexSet coverage = node_coverage(instance, node);
    const std::size_t basis_size = node.basis.size();

    for (Index s : pruning_scan_order(instance, node)) {
        const IndexSet key = inserted(node.violation, s);
        if (dedup.insert(key).second) {
            SearchNode child = generate_child(instance, node, s);
            if (observer) observer->on_child(node, s, child, napa_admit(node, child));
            if (!napa_admit(node, child)) continue;
            out.s_b.push_back(s);
            out.admitted_children.push_back(child.violation);
            if (emit_child) (*emit_child)(std::move(child));
            if (out.s_b.size() == basis_size) break;
            if (static_cast<int>(out.s_b.size()) < out.z) continue;  // safe skip
            IndexSet forced = out.s_b;
            canonicalize(forced);
            auto res = compute_hins_cached(instance, coverage, forced, cache);
            ++out.evaluations;
            if (observer) observer->on_constrained_eval(node, forced, *res);
            if (res->exceeds(node.heuristic->g)) {
                out.fired = true;
                out.firing_result = res;
                break;
            }
        } else {
            // Repeated basis: no child, but s still joins S_B.
            out.s_b.push_back(s);
        }
    }
    return out;
}

DibpOutcome dibp_prune(const ProblemInstance& instance, const SearchNode& node,
                       HinsCache* cache, int z_override) {
    std::unordered_set<IndexSet, IndexSetHash> dedup;
    return dibp_expand(instance, node, dedup, cache, nullptr, nullptr, z_override);
}

namespace {

struct QueueEntry {
    int e;
    int level;
    long seq;
    std::uint32_t id;
};

struct QueueOrder {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
        if (a.e != b.e) return a.e > b.e;
        if (a.level != b.level) return a.level > b.level;
        return a.seq > b.seq;
    }
};

}  // namespace

SearchResult search(const ProblemInstance& instance, const SearchConfig& config) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    instance.validate();

    const bool use_napa = config.variant == SearchVariant::AstarNapa ||
                          config.variant == SearchVariant::AstarNapaTod ||
                          config.variant == SearchVariant::AstarNapaDibp;
    const bool use_tod = config.variant == SearchVariant::AstarTod ||
                         config.variant == SearchVariant::AstarNapaTod;
    const bool use_dibp = config.variant == SearchVariant::AstarNapaDibp;

    SearchResult result;
    HinsCache cache(instance.size());
    std::deque<SearchNode> nodes;
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue;
    std::unordered_set<IndexSet, IndexSetHash> dedup;          // candidate keys
    std::unordered_set<IndexSet, IndexSetHash> queued_keys;    // for NUN
    std::unordered_set<IndexSet, IndexSetHash> expanded_keys;  // skip duplicate pops
    long seq = 0;

    auto push_node = [&](SearchNode&& node) {
        if (queued_keys.insert(node.violation).second) ++result.nun;
        const auto id = static_cast<std::uint32_t>(nodes.size());
        queue.push(QueueEntry{node.evaluation, node.level, seq++, id});
        nodes.push_back(std::move(node));
    };

    {
        SearchNode root;
        MinimaxSolution sol = solve_minimax(instance, instance.all_indices());
        root.basis = sol.basis;
        root.violation = violation_set(instance, sol);
        root.level = static_cast<int>(root.violation.size());
        root.f_value = sol.value;
        root.model = sol.model;
        evaluate_heuristic(instance, root, &cache);
        push_node(std::move(root));
    }

    auto finish = [&](SearchStatus status) {
        result.status = status;
        result.runtime =
            std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
        return result;
    };

    while (!queue.empty()) {
        if (Clock::now() - start > config.time_limit) return finish(SearchStatus::Timeout);

        const QueueEntry top = queue.top();
        queue.pop();
        SearchNode node = std::move(nodes[top.id]);

        if (node.f_value <= instance.epsilon) {
            result.basis_star = node.basis;
            result.theta_star = node.model;
            result.outliers = static_cast<Index>(node.level);
            result.consensus = instance.size() - result.outliers;
            return finish(SearchStatus::Optimal);
        }

        // A node is expanded at most once per violation set; later copies
        // (reachable through non-adjacent paths) are dropped here.
        if (!expanded_keys.insert(node.violation).second) continue;

        if (config.node_limit && result.nodes_expanded >= *config.node_limit)
            return finish(SearchStatus::Timeout);
        ++result.nodes_expanded;
        if (config.observer) config.observer->on_expand(node);

        if (use_dibp) {
            std::function<void(SearchNode&&)> emit = [&](SearchNode&& child) {
                evaluate_heuristic(instance, child, &cache);
                push_node(std::move(child));
            };
            if (config.verify_adaptive_start) {
                auto dedup_copy = dedup;
                DibpOutcome shadow =
                    dibp_expand(instance, node, dedup_copy, &cache, nullptr, nullptr, 1);
                DibpOutcome real =
                    dibp_expand(instance, node, dedup, &cache, &emit, config.observer, 0);
                const bool identical = shadow.s_b == real.s_b &&
                                       shadow.fired == real.fired &&
                                       shadow.admitted_children == real.admitted_children;
                if (config.observer)
                    config.observer->on_adaptive_start_check(node, identical, real, shadow);
                result.nobp += real.evaluations;
                if (config.observer) config.observer->on_dibp(node, real);
            } else {
                DibpOutcome outcome =
                    dibp_expand(instance, node, dedup, &cache, &emit, config.observer, 0);
                result.nobp += outcome.evaluations;
                if (config.observer) config.observer->on_dibp(node, outcome);
            }
            continue;
        }

        IndexSet expansion = node.basis;
        if (use_tod) {
            ++result.nobp;  // one detection attempt on this node
            if (auto detected = tod_reduce(instance, node, &cache, config.observer))
                expansion = {*detected};
        }

        for (Index s : expansion) {
            const IndexSet key = inserted(node.violation, s);
            if (!dedup.insert(key).second) continue;
            SearchNode child = generate_child(instance, node, s);
            const bool admitted = !use_napa || napa_admit(node, child);
            if (config.observer) config.observer->on_child(node, s, child, admitted);
            if (!admitted) continue;
            evaluate_heuristic(instance, child, &cache);
            push_node(std::move(child));
        }
    }
    return finish(SearchStatus::NoSolution);
}

}  // namespace maxcon
