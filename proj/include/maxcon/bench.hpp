// SPDX-License-Identifier: Apache-2.0

#ifndef MAXCON_BENCH_HPP
#define MAXCON_BENCH_HPP

#include <chrono>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "maxcon/dataio.hpp"
#include "maxcon/search.hpp"

namespace maxcon {

/// One (instance, variant) outcome in the benchmark table.
struct BenchRow {
    std::string instance_id;
    std::string variant;
    std::string status;
    Index consensus = 0;
    Index outliers = 0;
    long nun = 0;
    long nobp = 0;
    long nodes_expanded = 0;
    double runtime_ms = 0.0;
    std::string theta_star;  // semicolon-joined decimals
};

/// Exact column set of every emitted CSV table.
std::string bench_csv_header();
std::string bench_csv_row(const BenchRow& row);

/// RFC-style CSV escaping of one field.
std::string csv_escape(const std::string& field);

BenchRow make_bench_row(const std::string& instance_id, SearchVariant variant,
                        const SearchResult& result);

/// Solve one instance with one variant and time it (wall clock around the
/// search only; instance loading is excluded by construction).
BenchRow run_solve(const ProblemInstance& instance, const std::string& instance_id,
                   SearchVariant variant, std::chrono::milliseconds time_limit,
                   std::optional<long> node_limit = std::nullopt);

struct BenchTask {
    std::string instance_id;
    ProblemInstance instance;
    std::optional<int> planted_outliers;  // from ground truth when present
};

struct BenchReport {
    std::vector<BenchRow> rows;  // deterministic order: instance-major, variant-minor
};

/// Run the instance x variant cross-product, optionally on several worker
/// threads. Each search stays single-threaded; rows come back in
/// deterministic order regardless of scheduling.
BenchReport run_bench(const std::vector<BenchTask>& tasks,
                      const std::vector<SearchVariant>& variants,
                      std::chrono::milliseconds time_limit, int jobs);

/// Write rows as CSV via write-to-temp-then-rename (no partial file on
/// crash).
void write_csv(const std::string& path, const std::vector<BenchRow>& rows);

/// Per-(variant, o) aggregate: median runtime plus the speedup of the
/// branch-pruning variant against the best previously known variants
/// (astar, tod) at the same o. Timeout rows count at the time cap.
std::string aggregate_csv(const std::vector<BenchTask>& tasks,
                          const std::vector<BenchRow>& rows,
                          std::chrono::milliseconds time_limit);

void write_text_file(const std::string& path, const std::string& payload);

/// Parse durations like "90", "90s", "1500ms", "10m".
std::optional<std::chrono::milliseconds> parse_duration(const std::string& text);

/// Structured expansion trace: one record per expanded node with its level,
/// evaluation, branch-pruning subset size and pruning outcome.
class TraceCollector : public SearchObserver {
public:
    struct Record {
        int level = 0;
        int evaluation = 0;
        double f_value = 0.0;
        int basis_size = 0;
        int sb_size = -1;  // -1 when the variant ran without branch pruning
        std::string prune = "none";
    };

    void on_expand(const SearchNode& node) override;
    void on_tod(const SearchNode& node, std::optional<Index> detected) override;
    void on_dibp(const SearchNode& node, const DibpOutcome& outcome) override;

    const std::vector<Record>& records() const { return records_; }
    std::string to_csv() const;

private:
    std::vector<Record> records_;
};

}  // namespace maxcon

#endif  // MAXCON_BENCH_HPP
