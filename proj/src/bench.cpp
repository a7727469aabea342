// SPDX-License-Identifier: Apache-2.0

#include "maxcon/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "maxcon/errors.hpp"

namespace maxcon {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_theta(const Model& model) {
    std::string out;
    for (Eigen::Index i = 0; i < model.theta.size(); ++i) {
        if (i) out += ';';
        out += format_double(model.theta[i]);
    }
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string bench_csv_header() {
    return "instance_id,variant,status,consensus,outliers,nun,nobp,nodes_expanded,"
           "runtime_ms,theta_star";
}

std::string bench_csv_row(const BenchRow& r) {
    std::ostringstream os;
    os << csv_escape(r.instance_id) << ',' << r.variant << ',' << r.status << ','
       << r.consensus << ',' << r.outliers << ',' << r.nun << ',' << r.nobp << ','
       << r.nodes_expanded << ',' << format_double(r.runtime_ms) << ','
       << csv_escape(r.theta_star);
    return os.str();
}

BenchRow make_bench_row(const std::string& instance_id, SearchVariant variant,
                        const SearchResult& result) {
    BenchRow row;
    row.instance_id = instance_id;
    row.variant = variant_name(variant);
    row.status = status_name(result.status);
    row.consensus = result.consensus;
    row.outliers = result.outliers;
    row.nun = result.nun;
    row.nobp = result.nobp;
    row.nodes_expanded = result.nodes_expanded;
    row.runtime_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(result.runtime)
            .count();
    row.theta_star =
        result.status == SearchStatus::Optimal ? join_theta(result.theta_star) : "";
    return row;
}

BenchRow run_solve(const ProblemInstance& instance, const std::string& instance_id,
                   SearchVariant variant, std::chrono::milliseconds time_limit,
                   std::optional<long> node_limit) {
    SearchConfig config;
    config.variant = variant;
    config.time_limit = time_limit;
    config.node_limit = node_limit;
    SearchResult result = search(instance, config);
    return make_bench_row(instance_id, variant, result);
}

BenchReport run_bench(const std::vector<BenchTask>& tasks,
                      const std::vector<SearchVariant>& variants,
                      std::chrono::milliseconds time_limit, int jobs) {
    const std::size_t total = tasks.size() * variants.size();
    BenchReport report;
    report.rows.resize(total);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= total) return;
            const BenchTask& task = tasks[k / variants.size()];
            const SearchVariant variant = variants[k % variants.size()];
            report.rows[k] =
                run_solve(task.instance, task.instance_id, variant, time_limit);
        }
    };

    const int n_workers = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return report;
}

void write_text_file(const std::string& path, const std::string& payload) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw SolverError("cannot open '" + tmp + "' for writing");
        os << payload;
        if (!os) throw SolverError("write to '" + tmp + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

void write_csv(const std::string& path, const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << bench_csv_header() << '\n';
    for (const auto& row : rows) os << bench_csv_row(row) << '\n';
    write_text_file(path, os.str());
}

std::string aggregate_csv(const std::vector<BenchTask>& tasks,
                          const std::vector<BenchRow>& rows,
                          std::chrono::milliseconds time_limit) {
    // o per instance_id; instances without ground truth group under o = -1.
    std::map<std::string, int> outliers_of;
    for (const auto& t : tasks)
        outliers_of[t.instance_id] = t.planted_outliers.value_or(-1);

    const double cap_ms = static_cast<double>(time_limit.count());
    std::map<std::pair<std::string, int>, std::vector<double>> runtimes;
    std::map<std::pair<std::string, int>, int> optimal_counts;
    for (const auto& r : rows) {
        const auto key = std::make_pair(r.variant, outliers_of[r.instance_id]);
        runtimes[key].push_back(r.status == "OPTIMAL" ? r.runtime_ms : cap_ms);
        if (r.status == "OPTIMAL") ++optimal_counts[key];
    }

    std::map<std::pair<std::string, int>, double> medians;
    for (const auto& [key, values] : runtimes) medians[key] = median(values);

    std::ostringstream os;
    os << "variant,o,instances,optimal,median_runtime_ms,speedup_vs_previous_best\n";
    for (const auto& [key, values] : runtimes) {
        const auto& [variant, o] = key;
        os << variant << ',' << o << ',' << values.size() << ',' << optimal_counts[key]
           << ',' << format_double(medians[key]) << ',';
        if (variant == variant_name(SearchVariant::AstarNapaDibp)) {
            // Best previously known method: plain search or single-point
            // pruning, whichever has the lower median at this o.
            double best_prev = -1.0;
            for (SearchVariant prev : {SearchVariant::Astar, SearchVariant::AstarTod}) {
                auto it = medians.find({variant_name(prev), o});
                if (it != medians.end())
                    best_prev = best_prev < 0 ? it->second : std::min(best_prev, it->second);
            }
            if (best_prev >= 0 && medians[key] > 0)
                os << format_double(best_prev / medians[key]);
        }
        os << '\n';
    }
    return os.str();
}

void TraceCollector::on_expand(const SearchNode& node) {
    Record r;
    r.level = node.level;
    r.evaluation = node.evaluation;
    r.f_value = node.f_value;
    r.basis_size = static_cast<int>(node.basis.size());
    records_.push_back(std::move(r));
}

void TraceCollector::on_tod(const SearchNode&, std::optional<Index> detected) {
    if (!records_.empty() && detected) records_.back().prune = "tod";
}

void TraceCollector::on_dibp(const SearchNode&, const DibpOutcome& outcome) {
    if (records_.empty()) return;
    records_.back().sb_size = static_cast<int>(outcome.s_b.size());
    if (outcome.fired) records_.back().prune = "dibp";
}

std::string TraceCollector::to_csv() const {
    std::ostringstream os;
    os << "level,evaluation,f_value,basis_size,sb_size,prune\n";
    for (const auto& r : records_)
        os << r.level << ',' << r.evaluation << ',' << format_double(r.f_value) << ','
           << r.basis_size << ',' << r.sb_size << ',' << r.prune << '\n';
    return os.str();
}

std::optional<std::chrono::milliseconds> parse_duration(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &pos);
    } catch (...) {
        return std::nullopt;
    }
    std::string unit = text.substr(pos);
    double scale;
    if (unit.empty() || unit == "s")
        scale = 1000.0;
    else if (unit == "ms")
        scale = 1.0;
    else if (unit == "m")
        scale = 60'000.0;
    else
        return std::nullopt;
    if (value < 0) return std::nullopt;
    return std::chrono::milliseconds(static_cast<long>(value * scale));
}

}  // namespace maxcon
