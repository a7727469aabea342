// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "maxcon/bench.hpp"
#include "maxcon/dataio.hpp"
#include "maxcon/errors.hpp"
#include "maxcon/oracle.hpp"
#include "maxcon/search.hpp"

namespace fs = std::filesystem;
using namespace maxcon;

namespace {

// Exit codes shared by all subcommands.
constexpr int kExitOk = 0;
constexpr int kExitTimeout = 2;
constexpr int kExitNoSolution = 3;
constexpr int kExitBadInput = 4;
constexpr int kExitOracleMismatch = 5;

std::string default_out_dir() {
    if (const char* env = std::getenv("MAXCON_OUT_DIR")) return env;
    return ".";
}

std::chrono::milliseconds parse_limit_or_throw(const std::string& text) {
    auto ms = parse_duration(text);
    if (!ms) throw CLI::ValidationError("--time-limit", "expected e.g. 90s, 1500ms or 10m");
    return *ms;
}

std::vector<std::string> expand_instance_paths(const std::vector<std::string>& inputs) {
    std::vector<std::string> paths;
    for (const auto& input : inputs) {
        if (fs::is_directory(input)) {
            std::vector<std::string> found;
            for (const auto& entry : fs::directory_iterator(input))
                if (entry.is_regular_file() && entry.path().extension() == ".json")
                    found.push_back(entry.path().string());
            std::sort(found.begin(), found.end());
            paths.insert(paths.end(), found.begin(), found.end());
        } else {
            paths.push_back(input);
        }
    }
    return paths;
}

std::string instance_id_of(const std::string& path) {
    return fs::path(path).stem().string();
}

int run_gen(int n, int d, int o, std::uint64_t seed, double epsilon, double inlier_noise,
            const std::string& out_dir, const std::string& suite, int suite_seeds) {
    fs::create_directories(out_dir);
    std::vector<std::pair<int, std::uint64_t>> grid;  // (o, seed)
    if (suite == "fig5") {
        for (int so : {2, 4, 6, 8, 10})
            for (int k = 0; k < suite_seeds; ++k)
                grid.push_back({so, seed + static_cast<std::uint64_t>(k)});
    } else {
        grid.push_back({o, seed});
    }
    for (const auto& [go, gseed] : grid) {
        GeneratorSpec spec;
        spec.n = n;
        spec.d = d;
        spec.o = go;
        spec.seed = gseed;
        spec.epsilon = epsilon;
        spec.inlier_noise = inlier_noise;
        spec.validate();
        auto [inst, gt] = generate_synthetic(spec);
        std::ostringstream name;
        name << "inst_d" << d << "_n" << n << "_o" << go << "_seed" << gseed << ".json";
        const std::string path = (fs::path(out_dir) / name.str()).string();
        save_instance(path, inst, &gt);
        std::cout << path << '\n';
    }
    return kExitOk;
}

int run_solve_cmd(const std::string& path, const std::string& variant_str,
                  const std::string& time_limit_str, std::optional<long> node_limit,
                  bool check_oracle, const std::string& out_csv,
                  const std::string& trace_path) {
    auto variant = variant_from_name(variant_str);
    if (!variant) {
        std::cerr << "unknown variant '" << variant_str << "'\n";
        return kExitBadInput;
    }
    LoadedInstance loaded = load_instance(path);

    SearchConfig config;
    config.variant = *variant;
    config.time_limit = parse_limit_or_throw(time_limit_str);
    config.node_limit = node_limit;
    TraceCollector trace;
    if (!trace_path.empty()) config.observer = &trace;

    const auto start = std::chrono::steady_clock::now();
    SearchResult result = search(loaded.instance, config);
    (void)start;

    BenchRow row = make_bench_row(instance_id_of(path), *variant, result);
    std::cout << bench_csv_header() << '\n' << bench_csv_row(row) << '\n';
    if (!out_csv.empty()) write_csv(out_csv, {row});
    if (!trace_path.empty()) write_text_file(trace_path, trace.to_csv());

    if (check_oracle) {
        const Index expect = enumerate_optimal(loaded.instance).consensus;
        std::cout << "oracle_consensus," << expect << '\n';
        if (result.status != SearchStatus::Optimal || result.consensus != expect) {
            std::cerr << "oracle mismatch: search=" << result.consensus
                      << " oracle=" << expect << '\n';
            return kExitOracleMismatch;
        }
    }
    switch (result.status) {
        case SearchStatus::Optimal: return kExitOk;
        case SearchStatus::Timeout: return kExitTimeout;
        case SearchStatus::NoSolution: return kExitNoSolution;
    }
    return kExitBadInput;
}

int run_bench_cmd(const std::vector<std::string>& inputs, const std::string& variants_str,
                  const std::string& time_limit_str, int jobs, const std::string& out_dir,
                  const std::string& out_csv, const std::string& aggregate_csv_path) {
    std::vector<SearchVariant> variants;
    std::stringstream ss(variants_str);
    std::string token;
    while (std::getline(ss, token, ',')) {
        auto v = variant_from_name(token);
        if (!v) {
            std::cerr << "unknown variant '" << token << "'\n";
            return kExitBadInput;
        }
        variants.push_back(*v);
    }

    const auto paths = expand_instance_paths(inputs);
    if (paths.empty()) {
        std::cerr << "no instance files found\n";
        return kExitBadInput;
    }
    std::vector<BenchTask> tasks;
    for (const auto& p : paths) {
        LoadedInstance loaded = load_instance(p);
        BenchTask task;
        task.instance_id = instance_id_of(p);
        task.instance = std::move(loaded.instance);
        if (loaded.ground_truth)
            task.planted_outliers =
                static_cast<int>(loaded.ground_truth->outlier_indices.size());
        tasks.push_back(std::move(task));
    }

    const auto limit = parse_limit_or_throw(time_limit_str);
    BenchReport report = run_bench(tasks, variants, limit, jobs);

    fs::create_directories(out_dir);
    const std::string rows_path =
        out_csv.empty() ? (fs::path(out_dir) / "bench.csv").string() : out_csv;
    const std::string agg_path = aggregate_csv_path.empty()
                                     ? (fs::path(out_dir) / "aggregate.csv").string()
                                     : aggregate_csv_path;
    write_csv(rows_path, report.rows);
    write_text_file(agg_path, aggregate_csv(tasks, report.rows, limit));

    std::cout << bench_csv_header() << '\n';
    for (const auto& row : report.rows) std::cout << bench_csv_row(row) << '\n';
    std::cout << "rows_csv," << rows_path << "\naggregate_csv," << agg_path << '\n';
    return kExitOk;
}

int run_oracle_cmd(const std::string& path, int lo_iterations, std::uint64_t seed) {
    LoadedInstance loaded = load_instance(path);
    OracleResult best = enumerate_optimal(loaded.instance);
    std::cout << "oracle_consensus," << best.consensus << '\n';
    std::cout << "oracle_outliers," << loaded.instance.size() - best.consensus << '\n';
    if (lo_iterations > 0) {
        OracleResult lrs = lo_ransac(loaded.instance, lo_iterations, seed);
        std::cout << "lo_ransac_consensus," << lrs.consensus << '\n';
        std::cout << "lo_ransac_outliers," << loaded.instance.size() - lrs.consensus
                  << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Globally optimal consensus maximization by accelerated tree search"};
    app.require_subcommand(1);

    // --- gen ---
    auto* gen = app.add_subcommand("gen", "Generate synthetic instances");
    int n = 100, d = 8, o = 10, suite_seeds = 1;
    std::uint64_t seed = 0;
    double epsilon = 0.1, inlier_noise = 0.1;
    std::string out_dir = default_out_dir(), suite;
    gen->add_option("--n", n, "Number of points")->check(CLI::PositiveNumber);
    gen->add_option("--d", d, "Dimension")->check(CLI::PositiveNumber);
    gen->add_option("--o", o, "Planted outliers")->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", seed, "Base seed");
    gen->add_option("--epsilon", epsilon, "Inlier threshold");
    gen->add_option("--inlier-noise", inlier_noise, "Inlier noise half-width");
    gen->add_option("--out", out_dir, "Output directory");
    gen->add_option("--suite", suite, "Named suite (fig5: o in {2,4,6,8,10})")
        ->check(CLI::IsMember({"fig5"}));
    gen->add_option("--seeds", suite_seeds, "Seeds per suite point")
        ->check(CLI::PositiveNumber);

    // --- solve ---
    auto* solve = app.add_subcommand("solve", "Solve one instance");
    std::string solve_path, variant_str = "napa-dibp", time_limit_str = "600s";
    std::string solve_out, trace_path;
    long node_limit_value = -1;
    bool check_oracle = false;
    solve->add_option("instance", solve_path, "Instance file")->required();
    solve->add_option("--variant", variant_str,
                      "astar | tod | napa | napa-tod | napa-dibp");
    solve->add_option("--time-limit", time_limit_str, "e.g. 90s, 1500ms, 10m");
    solve->add_option("--node-limit", node_limit_value, "Expansion cap (-1 = none)");
    solve->add_flag("--check-oracle", check_oracle,
                    "Also run the enumeration oracle and compare");
    solve->add_option("--out", solve_out, "Write the row as CSV");
    solve->add_option("--trace", trace_path, "Write a per-expansion trace CSV");

    // --- bench ---
    auto* bench = app.add_subcommand("bench", "Run an instance x variant table");
    std::vector<std::string> bench_inputs;
    std::string bench_variants = "astar,tod,napa,napa-tod,napa-dibp";
    std::string bench_time_limit = "600s", bench_out_dir = default_out_dir();
    std::string bench_out_csv, bench_agg_csv;
    int jobs = 1;
    bench->add_option("instances", bench_inputs, "Instance files or directories")
        ->required();
    bench->add_option("--variants", bench_variants, "Comma-separated variant list");
    bench->add_option("--time-limit", bench_time_limit, "Per-solve wall clock cap");
    bench->add_option("--jobs", jobs, "Parallel instances")->check(CLI::PositiveNumber);
    bench->add_option("--out-dir", bench_out_dir, "Output directory");
    bench->add_option("--out", bench_out_csv, "Rows CSV path");
    bench->add_option("--aggregate", bench_agg_csv, "Aggregate CSV path");

    // --- oracle ---
    auto* oracle = app.add_subcommand("oracle", "Exact enumeration (and LO-RANSAC)");
    std::string oracle_path;
    int lo_iterations = 0;
    std::uint64_t oracle_seed = 1;
    oracle->add_option("instance", oracle_path, "Instance file")->required();
    oracle->add_option("--lo-ransac", lo_iterations, "Also run LO-RANSAC with this many iterations");
    oracle->add_option("--seed", oracle_seed, "LO-RANSAC seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return run_gen(n, d, o, seed, epsilon, inlier_noise, out_dir, suite,
                           suite_seeds);
        if (solve->parsed())
            return run_solve_cmd(solve_path, variant_str, time_limit_str,
                                 node_limit_value < 0
                                     ? std::nullopt
                                     : std::optional<long>(node_limit_value),
                                 check_oracle, solve_out, trace_path);
        if (bench->parsed())
            return run_bench_cmd(bench_inputs, bench_variants, bench_time_limit, jobs,
                                 bench_out_dir, bench_out_csv, bench_agg_csv);
        if (oracle->parsed()) return run_oracle_cmd(oracle_path, lo_iterations, oracle_seed);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const DimensionMismatch& e) {
        std::cerr << "dimension mismatch: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitBadInput;
    }
    return kExitOk;
}
