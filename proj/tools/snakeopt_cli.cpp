// snakeopt command line: bench, ablate, stats and tune-demo.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 some grid cells failed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "snakeopt/snakeopt.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace snakeopt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::size_t default_workers() {
    if (const char* env = std::getenv("SNAKEOPT_WORKERS")) {
        try {
            return static_cast<std::size_t>(std::stoul(env));
        } catch (const std::exception&) {
            throw UsageError(std::string("SNAKEOPT_WORKERS is not a count: '") + env + "'");
        }
    }
    return 1;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("config '" + path + "': " + e.what());
    }
}

void write_snapshot(const fs::path& path, const json& config) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    out << config.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

/// Config keys owned by the CLI rather than the experiment spec.
json take(json& config, const std::string& key) {
    if (!config.is_object() || !config.contains(key)) return nullptr;
    json v = config[key];
    config.erase(key);
    return v;
}

// ---------------------------------------------------------------------------

struct BenchFlags {
    std::string config;
    std::string suite = "cec-like";
    std::size_t dim = 10;
    std::size_t pop = 30;
    std::size_t iters = 500;
    std::size_t trials = 20;
    std::string algos;
    std::string functions;
    std::uint64_t seed = 1;
    std::string out;
    std::size_t workers = 0;
    std::string budget_mode;
    std::string format = "csv";
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

/// Config file first, then every flag given on the command line.
ExperimentSpec resolve_spec(const BenchFlags& f, const CLI::App& cmd, json& cli_extra) {
    ExperimentSpec spec;
    spec.dim = 10;
    spec.workers = default_workers();
    if (!f.config.empty()) {
        json cfg = read_json_file(f.config);
        take(cfg, "command");
        cli_extra["suite"] = take(cfg, "suite");
        cli_extra["format"] = take(cfg, "format");
        try {
            spec = experiment_spec_from_json(cfg, spec);
        } catch (const std::exception& e) {
            throw UsageError("config '" + f.config + "': " + e.what());
        }
    }
    const auto given = [&](const char* name) {
        const auto* opt = cmd.get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (given("--dim")) spec.dim = f.dim;
    if (given("--pop")) spec.pop_size = f.pop;
    if (given("--iters")) spec.max_iter = f.iters;
    if (given("--trials")) spec.trials = f.trials;
    if (given("--algos")) spec.algorithms = split_list(f.algos);
    if (given("--functions")) spec.functions = split_list(f.functions);
    if (given("--seed")) spec.master_seed = f.seed;
    if (given("--workers")) spec.workers = f.workers;
    if (given("--budget-mode")) spec.budget_mode = parse_budget_mode(f.budget_mode);
    if (given("--suite") || cli_extra["suite"].is_null()) cli_extra["suite"] = f.suite;
    if (given("--format") || cli_extra["format"].is_null()) cli_extra["format"] = f.format;

    if (cli_extra["suite"] != "cec-like")
        throw UsageError("unknown suite '" + cli_extra["suite"].dump() + "' (available: cec-like)");
    if (cli_extra["format"] != "csv" && cli_extra["format"] != "json")
        throw UsageError("--format must be csv or json");
    if (!suite_supports_dim(spec.dim))
        throw UsageError("suite cec-like supports --dim 2, 10 or 20, not " + std::to_string(spec.dim));
    for (const auto& a : spec.algorithms)
        if (!is_known_algorithm(a)) throw UsageError("unknown algorithm '" + a + "'");
    spec.validate();
    return spec;
}

int report_failures(const ExperimentReport& r) {
    if (r.failed_cells() == 0) return kExitOk;
    std::cerr << r.failed_cells() << " of " << r.cells.size() << " cells failed:\n";
    for (const auto& c : r.cells)
        if (c.failed) std::cerr << "  " << c.algorithm << " / " << c.function << ": " << c.error << '\n';
    return kExitPartial;
}

json snapshot_of(const std::string& command, const ExperimentSpec& spec, const json& extra) {
    json j = to_json(spec);
    j["command"] = command;
    for (const auto& [k, v] : extra.items()) j[k] = v;
    return j;
}

void add_experiment_flags(CLI::App& cmd, BenchFlags& f) {
    cmd.add_option("--config", f.config, "JSON experiment config; flags override its fields");
    cmd.add_option("--dim", f.dim, "problem dimension (2, 10 or 20)");
    cmd.add_option("--pop", f.pop, "population size");
    cmd.add_option("--iters", f.iters, "iterations per run");
    cmd.add_option("--trials", f.trials, "independent trials per cell");
    cmd.add_option("--functions", f.functions, "comma-separated suite ids, e.g. F1,F6");
    cmd.add_option("--seed", f.seed, "master seed");
    cmd.add_option("--out", f.out, "output directory")->required();
    cmd.add_option("--workers", f.workers, "worker threads (default $SNAKEOPT_WORKERS or 1)");
    cmd.add_option("--budget-mode", f.budget_mode, "uniform_pop or table4_pop");
}

int cmd_bench(const BenchFlags& f, const CLI::App& cmd) {
    json extra = json::object();
    const ExperimentSpec spec = resolve_spec(f, cmd, extra);
    const auto report = run_experiment(spec);
    const auto format = extra["format"] == "json" ? ExportFormat::json : ExportFormat::csv;
    export_report(report, f.out, format);
    write_snapshot(fs::path(f.out) / "config.json", snapshot_of("bench", spec, extra));
    std::cout << "bench: " << report.cells.size() << " cells, " << spec.trials << " trials -> " << f.out
              << '\n';
    return report_failures(report);
}

int cmd_ablate(const BenchFlags& f, const CLI::App& cmd) {
    json extra = json::object();
    ExperimentSpec spec = resolve_spec(f, cmd, extra);
    if (cmd.get_option("--functions")->count() == 0 && f.config.empty()) spec.functions = {"F1"};
    spec.algorithms = ablation_rungs();
    spec.shared_streams = true;
    const auto ablation = run_ablation(spec);
    export_ablation(ablation, f.out);
    write_snapshot(fs::path(f.out) / "config.json", snapshot_of("ablate", spec, extra));
    for (const auto& row : ablation.ladder)
        std::cout << row.function << ' ' << row.rung << ": mean " << format_number(row.mean)
                  << ", improvement " << format_number(row.improvement_pct) << "%\n";
    return report_failures(ablation.report);
}

struct StatsFlags {
    std::string in;
    std::string ref;
    std::string rivals;
    std::string out;
};

int cmd_stats(const StatsFlags& f) {
    const fs::path box = fs::path(f.in) / "boxplot.csv";
    if (!fs::exists(box)) throw UsageError("no boxplot.csv under '" + f.in + "'");
    const auto values = read_final_values(box);
    if (!values.contains(f.ref)) throw UsageError("reference '" + f.ref + "' not found in " + box.string());
    std::vector<std::string> rivals = split_list(f.rivals);
    if (rivals.empty())
        for (const auto& [name, _] : values)
            if (name != f.ref) rivals.push_back(name);
    for (const auto& r : rivals)
        if (!values.contains(r)) throw UsageError("rival '" + r + "' not found in " + box.string());
    const auto rows = compare_final_values(values, f.ref, rivals);

    const fs::path out = f.out.empty() ? fs::path(f.in) : fs::path(f.out);
    fs::create_directories(out);
    detail::write_text(out / "wilcoxon.csv", wilcoxon_csv(rows));
    std::ostringstream signs;
    signs << "ref,rival,plus,equal,minus\n";
    for (const auto& rival : rivals) {
        std::vector<WilcoxonResult> rs;
        for (const auto& row : rows)
            if (row.rival == rival) rs.push_back(row.result);
        const auto s = sign_summary(rs);
        signs << f.ref << ',' << rival << ',' << s.plus << ',' << s.equal << ',' << s.minus << '\n';
        std::cout << f.ref << " vs " << rival << ": (+" << s.plus << ", =" << s.equal << ", -" << s.minus
                  << ")\n";
    }
    detail::write_text(out / "signs.csv", signs.str());
    write_snapshot(out / "stats_config.json",
                   {{"command", "stats"}, {"in", f.in}, {"ref", f.ref}, {"rivals", rivals}});
    return kExitOk;
}

struct TuneFlags {
    std::string config;
    std::string algo = "so";
    std::size_t budget = 300;
    std::uint64_t seed = 1;
    std::size_t pop = 10;
    std::string out = "tune-demo";
};

int cmd_tune_demo(TuneFlags f, const CLI::App& cmd) {
    if (!f.config.empty()) {
        json cfg = read_json_file(f.config);
        take(cfg, "command");
        const auto given = [&](const char* name) { return cmd.get_option(name)->count() > 0; };
        for (const auto& [key, value] : cfg.items()) {
            if (key == "algorithm") { if (!given("--algo")) f.algo = value.get<std::string>(); }
            else if (key == "budget") { if (!given("--budget")) f.budget = value.get<std::size_t>(); }
            else if (key == "seed") { if (!given("--seed")) f.seed = value.get<std::uint64_t>(); }
            else if (key == "pop_size") { if (!given("--pop")) f.pop = value.get<std::size_t>(); }
            else throw UsageError("unknown tune config key '" + key + "'");
        }
    }
    if (!is_known_algorithm(f.algo)) throw UsageError("unknown algorithm '" + f.algo + "'");
    if (f.budget < 20) throw UsageError("--budget must be >= 20");
    TuneOptions opts;
    opts.pop_size = f.pop;
    const auto result = tune(f.algo, f.budget, f.seed, opts);
    export_tune(result, f.out);
    write_snapshot(fs::path(f.out) / "config.json", {{"command", "tune-demo"},
                                                     {"algorithm", f.algo},
                                                     {"budget", f.budget},
                                                     {"seed", f.seed},
                                                     {"pop_size", f.pop}});
    std::cout << f.algo << ": loss " << format_number(result.loss) << " at nodes " << result.best.nodes
              << ", batch " << result.best.batch << ", lr " << format_number(result.best.lr) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Snake optimizer benchmarks, ablation, statistics and tuning demo"};
    app.require_subcommand(1);

    BenchFlags bench;
    auto* bench_cmd = app.add_subcommand("bench", "run an algorithm x function x trial grid");
    add_experiment_flags(*bench_cmd, bench);
    bench_cmd->add_option("--suite", bench.suite, "benchmark suite (cec-like)");
    bench_cmd->add_option("--algos", bench.algos, "comma-separated algorithms, first is the reference");
    bench_cmd->add_option("--format", bench.format, "csv or json");

    BenchFlags ablate;
    auto* ablate_cmd = app.add_subcommand("ablate", "run the six-rung strategy ladder");
    add_experiment_flags(*ablate_cmd, ablate);

    StatsFlags stats;
    auto* stats_cmd = app.add_subcommand("stats", "rank-sum tests from bench outputs");
    stats_cmd->add_option("--in", stats.in, "bench output directory")->required();
    stats_cmd->add_option("--ref", stats.ref, "reference algorithm")->required();
    stats_cmd->add_option("--rivals", stats.rivals, "comma-separated rivals (default: all others)");
    stats_cmd->add_option("--out", stats.out, "output directory (default: --in)");

    TuneFlags tunef;
    auto* tune_cmd = app.add_subcommand("tune-demo", "tune the surrogate predictor's hyperparameters");
    tune_cmd->add_option("--config", tunef.config, "JSON config; flags override its fields");
    tune_cmd->add_option("--algo", tunef.algo, "optimizer");
    tune_cmd->add_option("--budget", tunef.budget, "training runs");
    tune_cmd->add_option("--seed", tunef.seed, "seed for data, training and the optimizer");
    tune_cmd->add_option("--pop", tunef.pop, "population size");
    tune_cmd->add_option("--out", tunef.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*bench_cmd) return cmd_bench(bench, *bench_cmd);
        if (*ablate_cmd) return cmd_ablate(ablate, *ablate_cmd);
        if (*stats_cmd) return cmd_stats(stats);
        if (*tune_cmd) return cmd_tune_demo(tunef, *tune_cmd);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
