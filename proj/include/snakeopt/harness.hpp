#pragma once

// Experiment orchestration: algorithm x function x trial grids, the strategy
// ablation ladder, and CSV / JSON export of the results.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "snakeopt/benchfns.hpp"
#include "snakeopt/core.hpp"
#include "snakeopt/rivals.hpp"
#include "snakeopt/snake.hpp"
#include "snakeopt/stats.hpp"

namespace snakeopt {

// ---------------------------------------------------------------------------
// Algorithm registry
//
//   so                 every improvement enabled
//   so-vanilla         no improvements
//   so+gps+flight ...  vanilla plus the listed improvements
//                      (gps, adaptive, mutation, flight)
//   pso de ga gwo woa  rivals
//   random             uniform random search

inline std::optional<StrategyToggles> parse_snake_variant(std::string_view name) {
    if (name == "so") return StrategyToggles::all();
    if (name == "so-vanilla") return StrategyToggles::none();
    if (!name.starts_with("so+")) return std::nullopt;
    StrategyToggles t;
    std::string_view rest = name.substr(3);
    while (!rest.empty()) {
        const auto cut = rest.find('+');
        const auto token = rest.substr(0, cut);
        if (token == "gps") t.gps_init = true;
        else if (token == "adaptive") t.adaptive_params = true;
        else if (token == "mutation") t.dual_mutation = true;
        else if (token == "flight") t.flight = true;
        else return std::nullopt;
        rest = cut == std::string_view::npos ? std::string_view{} : rest.substr(cut + 1);
    }
    return t;
}

inline std::optional<RivalAlgorithm> parse_rival(std::string_view name) {
    for (auto a : {RivalAlgorithm::pso, RivalAlgorithm::de, RivalAlgorithm::ga, RivalAlgorithm::gwo,
                   RivalAlgorithm::woa})
        if (rival_name(a) == name) return a;
    return std::nullopt;
}

inline bool is_known_algorithm(std::string_view name) {
    return name == "random" || parse_snake_variant(name) || parse_rival(name);
}

enum class BudgetMode { uniform_pop, table4_pop };

constexpr std::string_view budget_mode_name(BudgetMode m) {
    return m == BudgetMode::uniform_pop ? "uniform_pop" : "table4_pop";
}

inline BudgetMode parse_budget_mode(std::string_view s) {
    if (s == "uniform_pop") return BudgetMode::uniform_pop;
    if (s == "table4_pop") return BudgetMode::table4_pop;
    throw std::invalid_argument("unknown budget mode '" + std::string(s) + "'");
}

/// Population size for an algorithm under the given budget mode.
inline std::size_t population_for(std::string_view name, BudgetMode mode, std::size_t uniform_pop) {
    if (mode == BudgetMode::uniform_pop) return uniform_pop;
    if (auto r = parse_rival(name)) return RivalConfig::defaults(*r).pop_size;
    if (parse_snake_variant(name)) return 30;
    return uniform_pop;
}

inline RunResult run_algorithm(std::string_view name, Objective& obj, const SearchSpace& space,
                               std::size_t pop_size, std::size_t max_iter, RngStream& rng,
                               const IterationHook& hook = {}) {
    if (auto toggles = parse_snake_variant(name)) {
        SnakeConfig cfg;
        cfg.pop_size = pop_size;
        cfg.max_iter = max_iter;
        cfg.toggles = *toggles;
        cfg.on_iteration = hook;
        return run_snake(obj, space, cfg, rng);
    }
    if (auto rival = parse_rival(name)) {
        RivalConfig cfg = RivalConfig::defaults(*rival);
        cfg.pop_size = pop_size;
        cfg.max_iter = max_iter;
        cfg.on_iteration = hook;
        return run_rival(obj, space, cfg, rng);
    }
    if (name == "random") return run_random_search(obj, space, pop_size, max_iter, rng, hook);
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Problems and specs

struct BenchmarkProblem {
    std::string id;
    SearchSpace space;
    ObjectiveFn fn;
    /// Known optimal value, used for error-based improvement percentages.
    double optimum_value = 0.0;
    nlohmann::json manifest;
};

inline std::vector<BenchmarkProblem> suite_problems(std::size_t dim,
                                                    const std::vector<std::string>& ids = {}) {
    std::vector<BenchmarkProblem> out;
    for (auto& f : make_suite(dim)) {
        const std::string id(f.label());
        if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
        auto shared = std::make_shared<const TestFunction>(std::move(f));
        out.push_back({id, TestFunction::domain(dim),
                       [shared](std::span<const double> x) { return (*shared)(x); },
                       shared->bias(), shared->manifest()});
    }
    for (const auto& id : ids) {
        if (std::none_of(out.begin(), out.end(), [&](const auto& p) { return p.id == id; }))
            throw std::invalid_argument("unknown suite function '" + id + "'");
    }
    return out;
}

struct ExperimentSpec {
    std::vector<std::string> algorithms{"so", "so-vanilla"};
    /// Suite ids (F1..F10); empty selects the whole suite.
    std::vector<std::string> functions;
    std::size_t dim = 20;
    std::size_t pop_size = 30;
    std::size_t max_iter = 500;
    std::size_t trials = 20;
    std::uint64_t master_seed = 1;
    BudgetMode budget_mode = BudgetMode::uniform_pop;
    /// Worker threads; 0 picks the hardware concurrency.
    std::size_t workers = 1;
    /// When set, every algorithm uses the same random stream for trial k
    /// (common random numbers, as in the ablation ladder).
    bool shared_streams = false;

    void validate() const {
        if (algorithms.empty()) throw std::invalid_argument("experiment needs at least one algorithm");
        for (const auto& a : algorithms)
            if (!is_known_algorithm(a)) throw std::invalid_argument("unknown algorithm '" + a + "'");
        for (std::size_t i = 0; i < algorithms.size(); ++i)
            for (std::size_t j = i + 1; j < algorithms.size(); ++j)
                if (algorithms[i] == algorithms[j])
                    throw std::invalid_argument("duplicate algorithm '" + algorithms[i] + "'");
        if (trials < 2) throw std::invalid_argument("trials must be >= 2");
        if (pop_size < 4) throw std::invalid_argument("pop_size must be >= 4");
        if (max_iter < 2) throw std::invalid_argument("max_iter must be >= 2");
        if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    }

    std::uint64_t stream_seed(std::size_t trial, std::string_view algorithm,
                              std::string_view function) const {
        return derive_seed(master_seed, trial, shared_streams ? 0 : hash_name(algorithm),
                           hash_name(function));
    }
};

inline nlohmann::json to_json(const ExperimentSpec& s) {
    return {{"algorithms", s.algorithms},
            {"functions", s.functions},
            {"dim", s.dim},
            {"pop_size", s.pop_size},
            {"max_iter", s.max_iter},
            {"trials", s.trials},
            {"master_seed", s.master_seed},
            {"budget_mode", budget_mode_name(s.budget_mode)},
            {"workers", s.workers},
            {"shared_streams", s.shared_streams}};
}

/// Missing keys keep their defaults; unknown keys are rejected.
inline ExperimentSpec experiment_spec_from_json(const nlohmann::json& j, ExperimentSpec s = {}) {
    if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "algorithms") s.algorithms = value.get<std::vector<std::string>>();
        else if (key == "functions") s.functions = value.get<std::vector<std::string>>();
        else if (key == "dim") s.dim = value.get<std::size_t>();
        else if (key == "pop_size") s.pop_size = value.get<std::size_t>();
        else if (key == "max_iter") s.max_iter = value.get<std::size_t>();
        else if (key == "trials") s.trials = value.get<std::size_t>();
        else if (key == "master_seed") s.master_seed = value.get<std::uint64_t>();
        else if (key == "budget_mode") s.budget_mode = parse_budget_mode(value.get<std::string>());
        else if (key == "workers") s.workers = value.get<std::size_t>();
        else if (key == "shared_streams") s.shared_streams = value.get<bool>();
        else throw std::invalid_argument("unknown experiment config key '" + key + "'");
    }
    return s;
}

// ---------------------------------------------------------------------------
// Reports

struct CellReport {
    std::string algorithm;
    std::string function;
    std::vector<RunResult> runs;
    std::vector<std::uint64_t> seeds;
    TrialSample sample;
    Description stats;
    int rank = 0;
    bool failed = false;
    std::string error;
    double wall_seconds = 0.0;
};

struct PairwiseComparison {
    std::string reference;
    std::string rival;
    std::string function;
    WilcoxonResult result;
};

struct ExperimentReport {
    ExperimentSpec spec;
    std::vector<std::string> functions;
    nlohmann::json manifest;
    /// Algorithm-major: cells[a * functions.size() + f].
    std::vector<CellReport> cells;
    /// First algorithm against every other, per function.
    std::vector<PairwiseComparison> comparisons;

    const CellReport& cell(std::string_view algorithm, std::string_view function) const {
        for (const auto& c : cells)
            if (c.algorithm == algorithm && c.function == function) return c;
        throw std::out_of_range("no cell for " + std::string(algorithm) + "/" + std::string(function));
    }

    std::size_t failed_cells() const {
        return static_cast<std::size_t>(
            std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.failed; }));
    }

    SignCounts signs(std::string_view rival) const {
        std::vector<WilcoxonResult> rs;
        for (const auto& c : comparisons)
            if (c.rival == rival) rs.push_back(c.result);
        return sign_summary(rs);
    }
};

namespace detail {

inline void run_jobs(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& job) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) job(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// Runs every (algorithm, function, trial) job. Failures are recorded per
/// cell and never abort the grid. Deterministic in spec.master_seed.
inline ExperimentReport run_experiment(const ExperimentSpec& spec,
                                       const std::vector<BenchmarkProblem>& problems) {
    spec.validate();
    if (problems.empty()) throw std::invalid_argument("experiment needs at least one function");
    const std::size_t n_alg = spec.algorithms.size();
    const std::size_t n_fn = problems.size();
    const std::size_t n_trial = spec.trials;

    ExperimentReport report;
    report.spec = spec;
    report.manifest = nlohmann::json::array();
    for (const auto& p : problems) {
        report.functions.push_back(p.id);
        report.manifest.push_back(p.manifest.is_null() ? nlohmann::json{{"id", p.id}} : p.manifest);
    }

    struct Slot {
        std::optional<RunResult> run;
        std::string error;
        double seconds = 0.0;
        std::uint64_t seed = 0;
    };
    std::vector<Slot> slots(n_alg * n_fn * n_trial);

    detail::run_jobs(slots.size(), spec.workers, [&](std::size_t idx) {
        const std::size_t a = idx / (n_fn * n_trial);
        const std::size_t f = (idx / n_trial) % n_fn;
        const std::size_t k = idx % n_trial;
        const auto& alg = spec.algorithms[a];
        const auto& prob = problems[f];
        Slot& slot = slots[idx];
        slot.seed = spec.stream_seed(k, alg, prob.id);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            Objective obj(prob.space.dim(), prob.fn);
            RngStream rng(slot.seed);
            slot.run = run_algorithm(alg, obj, prob.space,
                                     population_for(alg, spec.budget_mode, spec.pop_size),
                                     spec.max_iter, rng);
        } catch (const std::exception& e) {
            slot.error = e.what();
        }
        slot.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });

    for (std::size_t a = 0; a < n_alg; ++a) {
        for (std::size_t f = 0; f < n_fn; ++f) {
            CellReport cell;
            cell.algorithm = spec.algorithms[a];
            cell.function = problems[f].id;
            cell.sample = {cell.algorithm, cell.function, {}};
            for (std::size_t k = 0; k < n_trial; ++k) {
                Slot& s = slots[(a * n_fn + f) * n_trial + k];
                cell.wall_seconds += s.seconds;
                cell.seeds.push_back(s.seed);
                if (!s.run) {
                    if (!cell.failed) cell.error = "trial " + std::to_string(k) + ": " + s.error;
                    cell.failed = true;
                    continue;
                }
                cell.sample.values.push_back(s.run->best_fitness);
                cell.runs.push_back(std::move(*s.run));
            }
            if (!cell.failed) cell.stats = describe(cell.sample.values);
            report.cells.push_back(std::move(cell));
        }
    }

    for (std::size_t f = 0; f < n_fn; ++f) {
        std::vector<std::size_t> ok;
        std::vector<double> means;
        for (std::size_t a = 0; a < n_alg; ++a) {
            const auto& c = report.cells[a * n_fn + f];
            if (c.failed) continue;
            ok.push_back(a * n_fn + f);
            means.push_back(c.stats.mean);
        }
        if (ok.size() == 1) report.cells[ok[0]].rank = 1;
        if (ok.size() >= 2) {
            const auto ranks = rank_algorithms(means);
            for (std::size_t i = 0; i < ok.size(); ++i) report.cells[ok[i]].rank = ranks[i];
        }
        const auto& ref = report.cells[f];
        if (ref.failed) continue;
        for (std::size_t a = 1; a < n_alg; ++a) {
            const auto& riv = report.cells[a * n_fn + f];
            if (riv.failed) continue;
            report.comparisons.push_back({ref.algorithm, riv.algorithm, ref.function,
                                          wilcoxon_rank_sum(ref.sample.values, riv.sample.values)});
        }
    }
    return report;
}

inline ExperimentReport run_experiment(const ExperimentSpec& spec) {
    return run_experiment(spec, suite_problems(spec.dim, spec.functions));
}

// ---------------------------------------------------------------------------
// Ablation ladder

/// Vanilla, then one improvement added per rung, then the full optimizer.
/// The fifth rung already carries every toggle, so it reproduces the last one.
inline std::vector<std::string> ablation_rungs() {
    return {"so-vanilla",
            "so+gps",
            "so+gps+adaptive",
            "so+gps+adaptive+mutation",
            "so+gps+adaptive+mutation+flight",
            "so"};
}

struct LadderRow {
    std::string rung;
    std::string function;
    double mean = 0.0;
    double std = 0.0;
    double median = 0.0;
    /// Reduction of the mean error (mean - optimum) relative to the vanilla rung, percent.
    double improvement_pct = 0.0;
    /// Same reduction relative to the previous rung.
    double step_pct = 0.0;
    Verdict vs_vanilla = Verdict::equal;
    double p_vs_vanilla = 1.0;
};

struct AblationReport {
    ExperimentReport report;
    std::vector<LadderRow> ladder;
};

inline AblationReport run_ablation(ExperimentSpec spec, const std::vector<BenchmarkProblem>& problems) {
    spec.algorithms = ablation_rungs();
    spec.shared_streams = true;
    AblationReport out;
    out.report = run_experiment(spec, problems);
    const auto reduction = [](double before, double after) {
        return before > 0.0 ? 100.0 * (before - after) / before : 0.0;
    };
    for (const auto& prob : problems) {
        const auto& vanilla = out.report.cell("so-vanilla", prob.id);
        double prev_err = 0.0;
        for (const auto& rung : spec.algorithms) {
            const auto& c = out.report.cell(rung, prob.id);
            LadderRow row;
            row.rung = rung;
            row.function = prob.id;
            if (c.failed || vanilla.failed) {
                out.ladder.push_back(row);
                continue;
            }
            row.mean = c.stats.mean;
            row.std = c.stats.std;
            row.median = median_of(c.sample.values);
            const double base_err = vanilla.stats.mean - prob.optimum_value;
            const double err = c.stats.mean - prob.optimum_value;
            row.improvement_pct = reduction(base_err, err);
            row.step_pct = rung == "so-vanilla" ? 0.0 : reduction(prev_err, err);
            prev_err = err;
            if (rung != "so-vanilla") {
                const auto w = wilcoxon_rank_sum(c.sample.values, vanilla.sample.values);
                row.vs_vanilla = w.verdict;
                row.p_vs_vanilla = w.p_value;
            }
            out.ladder.push_back(row);
        }
    }
    return out;
}

inline AblationReport run_ablation(const ExperimentSpec& spec) {
    return run_ablation(spec, suite_problems(spec.dim, spec.functions));
}

// ---------------------------------------------------------------------------
// Export

enum class ExportFormat { csv, json };

/// Shortest text that parses back to the same double.
inline std::string format_number(double v) {
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

inline void close_output(std::ofstream& out, const std::filesystem::path& path) {
    out.close();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = open_output(path);
    out << text;
    close_output(out, path);
}

}  // namespace detail

inline nlohmann::json report_manifest(const ExperimentReport& r) {
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& c : r.cells)
        for (std::size_t k = 0; k < c.seeds.size(); ++k)
            seeds.push_back({{"algorithm", c.algorithm}, {"function", c.function}, {"trial", k},
                             {"seed", hex64(c.seeds[k])}});
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& c : r.cells)
        if (c.failed) failures.push_back({{"algorithm", c.algorithm}, {"function", c.function}, {"error", c.error}});
    return {{"spec", to_json(r.spec)}, {"functions", r.manifest}, {"streams", seeds}, {"failures", failures}};
}

inline std::string summary_csv(const ExperimentReport& r) {
    std::ostringstream os;
    os << "algorithm,function,best,worst,mean,std,rank\n";
    for (const auto& c : r.cells) {
        os << c.algorithm << ',' << c.function << ',';
        if (c.failed) os << "nan,nan,nan,nan,0\n";
        else
            os << format_number(c.stats.best) << ',' << format_number(c.stats.worst) << ','
               << format_number(c.stats.mean) << ',' << format_number(c.stats.std) << ',' << c.rank
               << '\n';
    }
    return os.str();
}

inline std::string wilcoxon_csv(const std::vector<PairwiseComparison>& rows) {
    std::ostringstream os;
    os << "ref,rival,function,p,verdict\n";
    for (const auto& c : rows)
        os << c.reference << ',' << c.rival << ',' << c.function << ','
           << format_number(c.result.p_value) << ',' << verdict_symbol(c.result.verdict) << '\n';
    return os.str();
}

inline std::string boxplot_csv(const ExperimentReport& r) {
    std::ostringstream os;
    os << "algorithm,function,trial,final_value\n";
    for (const auto& c : r.cells)
        for (std::size_t k = 0; k < c.runs.size(); ++k)
            os << c.algorithm << ',' << c.function << ',' << k << ','
               << format_number(c.runs[k].best_fitness) << '\n';
    return os.str();
}

inline std::string convergence_csv(const RunResult& run) {
    std::ostringstream os;
    os << "iter,best_so_far\n";
    for (std::size_t t = 0; t < run.history.size(); ++t)
        os << t << ',' << format_number(run.history[t]) << '\n';
    return os.str();
}

/// csv: summary.csv, wilcoxon.csv, boxplot.csv, convergence/<algo>_<fn>_<trial>.csv,
/// timing.csv and manifest.json. json: report.json and manifest.json.
/// Everything except timing.csv is a pure function of the report's results.
inline void export_report(const ExperimentReport& r, const std::filesystem::path& dir,
                          ExportFormat format = ExportFormat::csv) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());
    detail::write_text(dir / "manifest.json", report_manifest(r).dump(2) + "\n");

    if (format == ExportFormat::json) {
        nlohmann::json j;
        j["spec"] = to_json(r.spec);
        auto& cells = j["cells"] = nlohmann::json::array();
        for (const auto& c : r.cells) {
            nlohmann::json cj{{"algorithm", c.algorithm}, {"function", c.function},
                              {"failed", c.failed}, {"error", c.error}, {"rank", c.rank}};
            if (!c.failed)
                cj["stats"] = {{"best", c.stats.best}, {"worst", c.stats.worst},
                               {"mean", c.stats.mean}, {"std", c.stats.std}};
            cj["final_values"] = c.sample.values;
            auto& hist = cj["convergence"] = nlohmann::json::array();
            for (const auto& run : c.runs) hist.push_back(run.history);
            cells.push_back(std::move(cj));
        }
        auto& w = j["wilcoxon"] = nlohmann::json::array();
        for (const auto& c : r.comparisons)
            w.push_back({{"ref", c.reference}, {"rival", c.rival}, {"function", c.function},
                         {"p", c.result.p_value}, {"method", method_name(c.result.method)},
                         {"verdict", verdict_symbol(c.result.verdict)}});
        detail::write_text(dir / "report.json", j.dump(2) + "\n");
        return;
    }

    detail::write_text(dir / "summary.csv", summary_csv(r));
    detail::write_text(dir / "wilcoxon.csv", wilcoxon_csv(r.comparisons));
    detail::write_text(dir / "boxplot.csv", boxplot_csv(r));
    const fs::path conv = dir / "convergence";
    fs::create_directories(conv, ec);
    if (ec) throw std::runtime_error("cannot create '" + conv.string() + "': " + ec.message());
    for (const auto& c : r.cells)
        for (std::size_t k = 0; k < c.runs.size(); ++k)
            detail::write_text(conv / (c.algorithm + "_" + c.function + "_" + std::to_string(k) + ".csv"),
                               convergence_csv(c.runs[k]));
    std::ostringstream timing;
    timing << "algorithm,function,wall_seconds\n";
    for (const auto& c : r.cells)
        timing << c.algorithm << ',' << c.function << ',' << format_number(c.wall_seconds) << '\n';
    detail::write_text(dir / "timing.csv", timing.str());
}

inline std::string ladder_csv(const std::vector<LadderRow>& ladder) {
    std::ostringstream os;
    os << "rung,function,mean,std,median,improvement_pct,step_pct,p_vs_vanilla,verdict\n";
    for (const auto& row : ladder)
        os << row.rung << ',' << row.function << ',' << format_number(row.mean) << ','
           << format_number(row.std) << ',' << format_number(row.median) << ','
           << format_number(row.improvement_pct) << ',' << format_number(row.step_pct) << ','
           << format_number(row.p_vs_vanilla) << ',' << verdict_symbol(row.vs_vanilla) << '\n';
    return os.str();
}

inline void export_ablation(const AblationReport& a, const std::filesystem::path& dir) {
    export_report(a.report, dir, ExportFormat::csv);
    detail::write_text(dir / "ladder.csv", ladder_csv(a.ladder));
}

// ---------------------------------------------------------------------------
// Reading exported results back

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

/// Rows of a CSV file keyed by header name.
inline std::vector<std::map<std::string, std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("'" + path.string() + "' is empty");
    const auto header = split_csv_line(line);
    std::vector<std::map<std::string, std::string>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error("'" + path.string() + "' line " + std::to_string(lineno) +
                                     ": expected " + std::to_string(header.size()) + " fields");
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = fields[i];
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Final values per (algorithm, function), in trial order, from boxplot.csv.
using FinalValues = std::map<std::string, std::map<std::string, std::vector<double>>>;

inline FinalValues read_final_values(const std::filesystem::path& boxplot) {
    FinalValues out;
    for (const auto& row : read_csv(boxplot)) {
        const auto a = row.find("algorithm");
        const auto f = row.find("function");
        const auto v = row.find("final_value");
        if (a == row.end() || f == row.end() || v == row.end())
            throw std::runtime_error("'" + boxplot.string() + "' lacks boxplot columns");
        out[a->second][f->second].push_back(std::stod(v->second));
    }
    return out;
}

/// Rank-sum comparisons of `reference` against each rival on every function
/// both have values for.
inline std::vector<PairwiseComparison> compare_final_values(const FinalValues& values,
                                                            const std::string& reference,
                                                            const std::vector<std::string>& rivals) {
    const auto ref = values.find(reference);
    if (ref == values.end()) throw std::invalid_argument("reference '" + reference + "' not in results");
    std::vector<PairwiseComparison> out;
    for (const auto& rival : rivals) {
        const auto riv = values.find(rival);
        if (riv == values.end()) throw std::invalid_argument("rival '" + rival + "' not in results");
        for (const auto& [fn, ref_values] : ref->second) {
            const auto it = riv->second.find(fn);
            if (it == riv->second.end()) continue;
            out.push_back({reference, rival, fn, wilcoxon_rank_sum(ref_values, it->second)});
        }
    }
    return out;
}

}  // namespace snakeopt
