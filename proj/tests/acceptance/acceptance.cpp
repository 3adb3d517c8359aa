// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "snakeopt/snakeopt.hpp"

using namespace snakeopt;

namespace {

struct Result {
    bool pass;
    std::string detail;
};

double sphere(std::span<const double> x) { return std::inner_product(x.begin(), x.end(), x.begin(), 0.0); }

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Every optimizer on suite(10), pop 30, 100 iterations, 5 seeds: positions in
// bounds at every iteration, monotone best-so-far, identical reruns.
Result contract_suite() {
    const std::vector<std::string> algos{"so-vanilla", "so", "pso", "de", "ga", "gwo", "woa"};
    const auto problems = suite_problems(10);
    int violations = 0;
    std::string first;
    auto note = [&](const std::string& what) {
        if (violations++ == 0) first = what;
    };
    for (const auto& alg : algos)
        for (const auto& prob : problems)
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                const auto tag = alg + "/" + prob.id + "/" + std::to_string(seed);
                auto once = [&](bool check_bounds) {
                    Objective obj(10, prob.fn);
                    RngStream rng(derive_seed(seed, 0, hash_name(alg), hash_name(prob.id)));
                    IterationHook hook;
                    if (check_bounds)
                        hook = [&](std::size_t t, std::span<const Individual> members) {
                            for (const auto& m : members)
                                if (!prob.space.contains(m.position)) note(tag + " out of bounds at iter " + std::to_string(t));
                        };
                    return run_algorithm(alg, obj, prob.space, 30, 100, rng, hook);
                };
                const auto a = once(true);
                const auto b = once(false);
                if (a.history.size() != 100) note(tag + " history length");
                for (std::size_t t = 1; t < a.history.size(); ++t)
                    if (a.history[t] > a.history[t - 1]) {
                        note(tag + " history increases at " + std::to_string(t));
                        break;
                    }
                if (a.history != b.history || a.best_position != b.best_position) note(tag + " rerun differs");
            }
    return {violations == 0, std::to_string(algos.size() * problems.size() * 5) + " runs, " +
                                 std::to_string(violations) + " violations" + (first.empty() ? "" : " (" + first + ")")};
}

double sphere_median(StrategyToggles toggles) {
    const auto space = SearchSpace::cube(2, -100, 100);
    std::vector<double> finals;
    for (int s = 0; s < 20; ++s) {
        Objective obj(2, sphere);
        SnakeConfig cfg;
        cfg.pop_size = 10;
        cfg.max_iter = 100;
        cfg.toggles = toggles;
        RngStream rng(derive_seed(1, s, 0, hash_name("sphere")));
        finals.push_back(run_snake(obj, space, cfg, rng).best_fitness);
    }
    return median_of(finals);
}

Result vanilla_sanity() {
    const double med = sphere_median(StrategyToggles::none());
    return {med < 1e-2, "median " + num(med) + " < 1e-2"};
}

Result improvement_direction() {
    ExperimentSpec spec;
    spec.algorithms = {"so", "so-vanilla"};
    spec.dim = 10;
    spec.pop_size = 30;
    spec.max_iter = 500;
    spec.trials = 20;
    spec.shared_streams = true;
    spec.workers = 0;
    const auto r = run_experiment(spec);
    int no_worse = 0;
    std::ostringstream fns;
    for (const auto& fn : r.functions) {
        const bool ok = r.cell("so", fn).stats.mean <= r.cell("so-vanilla", fn).stats.mean;
        no_worse += ok;
        fns << ' ' << fn << (ok ? "<=" : ">");
    }
    const auto s = r.signs("so-vanilla");
    return {no_worse >= 6 && s.plus >= 2, "mean no worse on " + std::to_string(no_worse) + "/10 (need 6), significant wins " +
                                              std::to_string(s.plus) + " (need 2), signs (+" + std::to_string(s.plus) +
                                              " =" + std::to_string(s.equal) + " -" + std::to_string(s.minus) + ");" +
                                              fns.str()};
}

Result gps_discrepancy() {
    std::ostringstream os;
    bool pass = true;
    for (std::size_t s : {2u, 5u, 10u}) {
        const double gps = centered_l2_discrepancy(good_point_set(30, s));
        int wins = 0;
        for (int rep = 0; rep < 20; ++rep) {
            RngStream rng(derive_seed(77, rep, s, 0));
            std::vector<double> random;
            for (int k = 0; k < 100; ++k) {
                PointSet pts(30, Position(s));
                for (auto& p : pts)
                    for (auto& v : p) v = rng.uniform();
                random.push_back(centered_l2_discrepancy(pts));
            }
            wins += gps < median_of(random);
        }
        pass = pass && wins >= 18;
        os << "s=" << s << ": " << wins << "/20 ";
    }
    return {pass, os.str() + "(need 18/20 each)"};
}

Result adaptive_ranges() {
    constexpr double tol = 1e-12;
    const auto space = SearchSpace::cube(10, -100, 100);
    Objective obj(10, sphere);
    SnakeConfig cfg;
    cfg.max_iter = 500;
    cfg.toggles = StrategyToggles::all();
    RngStream rng(1);
    SnakeTrace trace;
    run_snake(obj, space, cfg, rng, &trace);
    auto in = [&](double v, double lo, double hi) { return v >= lo - tol && v <= hi + tol; };
    std::size_t bad = 0;
    double lo_c1 = 1e9, hi_c1 = -1e9, lo_c3 = 1e9, hi_c3 = -1e9;
    for (const auto& p : trace.params) {
        bad += !in(p.c1, 0, 1) || !in(p.c3, 0, 4) || !in(p.food_threshold, 0.25, 0.75) ||
               !in(p.temp_threshold, 0.3, 0.7);
        lo_c1 = std::min(lo_c1, p.c1);
        hi_c1 = std::max(hi_c1, p.c1);
        lo_c3 = std::min(lo_c3, p.c3);
        hi_c3 = std::max(hi_c3, p.c3);
    }
    const bool pass = bad == 0 && trace.params.size() == 500;
    return {pass, std::to_string(trace.params.size()) + " iterations, " + std::to_string(bad) +
                      " out of range; c1 in [" + num(lo_c1) + ", " + num(hi_c1) + "], c3 in [" + num(lo_c3) + ", " +
                      num(hi_c3) + "]"};
}

Result wilcoxon_oracle() {
    const double p1 = wilcoxon_rank_sum(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6}).p_value;
    const double p2 = wilcoxon_rank_sum(std::vector<double>{1, 3}, std::vector<double>{2, 4}).p_value;
    RngStream rng(2024);
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
        std::vector<double> x(10), y(10);
        const double shift = rng.uniform(0.0, 1.5);
        for (auto& v : x) v = rng.normal();
        for (auto& v : y) v = rng.normal() + shift;
        const double e = wilcoxon_rank_sum_with(x, y, WilcoxonMethod::exact).p_value;
        const double a = wilcoxon_rank_sum_with(x, y, WilcoxonMethod::normal_approx).p_value;
        worst = std::max(worst, std::abs(e - a));
    }
    const bool pass = p1 == 0.1 && std::abs(p2 - 2.0 / 3.0) < 1e-12 && worst < 0.02;
    return {pass, "p({1,2,3},{4,5,6}) = " + num(p1) + ", p({1,3},{2,4}) = " + num(p2) +
                      ", max |exact - approx| over 100 cases = " + num(worst) + " < 0.02"};
}

Result optimum_witness() {
    double worst = 0;
    int checked = 0;
    for (std::size_t dim : {2u, 10u, 20u})
        for (const auto& f : make_suite(dim)) {
            worst = std::max(worst, std::abs(f(f.optimum()) - f.bias()));
            ++checked;
        }
    const auto s = make_suite(10);
    const bool biases = s.front().bias() == 300 && s.back().bias() == 2700;
    return {worst <= 1e-9 && biases, std::to_string(checked) + " functions, max |f(opt) - bias| = " + num(worst)};
}

Result mutation_distributions() {
    const auto space = SearchSpace::cube(1, -1e9, 1e9);
    RngStream rng(5);
    std::vector<double> cauchy, gauss;
    for (int i = 0; i < 100000; ++i) {
        cauchy.push_back(std::abs(cauchy_mutate(std::vector<double>{0.0}, 0.05, space, rng)[0]));
        gauss.push_back(gaussian_mutate(std::vector<double>{0.0}, 0.1, space, rng)[0]);
    }
    const double med = median_of(cauchy);
    const double sd = describe(gauss).std;
    return {std::abs(med - 0.05) <= 0.005 && std::abs(sd - 0.1) <= 0.002,
            "Cauchy median |step| " + num(med) + " (0.05 +/- 0.005), Gaussian std " + num(sd) + " (0.1 +/- 0.002)"};
}

Result tune_direction() {
    std::vector<double> so, rnd;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        so.push_back(tune("so", 300, seed).loss);
        rnd.push_back(tune("random", 300, seed).loss);
    }
    const double a = median_of(so), b = median_of(rnd);
    return {a < b, "median best loss SO " + num(a) + " vs random " + num(b)};
}

Result ablation_ladder() {
    ExperimentSpec spec;
    spec.dim = 10;
    spec.functions = {"F1"};
    spec.workers = 0;
    const auto a = run_ablation(spec);
    const auto& full = a.ladder.back();
    const auto full_toggles = *parse_snake_variant(full.rung);
    bool pass = true;
    std::ostringstream os;
    for (const auto& row : a.ladder) {
        os << "\n    " << row.rung << ": mean " << num(row.mean) << " std " << num(row.std) << ", vs vanilla "
           << num(row.improvement_pct) << "%, step " << num(row.step_pct) << "%";
        if (parse_snake_variant(row.rung)->count() >= full_toggles.count()) continue;
        const double pooled = std::sqrt(0.5 * (row.std * row.std + full.std * full.std));
        const bool ok = full.mean <= row.mean + pooled;
        pass = pass && ok;
        os << (ok ? "  [full within one pooled std]" : "  [full exceeds by more than one pooled std]");
    }
    return {pass, "full rung mean " + num(full.mean) + os.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Result()>>> checks{
        {"contract suite", contract_suite},
        {"vanilla sanity", vanilla_sanity},
        {"improvement direction", improvement_direction},
        {"gps discrepancy", gps_discrepancy},
        {"adaptive ranges", adaptive_ranges},
        {"wilcoxon oracle", wilcoxon_oracle},
        {"optimum witness", optimum_witness},
        {"mutation distributions", mutation_distributions},
        {"tune direction", tune_direction},
        {"ablation ladder", ablation_ladder},
    };
    int failures = 0;
    for (const auto& [name, check] : checks) {
        const auto t0 = std::chrono::steady_clock::now();
        Result v{false, ""};
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !v.pass;
        std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << " [" << num(secs) << " s]"
                  << std::endl;
    }
    std::cout << (failures == 0 ? "all acceptance criteria pass" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
