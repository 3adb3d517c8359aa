#pragma once

// Classical comparison optimizers: global-best PSO, DE/rand/1/bin, a real-coded
// GA, the grey wolf optimizer and the whale optimization algorithm. Defaults
// follow the comparison table settings (population sizes included); the
// harness overrides pop_size when budgets are equalized.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "snakeopt/core.hpp"

namespace snakeopt {

enum class RivalAlgorithm { pso, de, ga, gwo, woa };

constexpr std::string_view rival_name(RivalAlgorithm a) {
    switch (a) {
        case RivalAlgorithm::pso: return "pso";
        case RivalAlgorithm::de: return "de";
        case RivalAlgorithm::ga: return "ga";
        case RivalAlgorithm::gwo: return "gwo";
        case RivalAlgorithm::woa: return "woa";
    }
    return "?";
}

struct RivalConfig {
    RivalAlgorithm algorithm = RivalAlgorithm::pso;
    std::size_t pop_size = 30;
    std::size_t max_iter = 500;
    std::map<std::string, double> params;
    /// Optional starting positions (size must equal pop_size); random when empty.
    std::vector<Position> initial_positions;
    IterationHook on_iteration;

    static RivalConfig defaults(RivalAlgorithm a) {
        RivalConfig c;
        c.algorithm = a;
        switch (a) {
            case RivalAlgorithm::pso:
                c.pop_size = 30;
                c.params = {{"inertia", 0.5}, {"cognitive", 1.5}, {"social", 1.5},
                            {"velocity_clamp", 0.5}};
                break;
            case RivalAlgorithm::de:
                c.pop_size = 50;
                c.params = {{"F", 0.5}, {"CR", 0.3}};
                break;
            case RivalAlgorithm::ga:
                c.pop_size = 10;
                c.params = {{"crossover_prob", 0.5}, {"mutation_prob", 0.2},
                            {"mutation_sigma", 0.1}, {"elites", 1}};
                break;
            case RivalAlgorithm::gwo:
                c.pop_size = 30;
                c.params = {{"a_initial", 2.0}};
                break;
            case RivalAlgorithm::woa:
                c.pop_size = 30;
                c.params = {{"a_initial", 2.0}, {"spiral_b", 0.5}};
                break;
        }
        return c;
    }

    double param(const std::string& key) const {
        auto it = params.find(key);
        if (it == params.end())
            throw std::invalid_argument("missing parameter '" + key + "' for " +
                                        std::string(rival_name(algorithm)));
        return it->second;
    }
};

/// start * (1 - iter / max_iter): start at iter 0, zero at max_iter.
inline double linear_decay(std::size_t iter, std::size_t max_iter, double start = 2.0) {
    if (max_iter == 0) throw std::invalid_argument("max_iter must be positive");
    return start * (1.0 - static_cast<double>(iter) / static_cast<double>(max_iter));
}

namespace detail {

inline Population initial_population(const SearchSpace& space, const RivalConfig& cfg,
                                     RngStream& rng, Objective& obj) {
    Population pop;
    if (!cfg.initial_positions.empty()) {
        if (cfg.initial_positions.size() != cfg.pop_size)
            throw std::invalid_argument("initial_positions size differs from pop_size");
        for (const auto& p : cfg.initial_positions) pop.members.push_back({clamp(p, space)});
    } else {
        pop = random_init(space, cfg.pop_size, rng);
    }
    evaluate(pop, obj);
    return pop;
}

inline void check_run(const SearchSpace& space, const Objective& obj, const RivalConfig& cfg,
                      std::size_t min_pop) {
    if (obj.arity() != space.dim()) throw DimensionMismatch(space.dim(), obj.arity());
    if (cfg.pop_size < min_pop)
        throw std::invalid_argument(std::string(rival_name(cfg.algorithm)) +
                                    " needs pop_size >= " + std::to_string(min_pop));
    if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
}

inline void notify(const RivalConfig& cfg, std::size_t t, const Population& pop) {
    if (cfg.on_iteration) cfg.on_iteration(t, pop.members);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// PSO

/// Global-best PSO with zero initial velocities and velocity clamping.
inline RunResult run_pso(Objective& obj, const SearchSpace& space, const RivalConfig& cfg,
                         RngStream& rng) {
    detail::check_run(space, obj, cfg, 2);
    const double w = cfg.param("inertia");
    const double c1 = cfg.param("cognitive");
    const double c2 = cfg.param("social");
    const double vclamp = cfg.param("velocity_clamp");
    const std::uint64_t start = obj.eval_count();
    const std::size_t dim = space.dim();

    Population swarm = detail::initial_population(space, cfg, rng, obj);
    Population personal = swarm;
    std::vector<Position> velocity(swarm.size(), Position(dim, 0.0));
    Individual global = personal[personal.best_index()];

    BestSoFar best;
    best.offer(global);
    for (std::size_t t = 0; t < cfg.max_iter; ++t) {
        for (std::size_t i = 0; i < swarm.size(); ++i) {
            auto& x = swarm[i].position;
            auto& v = velocity[i];
            for (std::size_t j = 0; j < dim; ++j) {
                const double vmax = vclamp * space.width(j);
                v[j] = w * v[j] + c1 * rng.uniform() * (personal[i].position[j] - x[j]) +
                       c2 * rng.uniform() * (global.position[j] - x[j]);
                v[j] = std::clamp(v[j], -vmax, vmax);
                x[j] += v[j];
            }
            clamp_in_place(x, space);
            evaluate(swarm[i], obj);
            if (swarm[i].fitness < personal[i].fitness) personal[i] = swarm[i];
        }
        const auto& gb = personal[personal.best_index()];
        if (gb.fitness < global.fitness) global = gb;
        best.offer(global);
        best.record();
        detail::notify(cfg, t, swarm);
    }
    return std::move(best).finish(obj.eval_count() - start);
}

// ---------------------------------------------------------------------------
// DE

/// Binomial crossover: component j comes from the mutant when a draw is below
/// cr or j == j_rand.
inline Position de_binomial_crossover(std::span<const double> target,
                                      std::span<const double> mutant, double cr, RngStream& rng) {
    if (target.size() != mutant.size()) throw DimensionMismatch(target.size(), mutant.size());
    const std::size_t j_rand = rng.index(target.size());
    Position trial(target.begin(), target.end());
    for (std::size_t j = 0; j < trial.size(); ++j)
        if (rng.uniform() < cr || j == j_rand) trial[j] = mutant[j];
    return trial;
}

/// DE/rand/1/bin with greedy one-to-one selection.
inline RunResult run_de(Objective& obj, const SearchSpace& space, const RivalConfig& cfg,
                        RngStream& rng) {
    detail::check_run(space, obj, cfg, 4);
    const double f_scale = cfg.param("F");
    const double cr = cfg.param("CR");
    const std::uint64_t start = obj.eval_count();
    const std::size_t n = cfg.pop_size;

    Population pop = detail::initial_population(space, cfg, rng, obj);
    BestSoFar best;
    best.offer(pop);
    for (std::size_t t = 0; t < cfg.max_iter; ++t) {
        Population next = pop;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r1, r2, r3;
            do { r1 = rng.index(n); } while (r1 == i);
            do { r2 = rng.index(n); } while (r2 == i || r2 == r1);
            do { r3 = rng.index(n); } while (r3 == i || r3 == r1 || r3 == r2);
            Position mutant(space.dim());
            for (std::size_t j = 0; j < mutant.size(); ++j) {
                mutant[j] = pop[r1].position[j] +
                            f_scale * (pop[r2].position[j] - pop[r3].position[j]);
            }
            Individual trial{de_binomial_crossover(pop[i].position, mutant, cr, rng)};
            clamp_in_place(trial.position, space);
            evaluate(trial, obj);
            if (trial.fitness <= pop[i].fitness) next[i] = std::move(trial);
        }
        pop = std::move(next);
        best.offer(pop);
        best.record();
        detail::notify(cfg, t, pop);
    }
    return std::move(best).finish(obj.eval_count() - start);
}

// ---------------------------------------------------------------------------
// GA

/// Linear (arithmetic) crossover: lambda p1 + (1 - lambda) p2 and its mirror.
inline std::pair<Position, Position> arithmetic_crossover(std::span<const double> p1,
                                                          std::span<const double> p2,
                                                          double lambda) {
    if (p1.size() != p2.size()) throw DimensionMismatch(p1.size(), p2.size());
    Position a(p1.size());
    Position b(p1.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        a[j] = p2[j] + lambda * (p1[j] - p2[j]);
        b[j] = p1[j] + lambda * (p2[j] - p1[j]);
    }
    return {std::move(a), std::move(b)};
}

/// Generational GA: binary tournaments, arithmetic crossover, per-gene Gaussian
/// mutation (sigma as a fraction of box width) and elitism.
inline RunResult run_ga(Objective& obj, const SearchSpace& space, const RivalConfig& cfg,
                        RngStream& rng) {
    detail::check_run(space, obj, cfg, 2);
    const double pc = cfg.param("crossover_prob");
    const double pm = cfg.param("mutation_prob");
    const double sigma_frac = cfg.param("mutation_sigma");
    const auto elites = static_cast<std::size_t>(cfg.param("elites"));
    if (elites >= cfg.pop_size) throw std::invalid_argument("ga elites must be < pop_size");
    const std::uint64_t start = obj.eval_count();
    const std::size_t n = cfg.pop_size;

    Population pop = detail::initial_population(space, cfg, rng, obj);
    auto tournament = [&]() -> const Individual& {
        const auto& a = pop[rng.index(n)];
        const auto& b = pop[rng.index(n)];
        return a.fitness <= b.fitness ? a : b;
    };

    BestSoFar best;
    best.offer(pop);
    for (std::size_t t = 0; t < cfg.max_iter; ++t) {
        Population next;
        next.members.reserve(n);
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return pop[a].fitness < pop[b].fitness; });
        for (std::size_t e = 0; e < elites; ++e) next.members.push_back(pop[order[e]]);

        std::vector<Position> children;
        while (next.size() + children.size() < n) {
            const auto& p1 = tournament();
            const auto& p2 = tournament();
            if (rng.bernoulli(pc)) {
                auto [c1, c2] = arithmetic_crossover(p1.position, p2.position, rng.uniform());
                children.push_back(std::move(c1));
                children.push_back(std::move(c2));
            } else {
                children.push_back(p1.position);
                children.push_back(p2.position);
            }
        }
        children.resize(n - next.size());
        for (auto& c : children) {
            for (std::size_t j = 0; j < c.size(); ++j)
                if (rng.bernoulli(pm)) c[j] += rng.normal(0.0, sigma_frac * space.width(j));
            clamp_in_place(c, space);
            Individual child{std::move(c)};
            evaluate(child, obj);
            next.members.push_back(std::move(child));
        }
        pop = std::move(next);
        best.offer(pop);
        best.record();
        detail::notify(cfg, t, pop);
    }
    return std::move(best).finish(obj.eval_count() - start);
}

// ---------------------------------------------------------------------------
// GWO

/// Mean of the three leader-guided proposals for one wolf.
inline Position gwo_move(std::span<const double> x, std::span<const double> alpha,
                         std::span<const double> beta, std::span<const double> delta, double a,
                         RngStream& rng) {
    Position out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        double sum = 0.0;
        for (auto leader : {alpha, beta, delta}) {
            const double big_a = 2.0 * a * rng.uniform() - a;
            const double big_c = 2.0 * rng.uniform();
            const double d = std::abs(big_c * leader[j] - x[j]);
            sum += leader[j] - big_a * d;
        }
        out[j] = sum / 3.0;
    }
    return out;
}

inline RunResult run_gwo(Objective& obj, const SearchSpace& space, const RivalConfig& cfg,
                         RngStream& rng) {
    detail::check_run(space, obj, cfg, 3);
    const double a0 = cfg.param("a_initial");
    const std::uint64_t start = obj.eval_count();

    Population pack = detail::initial_population(space, cfg, rng, obj);
    // Leaders are the three best points seen so far.
    std::vector<Individual> leaders;
    auto update_leaders = [&]() {
        for (const auto& w : pack.members) {
            leaders.push_back(w);
        }
        std::stable_sort(leaders.begin(), leaders.end(),
                         [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; });
        leaders.resize(3);
    };
    update_leaders();

    BestSoFar best;
    best.offer(leaders.front());
    for (std::size_t t = 0; t < cfg.max_iter; ++t) {
        const double a = linear_decay(t, cfg.max_iter, a0);
        for (auto& wolf : pack.members) {
            wolf.position = gwo_move(wolf.position, leaders[0].position, leaders[1].position,
                                     leaders[2].position, a, rng);
            clamp_in_place(wolf.position, space);
            evaluate(wolf, obj);
        }
        update_leaders();
        best.offer(leaders.front());
        best.record();
        detail::notify(cfg, t, pack);
    }
    return std::move(best).finish(obj.eval_count() - start);
}

// ---------------------------------------------------------------------------
// WOA

/// Logarithmic spiral around `best`: |best - x| e^{b l} cos(2 pi l) + best.
inline Position woa_spiral(std::span<const double> x, std::span<const double> best, double l,
                           double b) {
    Position out(x.size());
    const double factor = std::exp(b * l) * std::cos(2.0 * std::numbers::pi * l);
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = std::abs(best[j] - x[j]) * factor + best[j];
    return out;
}

inline RunResult run_woa(Objective& obj, const SearchSpace& space, const RivalConfig& cfg,
                         RngStream& rng) {
    detail::check_run(space, obj, cfg, 2);
    const double a0 = cfg.param("a_initial");
    const double b = cfg.param("spiral_b");
    const std::uint64_t start = obj.eval_count();
    const std::size_t n = cfg.pop_size;

    Population pod = detail::initial_population(space, cfg, rng, obj);
    Individual leader = pod[pod.best_index()];
    BestSoFar best;
    best.offer(leader);
    for (std::size_t t = 0; t < cfg.max_iter; ++t) {
        const double a = linear_decay(t, cfg.max_iter, a0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& x = pod[i].position;
            const double big_a = 2.0 * a * rng.uniform() - a;
            const double big_c = 2.0 * rng.uniform();
            const double p = rng.uniform();
            const double l = rng.uniform(-1.0, 1.0);
            if (p < 0.5) {
                const Position& guide =
                    std::abs(big_a) < 1.0 ? leader.position : pod[rng.index(n)].position;
                Position y(x.size());
                for (std::size_t j = 0; j < x.size(); ++j)
                    y[j] = guide[j] - big_a * std::abs(big_c * guide[j] - x[j]);
                x = std::move(y);
            } else {
                x = woa_spiral(x, leader.position, l, b);
            }
            clamp_in_place(x, space);
            evaluate(pod[i], obj);
        }
        const auto& cand = pod[pod.best_index()];
        if (cand.fitness < leader.fitness) leader = cand;
        best.offer(leader);
        best.record();
        detail::notify(cfg, t, pod);
    }
    return std::move(best).finish(obj.eval_count() - start);
}

// ---------------------------------------------------------------------------

/// Uniform random sampling, pop_size fresh points per iteration. Baseline only.
inline RunResult run_random_search(Objective& obj, const SearchSpace& space, std::size_t pop_size,
                                   std::size_t max_iter, RngStream& rng,
                                   const IterationHook& hook = {}) {
    if (obj.arity() != space.dim()) throw DimensionMismatch(space.dim(), obj.arity());
    const std::uint64_t start = obj.eval_count();
    Population pop = random_init(space, pop_size, rng);
    evaluate(pop, obj);
    BestSoFar best;
    best.offer(pop);
    for (std::size_t t = 0; t < max_iter; ++t) {
        pop = random_init(space, pop_size, rng);
        evaluate(pop, obj);
        best.offer(pop);
        best.record();
        if (hook) hook(t, pop.members);
    }
    return std::move(best).finish(obj.eval_count() - start);
}

inline RunResult run_rival(Objective& obj, const SearchSpace& space, const RivalConfig& cfg,
                           RngStream& rng) {
    switch (cfg.algorithm) {
        case RivalAlgorithm::pso: return run_pso(obj, space, cfg, rng);
        case RivalAlgorithm::de: return run_de(obj, space, cfg, rng);
        case RivalAlgorithm::ga: return run_ga(obj, space, cfg, rng);
        case RivalAlgorithm::gwo: return run_gwo(obj, space, cfg, rng);
        case RivalAlgorithm::woa: return run_woa(obj, space, cfg, rng);
    }
    throw std::invalid_argument("unknown rival algorithm");
}

}  // namespace snakeopt
