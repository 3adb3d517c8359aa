#pragma once

// Snake Optimizer with four independently switchable improvements:
// good-point-set initialization, periodic adaptive control parameters,
// dual (main + auxiliary) mutation, and Levy / random-walk flight.
//
// With every toggle off the run is the plain male/female snake optimizer:
// exploration while food is scarce, otherwise food seeking when hot and
// fighting or mating when cold. Candidate moves replace an individual only
// when they improve its fitness; hatching replaces the worst male and female
// unconditionally.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "snakeopt/core.hpp"
#include "snakeopt/gps.hpp"

namespace snakeopt {

struct StrategyToggles {
    bool gps_init = false;
    bool adaptive_params = false;
    bool dual_mutation = false;
    bool flight = false;

    static constexpr StrategyToggles none() { return {}; }
    static constexpr StrategyToggles all() { return {true, true, true, true}; }

    int count() const noexcept {
        return int(gps_init) + int(adaptive_params) + int(dual_mutation) + int(flight);
    }
    bool operator==(const StrategyToggles&) const = default;
};

struct MutationParams {
    double cauchy_gamma = 0.05;
    double gauss_sigma = 0.1;
    double chaos_alpha = 0.1;
    double aux_prob = 0.2;
    double aux_fraction = 0.1;

    void validate() const {
        if (!(cauchy_gamma > 0 && gauss_sigma > 0 && chaos_alpha > 0))
            throw std::invalid_argument("mutation scales must be positive");
        if (!(aux_prob > 0 && aux_prob < 1 && aux_fraction > 0 && aux_fraction < 1))
            throw std::invalid_argument("aux_prob and aux_fraction must lie in (0,1)");
    }
};

struct FlightParams {
    double beta = 1.5;
    /// Step scale as a fraction of the box width.
    double walk_sigma = 0.1;
    /// Fraction of max_iter after which Levy flight hands over to the random walk.
    double switch_point = 0.5;

    void validate() const {
        if (!(beta > 1.0 && beta <= 2.0)) throw std::invalid_argument("flight beta must lie in (1,2]");
        if (!(walk_sigma > 0)) throw std::invalid_argument("walk_sigma must be positive");
        if (!(switch_point > 0 && switch_point < 1))
            throw std::invalid_argument("switch_point must lie in (0,1)");
    }
};

struct SnakeConfig {
    std::size_t pop_size = 30;
    std::size_t max_iter = 500;
    double c2 = 0.05;
    double c3_base = 2.0;
    double c1_base = 0.5;
    double food_threshold_base = 0.25;
    double temp_threshold_base = 0.6;
    double fight_prob = 0.6;
    double hatch_prob = 0.5;
    StrategyToggles toggles;
    MutationParams mutation;
    FlightParams flight;
    IterationHook on_iteration;

    void validate() const {
        if (pop_size < 4) throw std::invalid_argument("snake pop_size must be >= 4");
        if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
        if (toggles.adaptive_params && max_iter < 2)
            throw std::invalid_argument("adaptive parameters need max_iter >= 2");
        if (!(fight_prob > 0 && fight_prob < 1))
            throw std::invalid_argument("fight_prob must lie in (0,1)");
        if (!(hatch_prob >= 0 && hatch_prob <= 1))
            throw std::invalid_argument("hatch_prob must lie in [0,1]");
        mutation.validate();
        flight.validate();
    }
};

/// Per-iteration control values.
struct ControlParams {
    double c1 = 0.5;
    double c3 = 2.0;
    double food_threshold = 0.25;
    double temp_threshold = 0.6;
};

enum class Phase { exploration, food, fight, mate };

constexpr std::string_view phase_name(Phase p) {
    switch (p) {
        case Phase::exploration: return "exploration";
        case Phase::food: return "food";
        case Phase::fight: return "fight";
        case Phase::mate: return "mate";
    }
    return "?";
}

/// Instrumentation for one run. Strategy counters stay zero when their toggle is off.
struct SnakeCounters {
    std::uint64_t explorations = 0;
    std::uint64_t food_steps = 0;
    std::uint64_t fights = 0;
    std::uint64_t matings = 0;
    std::uint64_t hatches = 0;
    std::uint64_t gps_inits = 0;
    std::uint64_t adaptive_updates = 0;
    std::uint64_t flight_steps = 0;
    std::uint64_t main_mutations = 0;
    std::uint64_t aux_mutations = 0;
    std::uint64_t aux_accepted = 0;
};

struct SnakeTrace {
    SnakeCounters counters;
    std::vector<ControlParams> params;
    std::vector<Phase> phases;
};

struct SnakeState {
    Population males;
    Population females;
    std::size_t iter = 0;
    double temp = 1.0;
    double q = 0.0;
    ControlParams params;
    Individual best_male;
    Individual best_female;
    Individual food;

    void refresh() {
        best_male = males[males.best_index()];
        best_female = females[females.best_index()];
        food = best_female.fitness < best_male.fitness ? best_female : best_male;
    }

    std::size_t size() const noexcept { return males.size() + females.size(); }

    Individual& member(std::size_t k) {
        return k < males.size() ? males[k] : females[k - males.size()];
    }
};

// ---------------------------------------------------------------------------
// Schedules

inline double temperature(std::size_t iter, std::size_t max_iter) {
    if (max_iter == 0) throw std::invalid_argument("max_iter must be positive");
    return std::exp(-static_cast<double>(iter) / static_cast<double>(max_iter));
}

inline double food_quantity(std::size_t iter, std::size_t max_iter, double c1) {
    if (max_iter == 0) throw std::invalid_argument("max_iter must be positive");
    const double t = static_cast<double>(iter);
    const double tm = static_cast<double>(max_iter);
    return c1 * std::exp((t - tm) / tm);
}

/// Periodic control values with period max_iter / 2.
inline ControlParams adaptive_params(std::size_t iter, std::size_t max_iter) {
    if (max_iter < 2) throw std::invalid_argument("adaptive parameters need max_iter >= 2");
    const double period = static_cast<double>(max_iter) / 2.0;
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(iter) / period;
    const double s = std::sin(phase);
    const double c = std::cos(phase);
    return {0.5 * (1.0 + c), 2.0 * (1.0 + s), 0.5 + 0.25 * s, 0.5 + 0.2 * c};
}

inline ControlParams base_params(const SnakeConfig& cfg) {
    return {cfg.c1_base, cfg.c3_base, cfg.food_threshold_base, cfg.temp_threshold_base};
}

/// exp(-f_other / f_self) on |f| + eps. Used for the food-finding ability,
/// fighting power and mating ability alike.
inline double ability(double f_other, double f_self) {
    return std::exp(-(std::abs(f_other) + kFitnessEpsilon) / (std::abs(f_self) + kFitnessEpsilon));
}

// ---------------------------------------------------------------------------
// Per-component update kernels. `sign` is +1 or -1, `r` a uniform draw.

inline double explore_component(double x_rand, double c2, double ability_value, double lower,
                                double width, double r, double sign) {
    return x_rand + sign * c2 * ability_value * (width * r + lower);
}

inline double food_component(double food, double x, double c3, double temp, double r,
                             double sign) {
    return food + sign * c3 * temp * r * (food - x);
}

inline double fight_component(double x, double rival_best, double c3, double power, double r,
                              double sign) {
    return x + sign * c3 * power * r * (rival_best - x);
}

inline double mate_component(double x, double partner, double c3, double q, double ability_value,
                             double r, double sign) {
    return x + sign * c3 * ability_value * r * (q * partner - x);
}

// ---------------------------------------------------------------------------
// Mutation operators

inline Position cauchy_mutate(std::span<const double> x, double gamma, const SearchSpace& space,
                              RngStream& rng) {
    Position out(x.begin(), x.end());
    for (auto& v : out) v += rng.cauchy(gamma);
    clamp_in_place(out, space);
    return out;
}

inline Position gaussian_mutate(std::span<const double> x, double sigma, const SearchSpace& space,
                                RngStream& rng) {
    Position out(x.begin(), x.end());
    for (auto& v : out) v += rng.normal(0.0, sigma);
    clamp_in_place(out, space);
    return out;
}

/// Number of leading components treated as the head.
inline std::size_t head_length(std::size_t dim) { return (dim + 2) / 3; }

/// Logistic-map perturbation u + alpha u (1 - u) on the head components, with
/// u the component normalized to the unit box.
inline Position chaos_head_mutate(std::span<const double> x, double alpha,
                                  const SearchSpace& space) {
    if (x.size() != space.dim()) throw DimensionMismatch(space.dim(), x.size());
    Position out(x.begin(), x.end());
    for (std::size_t j = 0; j < head_length(out.size()); ++j) {
        const double u = (out[j] - space.lower()[j]) / space.width(j);
        out[j] = space.lower()[j] + (u + alpha * u * (1.0 - u)) * space.width(j);
    }
    clamp_in_place(out, space);
    return out;
}

inline Position body_fusion_mutate(std::span<const double> x1, std::span<const double> x2) {
    if (x1.size() != x2.size()) throw DimensionMismatch(x1.size(), x2.size());
    Position out(x1.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = 0.5 * (x1[j] + x2[j]);
    return out;
}

/// x1[m:] followed by x2[:m].
inline Position tail_splice_mutate(std::span<const double> x1, std::span<const double> x2,
                                   std::size_t m) {
    if (x1.size() != x2.size()) throw DimensionMismatch(x1.size(), x2.size());
    if (m > x1.size()) throw std::out_of_range("tail splice point beyond dimension");
    Position out;
    out.reserve(x1.size());
    out.insert(out.end(), x1.begin() + static_cast<std::ptrdiff_t>(m), x1.end());
    out.insert(out.end(), x2.begin(), x2.begin() + static_cast<std::ptrdiff_t>(m));
    return out;
}

// ---------------------------------------------------------------------------
// Flight

/// Mantegna's sigma_u for stability index beta.
inline double mantegna_sigma(double beta) {
    const double num = std::tgamma(1.0 + beta) * std::sin(std::numbers::pi * beta / 2.0);
    const double den = std::tgamma((1.0 + beta) / 2.0) * beta * std::pow(2.0, (beta - 1.0) / 2.0);
    return std::pow(num / den, 1.0 / beta);
}

inline double levy_decay(std::size_t iter, std::size_t max_iter, double beta) {
    if (max_iter == 0) throw std::invalid_argument("max_iter must be positive");
    if (iter > max_iter) throw std::invalid_argument("iter beyond max_iter");
    return std::pow(1.0 - static_cast<double>(iter) / static_cast<double>(max_iter), beta);
}

/// Unscaled heavy-tailed step u / |v|^beta, damped by (1 - iter/max_iter)^beta.
/// Note the exponent is beta, not Mantegna's 1/beta.
inline Position levy_step(std::size_t dim, std::size_t iter, std::size_t max_iter,
                          const FlightParams& params, RngStream& rng) {
    const double decay = levy_decay(iter, max_iter, params.beta);
    const double sigma_u = mantegna_sigma(params.beta);
    Position step(dim);
    for (auto& s : step) {
        const double u = rng.normal(0.0, sigma_u);
        const double v = rng.normal();
        s = decay * u / std::pow(std::abs(v), params.beta);
    }
    return step;
}

/// Uniform step in [-s_i, s_i], s_i = walk_sigma * width_i / 2.
inline Position random_walk_step(const SearchSpace& space, const FlightParams& params,
                                 RngStream& rng) {
    if (!(params.walk_sigma > 0)) throw std::invalid_argument("walk_sigma must be positive");
    Position step(space.dim());
    for (std::size_t j = 0; j < step.size(); ++j) {
        const double s = params.walk_sigma * space.width(j) / 2.0;
        step[j] = rng.uniform(-s, s);
    }
    return step;
}

/// Levy flight early, random walk late; Levy steps are scaled by walk_sigma * width.
inline Position flight_displacement(const SearchSpace& space, std::size_t iter,
                                    std::size_t max_iter, const FlightParams& params,
                                    RngStream& rng) {
    if (static_cast<double>(iter) < params.switch_point * static_cast<double>(max_iter)) {
        auto step = levy_step(space.dim(), iter, max_iter, params, rng);
        for (std::size_t j = 0; j < step.size(); ++j) step[j] *= params.walk_sigma * space.width(j);
        return step;
    }
    return random_walk_step(space, params, rng);
}

// ---------------------------------------------------------------------------
// Population phases

inline std::pair<Population, Population> split_population(Population pop) {
    if (pop.size() < 4) throw std::invalid_argument("snake population needs >= 4 members");
    const std::size_t n_male = pop.size() / 2;
    Population males;
    Population females;
    males.members.assign(std::make_move_iterator(pop.members.begin()),
                         std::make_move_iterator(pop.members.begin() +
                                                 static_cast<std::ptrdiff_t>(n_male)));
    females.members.assign(
        std::make_move_iterator(pop.members.begin() + static_cast<std::ptrdiff_t>(n_male)),
        std::make_move_iterator(pop.members.end()));
    return {std::move(males), std::move(females)};
}

namespace detail {

inline void accept_candidates(Population& group, std::vector<Position>& candidates,
                              const SearchSpace& space, Objective& obj) {
    for (std::size_t i = 0; i < group.size(); ++i) {
        clamp_in_place(candidates[i], space);
        accept_if_better(group[i], std::move(candidates[i]), obj);
    }
}

inline bool early_stage(std::size_t iter, std::size_t max_iter, double switch_point) {
    return static_cast<double>(iter) < switch_point * static_cast<double>(max_iter);
}

}  // namespace detail

/// Each individual moves around a random member of its own sex.
inline void exploration_step(SnakeState& state, const SearchSpace& space, Objective& obj,
                             RngStream& rng, const SnakeConfig& cfg,
                             SnakeCounters* counters = nullptr) {
    for (Population* group : {&state.males, &state.females}) {
        std::vector<Position> candidates(group->size());
        for (std::size_t i = 0; i < group->size(); ++i) {
            const Individual& other = (*group)[rng.index(group->size())];
            const double a = ability(other.fitness, (*group)[i].fitness);
            const double sign = rng.sign();
            Position x(space.dim());
            for (std::size_t j = 0; j < x.size(); ++j) {
                x[j] = explore_component(other.position[j], cfg.c2, a, space.lower()[j],
                                         space.width(j), rng.uniform(), sign);
            }
            if (cfg.toggles.flight) {
                const auto d = flight_displacement(space, state.iter, cfg.max_iter, cfg.flight, rng);
                for (std::size_t j = 0; j < x.size(); ++j) x[j] += d[j];
                if (counters) ++counters->flight_steps;
            }
            candidates[i] = std::move(x);
        }
        detail::accept_candidates(*group, candidates, space, obj);
    }
    state.refresh();
    if (counters) ++counters->explorations;
}

/// Every individual moves relative to the food position.
inline void food_step(SnakeState& state, const SearchSpace& space, Objective& obj, RngStream& rng,
                      const SnakeConfig& /*cfg*/, SnakeCounters* counters = nullptr) {
    const Position food = state.food.position;
    for (Population* group : {&state.males, &state.females}) {
        std::vector<Position> candidates(group->size());
        for (std::size_t i = 0; i < group->size(); ++i) {
            const auto& x = (*group)[i].position;
            const double sign = rng.sign();
            Position y(x.size());
            for (std::size_t j = 0; j < y.size(); ++j)
                y[j] = food_component(food[j], x[j], state.params.c3, state.temp, rng.uniform(), sign);
            candidates[i] = std::move(y);
        }
        detail::accept_candidates(*group, candidates, space, obj);
    }
    state.refresh();
    if (counters) ++counters->food_steps;
}

/// Males move relative to the best female and females relative to the best male.
inline void fight_step(SnakeState& state, const SearchSpace& space, Objective& obj, RngStream& rng,
                       const SnakeConfig& /*cfg*/, SnakeCounters* counters = nullptr) {
    const Individual best_m = state.best_male;
    const Individual best_f = state.best_female;
    auto move_group = [&](Population& group, const Individual& rival) {
        std::vector<Position> candidates(group.size());
        for (std::size_t i = 0; i < group.size(); ++i) {
            const auto& x = group[i].position;
            const double power = ability(rival.fitness, group[i].fitness);
            const double sign = rng.sign();
            Position y(x.size());
            for (std::size_t j = 0; j < y.size(); ++j) {
                y[j] = fight_component(x[j], rival.position[j], state.params.c3, power,
                                       rng.uniform(), sign);
            }
            candidates[i] = std::move(y);
        }
        detail::accept_candidates(group, candidates, space, obj);
    };
    move_group(state.males, best_f);
    move_group(state.females, best_m);
    state.refresh();
    if (counters) ++counters->fights;
}

/// The i-th male and i-th female mate; leftovers of the larger group stay put.
/// With probability hatch_prob the worst male and worst female are replaced by
/// fresh uniform points.
inline void mate_step(SnakeState& state, const SearchSpace& space, Objective& obj, RngStream& rng,
                      const SnakeConfig& cfg, SnakeCounters* counters = nullptr) {
    const std::size_t pairs = std::min(state.males.size(), state.females.size());
    std::vector<Position> male_moves(pairs);
    std::vector<Position> female_moves(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        const auto& m = state.males[i];
        const auto& f = state.females[i];
        const double mm = ability(f.fitness, m.fitness);
        const double mf = ability(m.fitness, f.fitness);
        const double sign_m = rng.sign();
        const double sign_f = rng.sign();
        Position ym(space.dim());
        Position yf(space.dim());
        for (std::size_t j = 0; j < ym.size(); ++j) {
            ym[j] = mate_component(m.position[j], f.position[j], state.params.c3, state.q, mm,
                                   rng.uniform(), sign_m);
            yf[j] = mate_component(f.position[j], m.position[j], state.params.c3, state.q, mf,
                                   rng.uniform(), sign_f);
        }
        male_moves[i] = std::move(ym);
        female_moves[i] = std::move(yf);
    }
    for (std::size_t i = 0; i < pairs; ++i) {
        clamp_in_place(male_moves[i], space);
        clamp_in_place(female_moves[i], space);
        accept_if_better(state.males[i], std::move(male_moves[i]), obj);
        accept_if_better(state.females[i], std::move(female_moves[i]), obj);
    }

    if (rng.bernoulli(cfg.hatch_prob)) {
        for (Population* group : {&state.males, &state.females}) {
            Individual& worst = (*group)[group->worst_index()];
            worst = Individual{random_point(space, rng)};
            evaluate(worst, obj);
        }
        if (counters) ++counters->hatches;
    }
    state.refresh();
    if (counters) ++counters->matings;
}

/// Cauchy (early) or Gaussian (late) perturbation of the current best, kept if better.
inline void main_mutation(SnakeState& state, const SearchSpace& space, Objective& obj,
                          RngStream& rng, const SnakeConfig& cfg,
                          SnakeCounters* counters = nullptr) {
    Population& group = state.best_female.fitness < state.best_male.fitness ? state.females
                                                                            : state.males;
    Individual& best = group[group.best_index()];
    Position candidate =
        detail::early_stage(state.iter, cfg.max_iter, cfg.flight.switch_point)
            ? cauchy_mutate(best.position, cfg.mutation.cauchy_gamma, space, rng)
            : gaussian_mutate(best.position, cfg.mutation.gauss_sigma, space, rng);
    accept_if_better(best, std::move(candidate), obj);
    state.refresh();
    if (counters) ++counters->main_mutations;
}

/// Chaos-head, body-fusion or tail-splice mutation on the worst individuals of
/// each sex. A result replaces its source only when it improves fitness.
inline void auxiliary_mutation(SnakeState& state, const SearchSpace& space, Objective& obj,
                               RngStream& rng, const SnakeConfig& cfg,
                               SnakeCounters* counters = nullptr) {
    const std::size_t dim = space.dim();
    const std::size_t n_male = state.males.size();
    for (Population* group : {&state.males, &state.females}) {
        const std::size_t offset = group == &state.males ? 0 : n_male;
        const auto k = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(cfg.mutation.aux_fraction *
                                                  static_cast<double>(group->size()))));
        std::vector<std::size_t> order(group->size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return (*group)[a].fitness > (*group)[b].fitness;
        });
        for (std::size_t w = 0; w < k; ++w) {
            if (!rng.bernoulli(cfg.mutation.aux_prob)) continue;
            Individual& target = (*group)[order[w]];
            Position candidate;
            switch (rng.index(3)) {
                case 0:
                    candidate = chaos_head_mutate(target.position, cfg.mutation.chaos_alpha, space);
                    break;
                case 1: {
                    const auto& partner = state.member(rng.index_other(state.size(), offset + order[w]));
                    candidate = body_fusion_mutate(target.position, partner.position);
                    break;
                }
                default: {
                    const auto& partner = state.member(rng.index_other(state.size(), offset + order[w]));
                    const std::size_t m = dim >= 2 ? 1 + rng.index(dim - 1) : dim;
                    candidate = tail_splice_mutate(target.position, partner.position, m);
                    break;
                }
            }
            clamp_in_place(candidate, space);
            if (counters) ++counters->aux_mutations;
            if (accept_if_better(target, std::move(candidate), obj) && counters)
                ++counters->aux_accepted;
        }
    }
    state.refresh();
}

/// Chooses the phase for the current state. Consumes one draw only when the
/// fight/mate decision is needed.
inline Phase select_phase(const SnakeState& state, const SnakeConfig& cfg, RngStream& rng) {
    if (state.q < state.params.food_threshold) return Phase::exploration;
    if (state.temp > state.params.temp_threshold) return Phase::food;
    return rng.uniform() < cfg.fight_prob ? Phase::fight : Phase::mate;
}

inline RunResult run_snake(Objective& obj, const SearchSpace& space, const SnakeConfig& cfg,
                           RngStream& rng, SnakeTrace* trace = nullptr) {
    cfg.validate();
    if (obj.arity() != space.dim()) throw DimensionMismatch(space.dim(), obj.arity());
    SnakeCounters local;
    SnakeCounters* counters = trace ? &trace->counters : &local;
    const std::uint64_t evals_at_start = obj.eval_count();

    Population pop;
    if (cfg.toggles.gps_init) {
        pop = gps_initialize(space, cfg.pop_size);
        ++counters->gps_inits;
    } else {
        pop = random_init(space, cfg.pop_size, rng);
    }
    evaluate(pop, obj);

    SnakeState state;
    std::tie(state.males, state.females) = split_population(std::move(pop));
    state.refresh();

    BestSoFar best;
    best.offer(state.food);
    std::vector<Individual> snapshot;

    for (std::size_t t = 0; t < cfg.max_iter; ++t) {
        state.iter = t;
        if (cfg.toggles.adaptive_params) {
            state.params = adaptive_params(t, cfg.max_iter);
            ++counters->adaptive_updates;
        } else {
            state.params = base_params(cfg);
        }
        state.temp = temperature(t, cfg.max_iter);
        state.q = food_quantity(t, cfg.max_iter, state.params.c1);

        const Phase phase = select_phase(state, cfg, rng);
        switch (phase) {
            case Phase::exploration: exploration_step(state, space, obj, rng, cfg, counters); break;
            case Phase::food: food_step(state, space, obj, rng, cfg, counters); break;
            case Phase::fight: fight_step(state, space, obj, rng, cfg, counters); break;
            case Phase::mate: mate_step(state, space, obj, rng, cfg, counters); break;
        }

        if (cfg.toggles.dual_mutation) {
            main_mutation(state, space, obj, rng, cfg, counters);
            auxiliary_mutation(state, space, obj, rng, cfg, counters);
        }

        best.offer(state.food);
        best.record();
        if (trace) {
            trace->params.push_back(state.params);
            trace->phases.push_back(phase);
        }
        if (cfg.on_iteration) {
            snapshot.clear();
            snapshot.insert(snapshot.end(), state.males.members.begin(), state.males.members.end());
            snapshot.insert(snapshot.end(), state.females.members.begin(),
                            state.females.members.end());
            cfg.on_iteration(t, snapshot);
        }
    }
    return std::move(best).finish(obj.eval_count() - evals_at_start);
}

}  // namespace snakeopt
