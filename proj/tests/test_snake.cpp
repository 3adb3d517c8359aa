#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "snakeopt/core.hpp"
#include "snakeopt/snake.hpp"
#include "snakeopt/stats.hpp"

using namespace snakeopt;

namespace {

double sphere(std::span<const double> x) { return std::inner_product(x.begin(), x.end(), x.begin(), 0.0); }

Population sized(std::size_t n) {
    Population p;
    for (std::size_t i = 0; i < n; ++i) p.members.push_back({{double(i)}, double(i)});
    return p;
}

SnakeState state_for(const SearchSpace& space, std::size_t n, Objective& obj, std::uint64_t seed) {
    RngStream rng(seed);
    auto pop = random_init(space, n, rng);
    evaluate(pop, obj);
    SnakeState st;
    std::tie(st.males, st.females) = split_population(std::move(pop));
    st.refresh();
    st.temp = 0.5;
    st.q = 0.4;
    return st;
}

double sphere_median(StrategyToggles toggles, std::size_t dim, std::size_t pop, std::size_t iters,
                     int seeds) {
    const auto space = SearchSpace::cube(dim, -100, 100);
    std::vector<double> finals;
    for (int s = 0; s < seeds; ++s) {
        Objective obj(dim, sphere);
        SnakeConfig cfg;
        cfg.pop_size = pop;
        cfg.max_iter = iters;
        cfg.toggles = toggles;
        RngStream rng(derive_seed(1, s, 0, hash_name("sphere")));
        finals.push_back(run_snake(obj, space, cfg, rng).best_fitness);
    }
    return median_of(finals);
}

}  // namespace

TEST(SplitPopulation, FloorHalfAreMales) {
    for (auto [n, m, f] : {std::tuple{30u, 15u, 15u}, {7u, 3u, 4u}, {4u, 2u, 2u}}) {
        auto [males, females] = split_population(sized(n));
        EXPECT_EQ(males.size(), m);
        EXPECT_EQ(females.size(), f);
        EXPECT_EQ(males[0].fitness, 0.0);
        EXPECT_EQ(females[0].fitness, double(m));
    }
    EXPECT_THROW(split_population(sized(3)), std::invalid_argument);
}

TEST(Schedules, Temperature) {
    EXPECT_DOUBLE_EQ(temperature(0, 500), 1.0);
    EXPECT_NEAR(temperature(500, 500), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(temperature(250, 500), 0.60653065971263342, 1e-15);
    EXPECT_THROW(temperature(0, 0), std::invalid_argument);
}

TEST(Schedules, FoodQuantity) {
    EXPECT_DOUBLE_EQ(food_quantity(500, 500, 0.5), 0.5);
    EXPECT_NEAR(food_quantity(0, 500, 0.5), 0.18393972058572117, 1e-15);
    for (std::size_t t : {0u, 17u, 500u}) EXPECT_EQ(food_quantity(t, 500, 0.0), 0.0);
    EXPECT_THROW(food_quantity(0, 0, 0.5), std::invalid_argument);
}

TEST(Schedules, AdaptiveParamsAtQuarterPeriods) {
    // max_iter 8 gives period T = 4
    const auto p0 = adaptive_params(0, 8);
    EXPECT_NEAR(p0.c1, 1.0, 1e-12);
    EXPECT_NEAR(p0.c3, 2.0, 1e-12);
    EXPECT_NEAR(p0.food_threshold, 0.5, 1e-12);
    EXPECT_NEAR(p0.temp_threshold, 0.7, 1e-12);
    const auto p1 = adaptive_params(1, 8);
    EXPECT_NEAR(p1.c3, 4.0, 1e-12);
    EXPECT_NEAR(p1.food_threshold, 0.75, 1e-12);
    EXPECT_NEAR(p1.temp_threshold, 0.5, 1e-12);
    const auto p2 = adaptive_params(2, 8);
    EXPECT_NEAR(p2.c1, 0.0, 1e-12);
    EXPECT_NEAR(p2.temp_threshold, 0.3, 1e-12);
    EXPECT_THROW(adaptive_params(0, 1), std::invalid_argument);
}

TEST(Schedules, AdaptiveParamsArePeriodic) {
    for (std::size_t t = 0; t < 250; ++t) {
        const auto a = adaptive_params(t, 500);
        const auto b = adaptive_params(t + 250, 500);
        EXPECT_NEAR(a.c1, b.c1, 1e-9);
        EXPECT_NEAR(a.c3, b.c3, 1e-9);
        EXPECT_NEAR(a.food_threshold, b.food_threshold, 1e-9);
        EXPECT_NEAR(a.temp_threshold, b.temp_threshold, 1e-9);
    }
}

TEST(Ability, ReferenceValues) {
    EXPECT_NEAR(ability(3.0, 3.0), std::exp(-1.0), 1e-12);
    EXPECT_NEAR(ability(0.0, 5.0), 1.0, 1e-12);
    EXPECT_NEAR(ability(4.0, 2.0), std::exp(-2.0), 1e-12);
    // shifted objectives: magnitudes, never a sign flip or division by zero
    EXPECT_NEAR(ability(-3.0, 3.0), std::exp(-1.0), 1e-12);
    EXPECT_TRUE(std::isfinite(ability(1.0, 0.0)));
}

TEST(Kernels, FoodSeededExample) {
    EXPECT_DOUBLE_EQ(food_component(0.0, 10.0, 2.0, 0.5, 0.5, 1.0), -5.0);
    EXPECT_DOUBLE_EQ(food_component(3.0, 3.0, 2.0, 0.9, 0.7, -1.0), 3.0);
    EXPECT_NEAR(food_component(1.0, 50.0, 2.0, 1e-12, 1.0, 1.0), 1.0, 1e-9);
}

TEST(Kernels, FightAndMateFixedPoints) {
    EXPECT_DOUBLE_EQ(fight_component(4.0, 4.0, 2.0, 0.3, 0.9, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(fight_component(1.0, 3.0, 2.0, 0.5, 0.5, 1.0), 2.0);
    EXPECT_DOUBLE_EQ(mate_component(2.0, 2.0, 2.0, 1.0, 0.5, 0.5, -1.0), 2.0);
    EXPECT_DOUBLE_EQ(explore_component(7.0, 0.05, 1.0, -100.0, 200.0, 0.5, 1.0), 7.0);
    EXPECT_DOUBLE_EQ(explore_component(0.0, 0.05, 1.0, -100.0, 200.0, 1.0, -1.0), -5.0);
}

TEST(Phases, ExplorationStaysInBounds) {
    const auto space = SearchSpace::cube(20, -100, 100);
    Objective obj(20, sphere);
    SnakeConfig cfg;
    cfg.toggles.flight = true;
    auto st = state_for(space, 30, obj, 4);
    RngStream rng(9);
    for (int k = 0; k < 20; ++k) {
        exploration_step(st, space, obj, rng, cfg);
        for (std::size_t i = 0; i < st.size(); ++i) EXPECT_TRUE(space.contains(st.member(i).position));
    }
}

TEST(Phases, StepsNeverWorsenAnIndividual) {
    const auto space = SearchSpace::cube(5, -100, 100);
    Objective obj(5, sphere);
    SnakeConfig cfg;
    auto st = state_for(space, 12, obj, 2);
    RngStream rng(3);
    using Step = void (*)(SnakeState&, const SearchSpace&, Objective&, RngStream&, const SnakeConfig&,
                          SnakeCounters*);
    for (Step step : {Step(exploration_step), Step(food_step), Step(fight_step)}) {
        std::vector<double> before;
        for (std::size_t i = 0; i < st.size(); ++i) before.push_back(st.member(i).fitness);
        step(st, space, obj, rng, cfg, nullptr);
        for (std::size_t i = 0; i < st.size(); ++i) EXPECT_LE(st.member(i).fitness, before[i]);
    }
}

TEST(Phases, FoodStepEvaluatesEveryone) {
    const auto space = SearchSpace::cube(3, -10, 10);
    Objective obj(3, sphere);
    auto st = state_for(space, 10, obj, 1);
    const auto before = obj.eval_count();
    RngStream rng(1);
    SnakeCounters c;
    food_step(st, space, obj, rng, SnakeConfig{}, &c);
    EXPECT_EQ(obj.eval_count() - before, 10u);
    EXPECT_EQ(c.food_steps, 1u);
}

TEST(Phases, MatingLeavesUnpairedFemaleAlone) {
    const auto space = SearchSpace::cube(3, -10, 10);
    Objective obj(3, sphere);
    auto st = state_for(space, 7, obj, 5);
    ASSERT_EQ(st.males.size(), 3u);
    ASSERT_EQ(st.females.size(), 4u);
    const auto leftover = st.females[3];
    SnakeConfig cfg;
    cfg.hatch_prob = 0.0;
    RngStream rng(8);
    const auto before = obj.eval_count();
    mate_step(st, space, obj, rng, cfg);
    EXPECT_EQ(st.females[3].position, leftover.position);
    EXPECT_EQ(obj.eval_count() - before, 6u);
}

TEST(Phases, HatchReplacesWorstWithFreshPoints) {
    const auto space = SearchSpace::cube(4, -100, 100);
    Objective obj(4, sphere);
    auto st = state_for(space, 10, obj, 6);
    SnakeConfig cfg;
    cfg.hatch_prob = 1.0;
    RngStream rng(2);
    SnakeCounters c;
    // mating cannot worsen anyone, so the post-mating worst members are the hatch targets
    mate_step(st, space, obj, rng, cfg, &c);
    EXPECT_EQ(c.hatches, 1u);
    for (std::size_t i = 0; i < st.size(); ++i) {
        EXPECT_TRUE(space.contains(st.member(i).position));
        EXPECT_TRUE(st.member(i).evaluated());
    }
}

TEST(Phases, HatchedPointDiffersFromPredecessor) {
    const auto space = SearchSpace::cube(2, -100, 100);
    Objective obj(2, sphere);
    SnakeState st;
    // the worst male and female sit far out so that no mating move can reach them
    st.males.members = {{{0, 0}, 0.0}, {{100, 100}, 20000.0}};
    st.females.members = {{{1, 1}, 2.0}, {{-100, 100}, 20000.0}};
    st.refresh();
    st.q = 0.0;
    SnakeConfig cfg;
    cfg.hatch_prob = 1.0;
    RngStream rng(3);
    mate_step(st, space, obj, rng, cfg);
    bool replaced_m = st.males[1].position != Position{100, 100};
    bool replaced_f = st.females[1].position != Position{-100, 100};
    EXPECT_TRUE(replaced_m || st.males[1].fitness < 20000.0);
    EXPECT_TRUE(replaced_f || st.females[1].fitness < 20000.0);
}

TEST(Mutation, CauchyMedianMatchesScale) {
    RngStream rng(1);
    const auto space = SearchSpace::cube(1, -1e9, 1e9);
    std::vector<double> steps;
    int tail = 0;
    for (int i = 0; i < 100000; ++i) {
        const double d = cauchy_mutate(std::vector<double>{0.0}, 0.05, space, rng)[0];
        steps.push_back(std::abs(d));
        tail += std::abs(d) > 20 * 0.05;
    }
    EXPECT_NEAR(median_of(steps), 0.05, 0.005);
    // P(|C| > 20 gamma) = 1 - (2 / pi) atan(20)
    EXPECT_NEAR(tail / 100000.0, 1.0 - 2.0 / M_PI * std::atan(20.0), 0.005);
}

TEST(Mutation, GaussianMoments) {
    RngStream rng(2);
    const auto space = SearchSpace::cube(1, -1e9, 1e9);
    std::vector<double> steps;
    for (int i = 0; i < 100000; ++i) steps.push_back(gaussian_mutate(std::vector<double>{0.0}, 0.1, space, rng)[0]);
    const auto d = describe(steps);
    EXPECT_GE(d.std, 0.098);
    EXPECT_LE(d.std, 0.102);
    EXPECT_GE(d.mean, -0.002);
    EXPECT_LE(d.mean, 0.002);
}

TEST(Mutation, DegenerateScalesLeavePointUnchanged) {
    RngStream rng(3);
    const auto space = SearchSpace::cube(3, -10, 10);
    const Position x{1.0, -2.0, 3.0};
    const auto c = cauchy_mutate(x, 1e-300, space, rng);
    const auto g = gaussian_mutate(x, 1e-300, space, rng);
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_DOUBLE_EQ(c[j], x[j]);
        EXPECT_DOUBLE_EQ(g[j], x[j]);
    }
}

TEST(Mutation, MutantsAreClamped) {
    RngStream rng(4);
    const auto space = SearchSpace::cube(2, -1, 1);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_TRUE(space.contains(cauchy_mutate(std::vector<double>{1.0, -1.0}, 5.0, space, rng)));
        EXPECT_TRUE(space.contains(gaussian_mutate(std::vector<double>{1.0, -1.0}, 5.0, space, rng)));
    }
}

TEST(Mutation, ChaosHeadOnUnitBox) {
    const auto unit = SearchSpace::cube(3, 0, 1);
    EXPECT_EQ(chaos_head_mutate(std::vector<double>{0.0, 0.4, 0.4}, 0.1, unit), (Position{0.0, 0.4, 0.4}));
    EXPECT_EQ(chaos_head_mutate(std::vector<double>{1.0, 0.4, 0.4}, 0.1, unit), (Position{1.0, 0.4, 0.4}));
    EXPECT_NEAR(chaos_head_mutate(std::vector<double>{0.5, 0.5, 0.5}, 0.1, unit)[0], 0.525, 1e-15);
    // only the head is touched
    EXPECT_EQ(chaos_head_mutate(std::vector<double>{0.5, 0.5, 0.5}, 0.1, unit)[1], 0.5);
}

TEST(Mutation, ChaosHeadNormalizesArbitraryBoxes) {
    const auto box = SearchSpace::cube(7, -100, 100);
    EXPECT_EQ(head_length(7), 3u);
    EXPECT_EQ(head_length(1), 1u);
    EXPECT_EQ(head_length(9), 3u);
    const auto y = chaos_head_mutate(Position(7, 0.0), 0.1, box);
    // 0 maps to u = 0.5, so 0.525 of the way across the box
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(y[j], 5.0, 1e-12);
    for (std::size_t j = 3; j < 7; ++j) EXPECT_EQ(y[j], 0.0);
}

TEST(Mutation, BodyFusion) {
    EXPECT_EQ(body_fusion_mutate(std::vector<double>{3, 4}, std::vector<double>{3, 4}), (Position{3, 4}));
    EXPECT_EQ(body_fusion_mutate(std::vector<double>{0, 0}, std::vector<double>{2, 4}), (Position{1, 2}));
    EXPECT_THROW(body_fusion_mutate(std::vector<double>{0}, std::vector<double>{0, 1}), std::invalid_argument);
    const auto space = SearchSpace::cube(2, -1, 1);
    RngStream rng(1);
    for (int i = 0; i < 100; ++i)
        EXPECT_TRUE(space.contains(body_fusion_mutate(random_point(space, rng), random_point(space, rng))));
}

TEST(Mutation, TailSplice) {
    const std::vector<double> x1{1, 2, 3, 4}, x2{5, 6, 7, 8};
    EXPECT_EQ(tail_splice_mutate(x1, x2, 0), (Position{1, 2, 3, 4}));
    EXPECT_EQ(tail_splice_mutate(x1, x2, 2), (Position{3, 4, 5, 6}));
    EXPECT_EQ(tail_splice_mutate(x1, x2, 4), (Position{5, 6, 7, 8}));
    EXPECT_THROW(tail_splice_mutate(x1, x2, 5), std::out_of_range);
}

TEST(Flight, LevyDecayEndpoints) {
    FlightParams p;
    RngStream rng(1);
    EXPECT_EQ(levy_decay(0, 100, p.beta), 1.0);
    for (double v : levy_step(5, 100, 100, p, rng)) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(levy_decay(101, 100, p.beta), std::invalid_argument);
}

TEST(Flight, MantegnaSigmaAtThreeHalves) {
    EXPECT_NEAR(mantegna_sigma(1.5), 0.6966, 1e-4);
}

TEST(Flight, LevyStepsAreHeavyTailed) {
    FlightParams p;
    RngStream rng(5);
    std::vector<double> s;
    for (int i = 0; i < 100000; ++i) s.push_back(levy_step(1, 0, 100, p, rng)[0]);
    const double m = mean_of(s);
    double m2 = 0, m4 = 0;
    for (double v : s) {
        m2 += (v - m) * (v - m);
        m4 += std::pow(v - m, 4);
    }
    m2 /= double(s.size());
    m4 /= double(s.size());
    EXPECT_GT(m4 / (m2 * m2) - 3.0, 10.0);
}

TEST(Flight, RandomWalkMoments) {
    FlightParams p;
    const auto space = SearchSpace::cube(1, -100, 100);
    const double sigma_eff = p.walk_sigma * 200.0 / 2.0;
    RngStream rng(6);
    std::vector<double> s;
    for (int i = 0; i < 100000; ++i) {
        const double v = random_walk_step(space, p, rng)[0];
        ASSERT_LE(std::abs(v), sigma_eff);
        s.push_back(v);
    }
    const auto d = describe(s);
    EXPECT_LE(std::abs(d.mean), 0.01 * sigma_eff);
    EXPECT_NEAR(d.std * d.std, sigma_eff * sigma_eff / 3.0, 0.05 * sigma_eff * sigma_eff / 3.0);
}

TEST(Flight, DisplacementSwitchesAtSwitchPoint) {
    FlightParams p;
    const auto space = SearchSpace::cube(2, -100, 100);
    RngStream rng(7);
    // after the switch every step is a bounded uniform walk
    for (int i = 0; i < 2000; ++i)
        for (double v : flight_displacement(space, 60, 100, p, rng)) EXPECT_LE(std::abs(v), 10.0);
    double biggest = 0;
    for (int i = 0; i < 2000; ++i)
        for (double v : flight_displacement(space, 0, 100, p, rng)) biggest = std::max(biggest, std::abs(v));
    EXPECT_GT(biggest, 10.0);
}

TEST(Config, Validation) {
    SnakeConfig c;
    EXPECT_NO_THROW(c.validate());
    c.pop_size = 3;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.fight_prob = 1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.mutation.aux_prob = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.flight.beta = 1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.flight.switch_point = 1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(RunSnake, HistoryContract) {
    const auto space = SearchSpace::cube(2, -100, 100);
    for (auto toggles : {StrategyToggles::none(), StrategyToggles::all()}) {
        Objective obj(2, sphere);
        SnakeConfig cfg;
        cfg.pop_size = 10;
        cfg.max_iter = 100;
        cfg.toggles = toggles;
        RngStream rng(1);
        const auto r = run_snake(obj, space, cfg, rng);
        ASSERT_EQ(r.history.size(), 100u);
        for (std::size_t t = 1; t < r.history.size(); ++t) EXPECT_LE(r.history[t], r.history[t - 1]);
        EXPECT_EQ(r.best_fitness, r.history.back());
        EXPECT_EQ(r.evaluations, obj.eval_count());
        EXPECT_DOUBLE_EQ(sphere(r.best_position), r.best_fitness);
    }
}

TEST(RunSnake, BitDeterministicPerSeed) {
    const auto space = SearchSpace::cube(5, -100, 100);
    SnakeConfig cfg;
    cfg.max_iter = 60;
    cfg.toggles = StrategyToggles::all();
    auto once = [&] {
        Objective obj(5, sphere);
        RngStream rng(77);
        return run_snake(obj, space, cfg, rng);
    };
    const auto a = once();
    const auto b = once();
    EXPECT_EQ(a.history, b.history);
    EXPECT_EQ(a.best_position, b.best_position);
    EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(RunSnake, VanillaRunsNoImprovementCode) {
    const auto space = SearchSpace::cube(3, -100, 100);
    Objective obj(3, sphere);
    SnakeConfig cfg;
    cfg.max_iter = 200;
    RngStream rng(1);
    SnakeTrace trace;
    run_snake(obj, space, cfg, rng, &trace);
    const auto& c = trace.counters;
    EXPECT_EQ(c.gps_inits, 0u);
    EXPECT_EQ(c.adaptive_updates, 0u);
    EXPECT_EQ(c.flight_steps, 0u);
    EXPECT_EQ(c.main_mutations, 0u);
    EXPECT_EQ(c.aux_mutations, 0u);
}

TEST(RunSnake, EachToggleRunsOnlyItsOwnCode) {
    const auto space = SearchSpace::cube(3, -100, 100);
    for (int k = 0; k < 4; ++k) {
        StrategyToggles t;
        (k == 0 ? t.gps_init : k == 1 ? t.adaptive_params : k == 2 ? t.dual_mutation : t.flight) = true;
        Objective obj(3, sphere);
        SnakeConfig cfg;
        cfg.max_iter = 200;
        cfg.toggles = t;
        RngStream rng(1);
        SnakeTrace trace;
        run_snake(obj, space, cfg, rng, &trace);
        const auto& c = trace.counters;
        EXPECT_EQ(c.gps_inits > 0, t.gps_init);
        EXPECT_EQ(c.adaptive_updates > 0, t.adaptive_params);
        EXPECT_EQ(c.main_mutations > 0, t.dual_mutation);
        EXPECT_EQ(c.aux_mutations > 0, t.dual_mutation);
        EXPECT_EQ(c.flight_steps > 0, t.flight);
    }
}

TEST(RunSnake, ExactlyOnePhasePerIteration) {
    const auto space = SearchSpace::cube(4, -100, 100);
    Objective obj(4, sphere);
    SnakeConfig cfg;
    cfg.max_iter = 300;
    cfg.toggles = StrategyToggles::all();
    RngStream rng(2);
    SnakeTrace trace;
    run_snake(obj, space, cfg, rng, &trace);
    const auto& c = trace.counters;
    EXPECT_EQ(c.explorations + c.food_steps + c.fights + c.matings, 300u);
    EXPECT_EQ(trace.phases.size(), 300u);
    EXPECT_EQ(c.main_mutations, 300u);
}

TEST(RunSnake, AdaptiveRangesHoldForEveryIteration) {
    const auto space = SearchSpace::cube(4, -100, 100);
    Objective obj(4, sphere);
    SnakeConfig cfg;
    cfg.toggles = StrategyToggles::all();
    RngStream rng(3);
    SnakeTrace trace;
    run_snake(obj, space, cfg, rng, &trace);
    ASSERT_EQ(trace.params.size(), 500u);
    for (const auto& p : trace.params) {
        EXPECT_GE(p.c1, -1e-12);
        EXPECT_LE(p.c1, 1 + 1e-12);
        EXPECT_GE(p.c3, -1e-12);
        EXPECT_LE(p.c3, 4 + 1e-12);
        EXPECT_GE(p.food_threshold, 0.25 - 1e-12);
        EXPECT_LE(p.food_threshold, 0.75 + 1e-12);
        EXPECT_GE(p.temp_threshold, 0.3 - 1e-12);
        EXPECT_LE(p.temp_threshold, 0.7 + 1e-12);
    }
}

TEST(RunSnake, PositionsInBoundsAndFoodNeverWorsens) {
    const auto space = SearchSpace(std::vector<double>{-5, 0, 10}, std::vector<double>{5, 1, 20});
    Objective obj(3, sphere);
    SnakeConfig cfg;
    cfg.max_iter = 200;
    cfg.toggles = StrategyToggles::all();
    double last_best = INFINITY;
    cfg.on_iteration = [&](std::size_t, std::span<const Individual> members) {
        ASSERT_EQ(members.size(), cfg.pop_size);
        double best = INFINITY;
        for (const auto& m : members) {
            EXPECT_TRUE(space.contains(m.position));
            best = std::min(best, m.fitness);
        }
        // only hatching may discard points, and it only ever discards the worst
        EXPECT_LE(best, last_best);
        last_best = best;
    };
    RngStream rng(4);
    run_snake(obj, space, cfg, rng);
}

TEST(RunSnake, AuxiliaryMutationKeepsBest) {
    const auto space = SearchSpace::cube(6, -100, 100);
    Objective obj(6, sphere);
    SnakeConfig cfg;
    cfg.toggles.dual_mutation = true;
    auto st = state_for(space, 20, obj, 11);
    RngStream rng(12);
    SnakeCounters c;
    for (int k = 0; k < 200; ++k) {
        const double best = st.food.fitness;
        auxiliary_mutation(st, space, obj, rng, cfg, &c);
        EXPECT_LE(st.food.fitness, best);
    }
    EXPECT_GT(c.aux_mutations, 0u);
    EXPECT_LE(c.aux_accepted, c.aux_mutations);
}

TEST(RunSnake, VanillaSphereSanity) {
    EXPECT_LT(sphere_median(StrategyToggles::none(), 2, 10, 100, 20), 1e-2);
}

TEST(RunSnake, FullStrategiesNoWorseThanVanillaOnSphere) {
    const double vanilla = sphere_median(StrategyToggles::none(), 2, 10, 100, 20);
    const double full = sphere_median(StrategyToggles::all(), 2, 10, 100, 20);
    EXPECT_LE(full, vanilla) << "full " << full << " vs vanilla " << vanilla;
}
