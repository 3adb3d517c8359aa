#pragma once

// Shared optimization substrate: search spaces, populations, the objective
// contract, deterministic random streams and run results.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace snakeopt {

using Position = std::vector<double>;

/// Added to |f| in every fitness ratio so shifted objectives with f <= 0
/// never divide by zero or flip sign.
inline constexpr double kFitnessEpsilon = 1e-12;

class DimensionMismatch : public std::invalid_argument {
public:
    DimensionMismatch(std::size_t expected, std::size_t got)
        : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                                ", got " + std::to_string(got)) {}
};

/// Raised when an objective returns NaN or +-inf. Carries the offending point.
class NonFiniteObjective : public std::runtime_error {
public:
    explicit NonFiniteObjective(Position position)
        : std::runtime_error(describe(position)), position_(std::move(position)) {}

    const Position& position() const noexcept { return position_; }

private:
    static std::string describe(const Position& p) {
        std::ostringstream os;
        os << "objective returned a non-finite value at [";
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) os << ", ";
            os << p[i];
        }
        os << "]";
        return os.str();
    }

    Position position_;
};

/// Box-bounded domain. lower[i] < upper[i] for every i.
class SearchSpace {
public:
    SearchSpace(std::vector<double> lower, std::vector<double> upper)
        : lower_(std::move(lower)), upper_(std::move(upper)) {
        if (lower_.empty()) throw std::invalid_argument("search space needs dim >= 1");
        if (lower_.size() != upper_.size()) throw DimensionMismatch(lower_.size(), upper_.size());
        for (std::size_t i = 0; i < lower_.size(); ++i) {
            if (!(lower_[i] < upper_[i]))
                throw std::invalid_argument("search space bound " + std::to_string(i) +
                                            " has lower >= upper");
        }
    }

    static SearchSpace cube(std::size_t dim, double lo, double hi) {
        return SearchSpace(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
    }

    std::size_t dim() const noexcept { return lower_.size(); }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }
    double width(std::size_t i) const { return upper_[i] - lower_[i]; }

    bool contains(std::span<const double> x) const {
        if (x.size() != dim()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
        return true;
    }

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

using ObjectiveFn = std::function<double(std::span<const double>)>;

/// A deterministic scalar function of a fixed arity with an invocation counter.
/// Copies share the underlying function but count independently, so each run
/// owns its own Objective while the wrapped function stays shared and pure.
class Objective {
public:
    Objective(std::size_t arity, ObjectiveFn fn) : arity_(arity), fn_(std::move(fn)) {
        if (arity_ == 0) throw std::invalid_argument("objective arity must be >= 1");
        if (!fn_) throw std::invalid_argument("objective function is empty");
    }

    double operator()(std::span<const double> x) {
        if (x.size() != arity_) throw DimensionMismatch(arity_, x.size());
        ++count_;
        return fn_(x);
    }

    std::size_t arity() const noexcept { return arity_; }
    std::uint64_t eval_count() const noexcept { return count_; }

private:
    std::size_t arity_;
    ObjectiveFn fn_;
    std::uint64_t count_ = 0;
};

struct Individual {
    Position position;
    double fitness = std::numeric_limits<double>::quiet_NaN();

    bool evaluated() const noexcept { return !std::isnan(fitness); }
};

struct Population {
    std::vector<Individual> members;

    std::size_t size() const noexcept { return members.size(); }
    Individual& operator[](std::size_t i) { return members[i]; }
    const Individual& operator[](std::size_t i) const { return members[i]; }

    /// Index of the lowest-fitness member (first on ties).
    std::size_t best_index() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < members.size(); ++i)
            if (members[i].fitness < members[best].fitness) best = i;
        return best;
    }

    /// Index of the highest-fitness member (last on ties).
    std::size_t worst_index() const {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < members.size(); ++i)
            if (members[i].fitness >= members[worst].fitness) worst = i;
        return worst;
    }
};

// ---------------------------------------------------------------------------
// Seeding

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a, used to turn algorithm and function names into stable ids.
inline constexpr std::uint64_t hash_name(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                                           std::uint64_t algorithm_id,
                                           std::uint64_t function_id) noexcept {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ trial);
    h = splitmix64(h ^ algorithm_id);
    h = splitmix64(h ^ function_id);
    return h;
}

/// Seeded random stream. Identical seeds give identical draw sequences.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    /// Substream for one (trial, algorithm, function) cell of an experiment.
    static RngStream derive(std::uint64_t master, std::uint64_t trial, std::string_view algorithm,
                            std::string_view function) {
        return RngStream(derive_seed(master, trial, hash_name(algorithm), hash_name(function)));
    }

    std::uint64_t seed() const noexcept { return seed_; }

    /// Uniform in [0, 1).
    double uniform() { return unit_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() { return normal_(engine_); }
    double normal(double mean, double sd) { return mean + sd * normal(); }
    double cauchy(double gamma) { return gamma * cauchy_(engine_); }
    bool bernoulli(double p) { return uniform() < p; }
    /// +1 or -1 with equal probability.
    double sign() { return uniform() < 0.5 ? 1.0 : -1.0; }

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        if (n == 0) throw std::invalid_argument("RngStream::index on empty range");
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    /// Uniform index in [0, n) different from `exclude`. Requires n >= 2.
    std::size_t index_other(std::size_t n, std::size_t exclude) {
        if (n < 2) throw std::invalid_argument("RngStream::index_other needs n >= 2");
        std::size_t k = index(n - 1);
        return k >= exclude ? k + 1 : k;
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::cauchy_distribution<double> cauchy_{0.0, 1.0};
};

// ---------------------------------------------------------------------------
// Run results

struct RunResult {
    Position best_position;
    double best_fitness = std::numeric_limits<double>::infinity();
    /// Best-so-far fitness after each iteration; nonincreasing.
    std::vector<double> history;
    std::uint64_t evaluations = 0;
};

/// Called once per iteration with every member of the population.
using IterationHook = std::function<void(std::size_t iter, std::span<const Individual>)>;

/// Keeps the best-so-far point of a run and its per-iteration history.
class BestSoFar {
public:
    void offer(const Individual& ind) {
        if (ind.fitness < best_.fitness || best_.position.empty()) best_ = ind;
    }
    void offer(const Population& pop) {
        for (const auto& m : pop.members) offer(m);
    }
    void record() { history_.push_back(best_.fitness); }

    const Individual& best() const noexcept { return best_; }

    RunResult finish(std::uint64_t evaluations) && {
        RunResult r;
        r.best_position = std::move(best_.position);
        r.best_fitness = best_.fitness;
        r.history = std::move(history_);
        r.evaluations = evaluations;
        return r;
    }

private:
    Individual best_{{}, std::numeric_limits<double>::infinity()};
    std::vector<double> history_;
};

// ---------------------------------------------------------------------------
// Operations

inline void clamp_in_place(Position& x, const SearchSpace& space) {
    if (x.size() != space.dim()) throw DimensionMismatch(space.dim(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::clamp(x[i], space.lower()[i], space.upper()[i]);
}

/// Saturates every component into [lower[i], upper[i]].
inline Position clamp(std::span<const double> x, const SearchSpace& space) {
    Position out(x.begin(), x.end());
    clamp_in_place(out, space);
    return out;
}

inline Position random_point(const SearchSpace& space, RngStream& rng) {
    Position x(space.dim());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = space.lower()[i] + rng.uniform() * space.width(i);
    return x;
}

/// n uniform points in the box, unevaluated.
inline Population random_init(const SearchSpace& space, std::size_t n, RngStream& rng) {
    if (n < 2) throw std::invalid_argument("population size must be >= 2");
    Population pop;
    pop.members.reserve(n);
    for (std::size_t k = 0; k < n; ++k) pop.members.push_back({random_point(space, rng)});
    return pop;
}

inline void evaluate(Individual& ind, Objective& obj) {
    const double f = obj(ind.position);
    if (!std::isfinite(f)) throw NonFiniteObjective(ind.position);
    ind.fitness = f;
}

inline void evaluate(Population& pop, Objective& obj) {
    if (!pop.members.empty() && pop.members.front().position.size() != obj.arity())
        throw DimensionMismatch(obj.arity(), pop.members.front().position.size());
    for (auto& m : pop.members) evaluate(m, obj);
}

/// Evaluates a candidate and replaces `current` only if it is strictly better.
inline bool accept_if_better(Individual& current, Position candidate, Objective& obj) {
    Individual trial{std::move(candidate)};
    evaluate(trial, obj);
    if (trial.fitness < current.fitness) {
        current = std::move(trial);
        return true;
    }
    return false;
}

}  // namespace snakeopt
