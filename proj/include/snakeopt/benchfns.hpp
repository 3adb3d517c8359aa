#pragma once

// Benchmark functions: analytic bases plus shifted/rotated, hybrid and
// composition builders, assembled into a ten-function CEC-style suite on
// [-100, 100]^D. Shifts and rotations are synthesized from fixed seeds rather
// than read from the official data files.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "snakeopt/core.hpp"

namespace snakeopt {

enum class BaseFunctionId {
    sphere,
    zakharov,
    rosenbrock,
    schaffer_f6_expanded,
    levy,
    rastrigin,
    high_conditioned_elliptic,
};

constexpr std::string_view base_function_name(BaseFunctionId id) {
    switch (id) {
        case BaseFunctionId::sphere: return "sphere";
        case BaseFunctionId::zakharov: return "zakharov";
        case BaseFunctionId::rosenbrock: return "rosenbrock";
        case BaseFunctionId::schaffer_f6_expanded: return "schaffer_f6_expanded";
        case BaseFunctionId::levy: return "levy";
        case BaseFunctionId::rastrigin: return "rastrigin";
        case BaseFunctionId::high_conditioned_elliptic: return "high_conditioned_elliptic";
    }
    return "?";
}

/// Coordinate of the canonical optimum (every component equal): 1 for
/// Rosenbrock and Levy, 0 for the rest.
constexpr double base_optimum_coordinate(BaseFunctionId id) {
    return id == BaseFunctionId::rosenbrock || id == BaseFunctionId::levy ? 1.0 : 0.0;
}

namespace detail {

inline double schaffer_pair(double x, double y) {
    const double r2 = x * x + y * y;
    const double s = std::sin(std::sqrt(r2));
    const double d = 1.0 + 0.001 * r2;
    return 0.5 + (s * s - 0.5) / (d * d);
}

}  // namespace detail

/// Closed-form base function; every one has minimum 0 at its canonical optimum.
/// An empty argument evaluates to 0.
inline double eval_base(BaseFunctionId id, std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return 0.0;
    switch (id) {
        case BaseFunctionId::sphere: {
            double s = 0.0;
            for (double v : x) s += v * v;
            return s;
        }
        case BaseFunctionId::zakharov: {
            double s1 = 0.0;
            double s2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s1 += x[i] * x[i];
                s2 += 0.5 * static_cast<double>(i + 1) * x[i];
            }
            const double s2sq = s2 * s2;
            return s1 + s2sq + s2sq * s2sq;
        }
        case BaseFunctionId::rosenbrock: {
            double s = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double a = x[i + 1] - x[i] * x[i];
                const double b = x[i] - 1.0;
                s += 100.0 * a * a + b * b;
            }
            return s;
        }
        case BaseFunctionId::schaffer_f6_expanded: {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += detail::schaffer_pair(x[i], x[(i + 1) % n]);
            return s;
        }
        case BaseFunctionId::levy: {
            constexpr double pi = std::numbers::pi;
            auto w = [&](std::size_t i) { return 1.0 + (x[i] - 1.0) / 4.0; };
            // sin(pi w) = -sin(pi (w - 1)); the shifted form is exactly 0 at w = 1
            const double s0 = std::sin(pi * (w(0) - 1.0));
            double s = s0 * s0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double wi = w(i);
                const double si = std::sin(pi * wi + 1.0);
                s += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * si * si);
            }
            const double wn = w(n - 1);
            const double sn = std::sin(2.0 * pi * (wn - 1.0));
            s += (wn - 1.0) * (wn - 1.0) * (1.0 + sn * sn);
            return s;
        }
        case BaseFunctionId::rastrigin: {
            double s = 10.0 * static_cast<double>(n);
            for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
            return s;
        }
        case BaseFunctionId::high_conditioned_elliptic: {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double e = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
                s += std::pow(1e6, e) * x[i] * x[i];
            }
            return s;
        }
    }
    throw std::invalid_argument("unknown base function");
}

// ---------------------------------------------------------------------------
// Random orthogonal matrices

/// Row-major dim x dim matrix.
using Matrix = std::vector<double>;

/// Q factor of a seeded Gaussian matrix (modified Gram-Schmidt with one
/// reorthogonalization pass; R has a positive diagonal by construction).
inline Matrix random_rotation(std::size_t dim, RngStream& rng) {
    // columns stored contiguously while orthogonalizing
    std::vector<Position> cols(dim, Position(dim));
    for (auto& c : cols)
        for (auto& v : c) v = rng.normal();
    for (std::size_t k = 0; k < dim; ++k) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t p = 0; p < k; ++p) {
                double dot = 0.0;
                for (std::size_t i = 0; i < dim; ++i) dot += cols[p][i] * cols[k][i];
                for (std::size_t i = 0; i < dim; ++i) cols[k][i] -= dot * cols[p][i];
            }
        }
        double norm = 0.0;
        for (double v : cols[k]) norm += v * v;
        norm = std::sqrt(norm);
        if (!(norm > 1e-12)) throw std::runtime_error("degenerate random matrix");
        for (double& v : cols[k]) v /= norm;
    }
    Matrix q(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) q[i * dim + j] = cols[j][i];
    return q;
}

inline Matrix identity_matrix(std::size_t dim) {
    Matrix m(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) m[i * dim + i] = 1.0;
    return m;
}

/// max |(R^T R - I)_ij|
inline double orthogonality_error(const Matrix& r, std::size_t dim) {
    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < dim; ++k) dot += r[k * dim + i] * r[k * dim + j];
            err = std::max(err, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    }
    return err;
}

// ---------------------------------------------------------------------------
// Test functions

class TestFunction;

struct HybridSpec {
    std::vector<std::pair<BaseFunctionId, double>> components;
    /// permutation[k] is the rotated coordinate fed to slot k.
    std::vector<std::size_t> permutation;
    /// Slot counts per component; sums to dim.
    std::vector<std::size_t> sizes;
};

struct CompositionComponent;

struct CompositionSpec {
    std::vector<CompositionComponent> components;
};

class TestFunction {
public:
    enum class Kind { shifted_rotated, hybrid, composition };

    std::string_view label() const noexcept { return label_; }
    Kind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return shift_.size(); }
    double bias() const noexcept { return bias_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const Position& shift() const noexcept { return shift_; }
    const Matrix& rotation() const noexcept { return rotation_; }
    BaseFunctionId base() const noexcept { return base_; }
    const HybridSpec* hybrid() const noexcept { return hybrid_ ? &*hybrid_ : nullptr; }
    const CompositionSpec* composition() const noexcept { return composition_.get(); }

    /// The constructed global optimum; evaluates to bias().
    const Position& optimum() const noexcept { return shift_; }

    static SearchSpace domain(std::size_t dim) { return SearchSpace::cube(dim, -100.0, 100.0); }

    double operator()(std::span<const double> x) const;

    Objective objective() const {
        auto self = std::make_shared<const TestFunction>(*this);
        return Objective(dim(), [self](std::span<const double> x) { return (*self)(x); });
    }

    /// Stable digest of everything that defines the landscape.
    std::uint64_t fingerprint() const;

    nlohmann::json manifest() const;

    TestFunction with_label(std::string label) const {
        TestFunction f = *this;
        f.label_ = std::move(label);
        return f;
    }

private:
    friend TestFunction make_shifted_rotated(BaseFunctionId, std::size_t, double, std::uint64_t);
    friend TestFunction make_hybrid(std::vector<std::pair<BaseFunctionId, double>>, std::size_t,
                                    double, std::uint64_t);
    friend TestFunction make_composition(std::vector<CompositionComponent>, std::uint64_t);

    /// R (x - shift), with the canonical optimum offset added.
    Position transform(std::span<const double> x, double offset) const {
        const std::size_t n = dim();
        Position z(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            const double* row = &rotation_[i * n];
            for (std::size_t j = 0; j < n; ++j) s += row[j] * (x[j] - shift_[j]);
            z[i] = s + offset;
        }
        return z;
    }

    std::string label_;
    Kind kind_ = Kind::shifted_rotated;
    BaseFunctionId base_ = BaseFunctionId::sphere;
    Position shift_;
    Matrix rotation_;
    double bias_ = 0.0;
    std::uint64_t seed_ = 0;
    std::optional<HybridSpec> hybrid_;
    std::shared_ptr<const CompositionSpec> composition_;
};

struct CompositionComponent {
    TestFunction function;
    double sigma = 10.0;
    double lambda = 1.0;
};

/// Distance-weighted mixture sum_k w_k (lambda_k (f_k(x) - bias_k) + bias_k).
/// w_k ~ exp(-|x - o_k|^2 / (2 D sigma_k^2)) / |x - o_k|, normalized; at a
/// component's optimum its weight is exactly one.
inline std::vector<double> composition_weights(const CompositionSpec& spec,
                                               std::span<const double> x) {
    const std::size_t m = spec.components.size();
    const double dim = static_cast<double>(x.size());
    std::vector<double> logw(m);
    for (std::size_t k = 0; k < m; ++k) {
        const auto& o = spec.components[k].function.optimum();
        double d2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) d2 += (x[j] - o[j]) * (x[j] - o[j]);
        if (d2 == 0.0) {
            std::vector<double> onehot(m, 0.0);
            onehot[k] = 1.0;
            return onehot;
        }
        const double sigma = spec.components[k].sigma;
        logw[k] = -d2 / (2.0 * dim * sigma * sigma) - 0.5 * std::log(d2);
    }
    const double top = *std::max_element(logw.begin(), logw.end());
    std::vector<double> w(m);
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) total += (w[k] = std::exp(logw[k] - top));
    for (auto& v : w) v /= total;
    return w;
}

inline double eval_composition(const CompositionSpec& spec, std::span<const double> x) {
    const auto w = composition_weights(spec, x);
    double value = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] == 0.0) continue;
        const auto& c = spec.components[k];
        const double fb = c.function.bias();
        value += w[k] * (c.lambda * (c.function(x) - fb) + fb);
    }
    return value;
}

inline double TestFunction::operator()(std::span<const double> x) const {
    if (x.size() != dim()) throw DimensionMismatch(dim(), x.size());
    switch (kind_) {
        case Kind::shifted_rotated:
            return eval_base(base_, transform(x, base_optimum_coordinate(base_))) + bias_;
        case Kind::hybrid: {
            const Position z = transform(x, 0.0);
            double total = 0.0;
            std::size_t cursor = 0;
            Position segment;
            for (std::size_t c = 0; c < hybrid_->components.size(); ++c) {
                const BaseFunctionId id = hybrid_->components[c].first;
                const double offset = base_optimum_coordinate(id);
                segment.clear();
                for (std::size_t k = 0; k < hybrid_->sizes[c]; ++k)
                    segment.push_back(z[hybrid_->permutation[cursor + k]] + offset);
                cursor += hybrid_->sizes[c];
                total += eval_base(id, segment);
            }
            return total + bias_;
        }
        case Kind::composition:
            return eval_composition(*composition_, x);
    }
    throw std::logic_error("unknown test function kind");
}

inline std::uint64_t TestFunction::fingerprint() const {
    std::uint64_t h = hash_name(label_);
    auto mix = [&](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        h = splitmix64(h ^ bits);
    };
    mix(static_cast<double>(kind_));
    mix(static_cast<double>(base_));
    mix(bias_);
    for (double v : shift_) mix(v);
    for (double v : rotation_) mix(v);
    if (hybrid_) {
        for (auto [id, frac] : hybrid_->components) {
            mix(static_cast<double>(id));
            mix(frac);
        }
        for (auto p : hybrid_->permutation) mix(static_cast<double>(p));
    }
    if (composition_) {
        for (const auto& c : composition_->components) {
            h = splitmix64(h ^ c.function.fingerprint());
            mix(c.sigma);
            mix(c.lambda);
        }
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return s;
}

inline nlohmann::json TestFunction::manifest() const {
    nlohmann::json j;
    j["id"] = label_;
    j["dim"] = dim();
    j["bias"] = bias_;
    j["seed"] = seed_;
    j["fingerprint"] = hex64(fingerprint());
    switch (kind_) {
        case Kind::shifted_rotated:
            j["kind"] = "shifted_rotated";
            j["base"] = base_function_name(base_);
            break;
        case Kind::hybrid: {
            j["kind"] = "hybrid";
            auto& comps = j["components"] = nlohmann::json::array();
            for (std::size_t c = 0; c < hybrid_->components.size(); ++c) {
                comps.push_back({{"base", base_function_name(hybrid_->components[c].first)},
                                 {"fraction", hybrid_->components[c].second},
                                 {"size", hybrid_->sizes[c]}});
            }
            j["permutation"] = hybrid_->permutation;
            break;
        }
        case Kind::composition: {
            j["kind"] = "composition";
            auto& comps = j["components"] = nlohmann::json::array();
            for (const auto& c : composition_->components) {
                auto cj = c.function.manifest();
                cj["sigma"] = c.sigma;
                cj["lambda"] = c.lambda;
                comps.push_back(std::move(cj));
            }
            break;
        }
    }
    return j;
}

/// f(x) = base(R (x - o) + c) + bias, with c the canonical optimum coordinate,
/// o uniform in [-80, 80]^dim and R a seeded random rotation.
inline TestFunction make_shifted_rotated(BaseFunctionId base, std::size_t dim, double bias,
                                         std::uint64_t seed) {
    if (dim < 2) throw std::invalid_argument("shifted/rotated functions need dim >= 2");
    RngStream rng(seed);
    TestFunction f;
    f.label_ = std::string(base_function_name(base));
    f.kind_ = TestFunction::Kind::shifted_rotated;
    f.base_ = base;
    f.bias_ = bias;
    f.seed_ = seed;
    f.shift_.resize(dim);
    for (auto& v : f.shift_) v = rng.uniform(-80.0, 80.0);
    f.rotation_ = random_rotation(dim, rng);
    return f;
}

/// Splits dim slots among the components by largest remainder.
inline std::vector<std::size_t> allocate_slots(const std::vector<double>& fractions,
                                               std::size_t dim) {
    std::vector<std::size_t> sizes(fractions.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t used = 0;
    for (std::size_t c = 0; c < fractions.size(); ++c) {
        const double share = fractions[c] * static_cast<double>(dim);
        sizes[c] = static_cast<std::size_t>(std::floor(share + 1e-9));
        used += sizes[c];
        remainders.emplace_back(share - static_cast<double>(sizes[c]), c);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; used < dim; ++k, ++used) ++sizes[remainders[k % remainders.size()].second];
    return sizes;
}

inline TestFunction make_hybrid(std::vector<std::pair<BaseFunctionId, double>> components,
                                std::size_t dim, double bias, std::uint64_t seed) {
    if (dim < 2) throw std::invalid_argument("hybrid functions need dim >= 2");
    if (components.empty()) throw std::invalid_argument("hybrid needs components");
    double total = 0.0;
    std::vector<double> fractions;
    for (auto [id, frac] : components) {
        if (!(frac > 0)) throw std::invalid_argument("hybrid fractions must be positive");
        total += frac;
        fractions.push_back(frac);
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("hybrid fractions must sum to 1");

    RngStream rng(seed);
    TestFunction f;
    f.label_ = "hybrid";
    f.kind_ = TestFunction::Kind::hybrid;
    f.bias_ = bias;
    f.seed_ = seed;
    f.shift_.resize(dim);
    for (auto& v : f.shift_) v = rng.uniform(-80.0, 80.0);
    f.rotation_ = random_rotation(dim, rng);
    HybridSpec spec;
    spec.components = std::move(components);
    spec.permutation.resize(dim);
    std::iota(spec.permutation.begin(), spec.permutation.end(), std::size_t{0});
    for (std::size_t i = dim - 1; i > 0; --i) std::swap(spec.permutation[i], spec.permutation[rng.index(i + 1)]);
    spec.sizes = allocate_slots(fractions, dim);
    f.hybrid_ = std::move(spec);
    return f;
}

/// Composition whose designated optimum is the first component's optimum.
inline TestFunction make_composition(std::vector<CompositionComponent> components,
                                     std::uint64_t seed) {
    if (components.size() < 2) throw std::invalid_argument("composition needs >= 2 components");
    const std::size_t dim = components.front().function.dim();
    for (const auto& c : components) {
        if (c.function.dim() != dim) throw DimensionMismatch(dim, c.function.dim());
        if (!(c.sigma > 0 && c.lambda > 0))
            throw std::invalid_argument("composition sigma and lambda must be positive");
        if (c.function.bias() < components.front().function.bias())
            throw std::invalid_argument("the first composition component must have the lowest bias");
    }
    TestFunction f;
    f.label_ = "composition";
    f.kind_ = TestFunction::Kind::composition;
    f.bias_ = components.front().function.bias();
    f.seed_ = seed;
    f.shift_ = components.front().function.optimum();
    f.rotation_ = identity_matrix(dim);
    f.composition_ = std::make_shared<const CompositionSpec>(CompositionSpec{std::move(components)});
    return f;
}

// ---------------------------------------------------------------------------
// Suite

inline constexpr std::size_t kSuiteSize = 10;
inline constexpr double kSuiteBiases[kSuiteSize] = {300,  400,  600,  900,  2000,
                                                    2200, 2300, 2400, 2600, 2700};

inline std::string suite_function_id(std::size_t slot) { return "F" + std::to_string(slot + 1); }

inline std::uint64_t suite_seed(std::size_t slot, std::size_t dim) {
    return derive_seed(0x5eed5a17e5ULL, slot, dim, 0);
}

namespace detail {

struct CompositionTemplate {
    std::vector<BaseFunctionId> bases;
    std::vector<double> sigmas;
    std::vector<double> lambdas;
    std::vector<double> offsets;
};

inline const CompositionTemplate& composition_template(std::size_t slot) {
    using B = BaseFunctionId;
    static const CompositionTemplate templates[5] = {
        // F6, N = 3
        {{B::rastrigin, B::schaffer_f6_expanded, B::sphere},
         {20, 10, 10}, {1, 10, 1e-2}, {0, 200, 100}},
        // F7, N = 5
        {{B::rosenbrock, B::high_conditioned_elliptic, B::zakharov, B::sphere,
          B::high_conditioned_elliptic},
         {10, 20, 30, 40, 50}, {1e-2, 1e-6, 1e-8, 1e-2, 1e-6}, {0, 200, 300, 100, 400}},
        // F8, N = 4
        {{B::schaffer_f6_expanded, B::levy, B::rosenbrock, B::rastrigin},
         {20, 20, 30, 30}, {10, 1, 1e-2, 1}, {0, 200, 300, 400}},
        // F9, N = 5
        {{B::levy, B::rastrigin, B::high_conditioned_elliptic, B::zakharov,
          B::schaffer_f6_expanded},
         {10, 20, 30, 40, 50}, {1, 1, 1e-6, 1e-8, 10}, {0, 300, 500, 100, 400}},
        // F10, N = 6
        {{B::rastrigin, B::rosenbrock, B::levy, B::sphere, B::high_conditioned_elliptic,
          B::schaffer_f6_expanded},
         {10, 20, 30, 40, 50, 60}, {1, 1e-2, 1, 1e-2, 1e-6, 10}, {0, 300, 500, 100, 400, 200}},
    };
    return templates[slot - 5];
}

}  // namespace detail

/// Builds suite slot 0..9 (F1..F10) for the given dimension.
inline TestFunction make_suite_function(std::size_t slot, std::size_t dim) {
    using B = BaseFunctionId;
    if (slot >= kSuiteSize) throw std::out_of_range("suite slot out of range");
    const std::uint64_t seed = suite_seed(slot, dim);
    const double bias = kSuiteBiases[slot];
    TestFunction f;
    switch (slot) {
        case 0: f = make_shifted_rotated(B::zakharov, dim, bias, seed); break;
        case 1: f = make_shifted_rotated(B::rosenbrock, dim, bias, seed); break;
        case 2: f = make_shifted_rotated(B::schaffer_f6_expanded, dim, bias, seed); break;
        case 3: f = make_shifted_rotated(B::levy, dim, bias, seed); break;
        case 4:
            f = make_hybrid({{B::sphere, 0.1}, {B::zakharov, 0.2}, {B::rosenbrock, 0.2},
                             {B::schaffer_f6_expanded, 0.1}, {B::levy, 0.2}, {B::rastrigin, 0.2}},
                            dim, bias, seed);
            break;
        default: {
            const auto& t = detail::composition_template(slot);
            std::vector<CompositionComponent> comps;
            for (std::size_t k = 0; k < t.bases.size(); ++k) {
                comps.push_back({make_shifted_rotated(t.bases[k], dim, bias + t.offsets[k],
                                                      derive_seed(seed, k, 0, 1)),
                                 t.sigmas[k], t.lambdas[k]});
            }
            f = make_composition(std::move(comps), seed);
            break;
        }
    }
    return f.with_label(suite_function_id(slot));
}

inline bool suite_supports_dim(std::size_t dim) { return dim == 2 || dim == 10 || dim == 20; }

/// F1..F10 for dim in {2, 10, 20}.
inline std::vector<TestFunction> make_suite(std::size_t dim) {
    if (!suite_supports_dim(dim))
        throw std::invalid_argument("suite supports dim 2, 10 or 20, got " + std::to_string(dim));
    std::vector<TestFunction> suite;
    suite.reserve(kSuiteSize);
    for (std::size_t s = 0; s < kSuiteSize; ++s) suite.push_back(make_suite_function(s, dim));
    return suite;
}

inline nlohmann::json suite_manifest(const std::vector<TestFunction>& suite) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& f : suite) j.push_back(f.manifest());
    return j;
}

}  // namespace snakeopt
