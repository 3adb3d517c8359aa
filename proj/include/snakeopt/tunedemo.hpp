#pragma once

// Hyperparameter tuning demo: an optimizer picks batch size, learning rate
// and hidden width of a small trajectory regressor trained on synthetic
// (altitude, longitude, latitude) sequences.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "snakeopt/core.hpp"
#include "snakeopt/harness.hpp"

namespace snakeopt {

struct HyperParams {
    int batch = 32;
    double lr = 0.001;
    int nodes = 100;
    bool operator==(const HyperParams&) const = default;
};

/// Search box. Continuous coordinates are ordered (batch, lr, nodes).
struct HyperBox {
    static constexpr int batch_min = 16;
    static constexpr int batch_max = 128;
    static constexpr double lr_min = 0.0001;
    static constexpr double lr_max = 0.02;
    static constexpr int nodes_min = 50;
    static constexpr int nodes_max = 200;

    static SearchSpace space() {
        return SearchSpace({double(batch_min), lr_min, double(nodes_min)},
                           {double(batch_max), lr_max, double(nodes_max)});
    }

    static bool contains(const HyperParams& hp) {
        return hp.batch >= batch_min && hp.batch <= batch_max && hp.lr >= lr_min && hp.lr <= lr_max &&
               hp.nodes >= nodes_min && hp.nodes <= nodes_max;
    }

    static Position encode(const HyperParams& hp) { return {double(hp.batch), hp.lr, double(hp.nodes)}; }

    /// Integers round to nearest; everything is clamped into the box.
    static HyperParams decode(std::span<const double> x) {
        if (x.size() != 3) throw DimensionMismatch(3, x.size());
        const auto whole = [](double v, int lo, int hi) {
            if (std::isnan(v)) return lo;
            return static_cast<int>(std::clamp(std::round(v), double(lo), double(hi)));
        };
        HyperParams hp;
        hp.batch = whole(x[0], batch_min, batch_max);
        hp.lr = std::isnan(x[1]) ? lr_min : std::clamp(x[1], lr_min, lr_max);
        hp.nodes = whole(x[2], nodes_min, nodes_max);
        return hp;
    }
};

// ---------------------------------------------------------------------------
// Synthetic dataset

struct SurrogateDataset {
    static constexpr std::size_t window = 6;
    static constexpr std::size_t features = 3;
    static constexpr std::size_t inputs = window * features;

    using Point = std::array<double, features>;

    std::uint64_t seed = 0;
    /// Normalized sequences, each point (altitude, longitude, latitude).
    std::vector<std::vector<Point>> sequences;
    /// Row-major windows: x has `inputs` columns, y has `features`.
    std::vector<double> train_x, train_y, val_x, val_y;

    std::size_t n_train() const { return train_y.size() / features; }
    std::size_t n_val() const { return val_y.size() / features; }
    bool operator==(const SurrogateDataset&) const = default;
};

inline SurrogateDataset gen_dataset(std::uint64_t seed, std::size_t n_sequences = 40,
                                    std::size_t sequence_length = 16) {
    if (n_sequences < 10) throw std::invalid_argument("gen_dataset needs at least 10 sequences");
    if (sequence_length <= SurrogateDataset::window)
        throw std::invalid_argument("sequences must be longer than the input window");
    RngStream rng = RngStream::derive(seed, 0, "dataset", "trajectory");
    SurrogateDataset d;
    d.seed = seed;

    for (std::size_t s = 0; s < n_sequences; ++s) {
        const double cruise = rng.uniform(8000.0, 11000.0);
        const double tau = rng.uniform(3.0, 8.0);
        const double start = rng.uniform(0.0, 10.0);
        const double wobble = rng.uniform(0.0, 6.283185307179586);
        double lon = rng.uniform(108.0, 110.0);
        double lat = rng.uniform(34.0, 35.0);
        const double heading = rng.uniform(0.3, 0.7);
        const double turn = rng.uniform(-0.03, 0.03);
        const double speed = rng.uniform(0.15, 0.3);
        std::vector<SurrogateDataset::Point> seq;
        for (std::size_t t = 0; t < sequence_length; ++t) {
            const double td = static_cast<double>(t);
            const double alt = cruise * (1.0 - std::exp(-(td + start) / tau)) +
                               50.0 * std::sin(0.5 * td + wobble) + rng.normal(0.0, 30.0);
            seq.push_back({alt, lon + rng.normal(0.0, 0.005), lat + rng.normal(0.0, 0.005)});
            lon += speed * std::cos(heading + turn * td);
            lat += speed * std::sin(heading + turn * td);
        }
        d.sequences.push_back(std::move(seq));
    }

    for (std::size_t f = 0; f < SurrogateDataset::features; ++f) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& seq : d.sequences)
            for (const auto& p : seq) {
                lo = std::min(lo, p[f]);
                hi = std::max(hi, p[f]);
            }
        for (auto& seq : d.sequences)
            for (auto& p : seq) p[f] = hi > lo ? (p[f] - lo) / (hi - lo) : 0.0;
    }

    struct Window {
        std::size_t seq, start;
    };
    std::vector<Window> windows;
    for (std::size_t s = 0; s < n_sequences; ++s)
        for (std::size_t t = 0; t + SurrogateDataset::window < sequence_length; ++t) windows.push_back({s, t});
    std::shuffle(windows.begin(), windows.end(), rng.engine());
    const std::size_t n_val =
        static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(windows.size())));
    for (std::size_t w = 0; w < windows.size(); ++w) {
        const bool val = w < n_val;
        auto& x = val ? d.val_x : d.train_x;
        auto& y = val ? d.val_y : d.train_y;
        const auto& seq = d.sequences[windows[w].seq];
        for (std::size_t k = 0; k < SurrogateDataset::window; ++k)
            x.insert(x.end(), seq[windows[w].start + k].begin(), seq[windows[w].start + k].end());
        const auto& target = seq[windows[w].start + SurrogateDataset::window];
        y.insert(y.end(), target.begin(), target.end());
    }
    return d;
}

// ---------------------------------------------------------------------------
// Surrogate model: inputs -> nodes (tanh) -> 3, mini-batch gradient descent

inline constexpr double kDivergencePenalty = 1e6;

struct TrainOptions {
    std::size_t epochs = 30;
    double momentum = 0.9;
};

struct TrainOutcome {
    double loss = 0.0;  ///< validation MSE, NaN or inf when training diverged
    bool divergent = false;
};

inline std::size_t parameter_count(int nodes) {
    const auto h = static_cast<std::size_t>(nodes);
    return (SurrogateDataset::inputs + 1) * h + (h + 1) * SurrogateDataset::features;
}

class SurrogateModel {
public:
    SurrogateModel(int nodes, RngStream& rng) : hidden_(static_cast<std::size_t>(nodes)) {
        if (nodes < 1) throw std::invalid_argument("model needs at least one hidden unit");
        params_.assign(snakeopt::parameter_count(nodes), 0.0);
        const double a1 = std::sqrt(6.0 / double(kIn + hidden_));
        const double a2 = std::sqrt(6.0 / double(hidden_ + kOut));
        for (std::size_t i = 0; i < kIn * hidden_; ++i) params_[w1() + i] = rng.uniform(-a1, a1);
        for (std::size_t i = 0; i < hidden_ * kOut; ++i) params_[w2() + i] = rng.uniform(-a2, a2);
    }

    std::size_t parameter_count() const { return params_.size(); }
    std::span<const double> parameters() const { return params_; }

    void predict(std::span<const double> x, std::span<double> out, std::vector<double>& h) const {
        h.resize(hidden_);
        for (std::size_t j = 0; j < hidden_; ++j) {
            const double* row = &params_[w1() + j * kIn];
            double z = params_[b1() + j];
            for (std::size_t i = 0; i < kIn; ++i) z += row[i] * x[i];
            h[j] = std::tanh(z);
        }
        for (std::size_t o = 0; o < kOut; ++o) {
            const double* row = &params_[w2() + o * hidden_];
            double z = params_[b2() + o];
            for (std::size_t j = 0; j < hidden_; ++j) z += row[j] * h[j];
            out[o] = z;
        }
    }

    /// Mean squared error over all outputs of a row-major sample block.
    double mse(std::span<const double> xs, std::span<const double> ys) const {
        const std::size_t n = ys.size() / kOut;
        std::vector<double> h;
        std::array<double, kOut> out{};
        double sse = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            predict(xs.subspan(s * kIn, kIn), out, h);
            for (std::size_t o = 0; o < kOut; ++o) {
                const double e = out[o] - ys[s * kOut + o];
                sse += e * e;
            }
        }
        return sse / static_cast<double>(n * kOut);
    }

    /// One momentum step on the mean-squared-error gradient of the given rows.
    void step(std::span<const double> xs, std::span<const double> ys, std::span<const std::size_t> rows,
              double lr, double momentum) {
        grad_.assign(params_.size(), 0.0);
        if (velocity_.size() != params_.size()) velocity_.assign(params_.size(), 0.0);
        std::vector<double> h;
        std::vector<double> dh(hidden_);
        std::array<double, kOut> out{};
        const double scale = 2.0 / static_cast<double>(rows.size() * kOut);
        for (std::size_t r : rows) {
            const auto x = xs.subspan(r * kIn, kIn);
            predict(x, out, h);
            std::fill(dh.begin(), dh.end(), 0.0);
            for (std::size_t o = 0; o < kOut; ++o) {
                const double e = scale * (out[o] - ys[r * kOut + o]);
                grad_[b2() + o] += e;
                double* g = &grad_[w2() + o * hidden_];
                const double* w = &params_[w2() + o * hidden_];
                for (std::size_t j = 0; j < hidden_; ++j) {
                    g[j] += e * h[j];
                    dh[j] += e * w[j];
                }
            }
            for (std::size_t j = 0; j < hidden_; ++j) {
                const double dz = dh[j] * (1.0 - h[j] * h[j]);
                grad_[b1() + j] += dz;
                double* g = &grad_[w1() + j * kIn];
                for (std::size_t i = 0; i < kIn; ++i) g[i] += dz * x[i];
            }
        }
        for (std::size_t p = 0; p < params_.size(); ++p) {
            velocity_[p] = momentum * velocity_[p] - lr * grad_[p];
            params_[p] += velocity_[p];
        }
    }

private:
    static constexpr std::size_t kIn = SurrogateDataset::inputs;
    static constexpr std::size_t kOut = SurrogateDataset::features;

    // flat layout: W1 (hidden x in), b1, W2 (out x hidden), b2
    std::size_t w1() const { return 0; }
    std::size_t b1() const { return kIn * hidden_; }
    std::size_t w2() const { return b1() + hidden_; }
    std::size_t b2() const { return w2() + kOut * hidden_; }

    std::size_t hidden_;
    std::vector<double> params_;
    std::vector<double> grad_;
    std::vector<double> velocity_;
};

/// Trains without checking the box, so out-of-range settings can be probed.
inline TrainOutcome train_model(const HyperParams& hp, const SurrogateDataset& data, std::uint64_t seed,
                                const TrainOptions& opts = {}) {
    if (hp.batch < 1 || hp.nodes < 1 || !(hp.lr > 0.0))
        throw std::invalid_argument("train_model: batch, nodes and lr must be positive");
    if (data.n_train() == 0 || data.n_val() == 0) throw std::invalid_argument("train_model: empty dataset");
    RngStream rng = RngStream::derive(seed, 0, "surrogate", "train");
    SurrogateModel model(hp.nodes, rng);
    std::vector<std::size_t> order(data.n_train());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto batch = static_cast<std::size_t>(hp.batch);
    for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng.engine());
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t len = std::min(batch, order.size() - start);
            model.step(data.train_x, data.train_y, std::span(order).subspan(start, len), hp.lr, opts.momentum);
        }
        const auto params = model.parameters();
        if (!std::all_of(params.begin(), params.end(), [](double p) { return std::isfinite(p); }))
            return {std::numeric_limits<double>::quiet_NaN(), true};
    }
    const double loss = model.mse(data.val_x, data.val_y);
    return {loss, !std::isfinite(loss)};
}

/// Validation MSE of a box point, or the penalty when training diverges.
inline double train_eval(const HyperParams& hp, const SurrogateDataset& data, std::uint64_t seed,
                         const TrainOptions& opts = {}) {
    if (!HyperBox::contains(hp)) throw std::invalid_argument("train_eval: hyperparameters outside the box");
    const auto r = train_model(hp, data, seed, opts);
    return r.divergent ? kDivergencePenalty : r.loss;
}

// ---------------------------------------------------------------------------
// Tuning

struct StabilizingIterations {
    std::size_t nodes = 0;
    std::size_t batch = 0;
    std::size_t lr = 0;
};

struct TuneOptions {
    std::size_t pop_size = 10;
    std::size_t n_sequences = 40;
    TrainOptions train;
};

struct TuneResult {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::size_t budget = 0;
    HyperParams best;
    double loss = 0.0;
    /// Best loss after initialization (entry 0) and after every iteration.
    std::vector<double> trace;
    std::vector<HyperParams> best_trace;
    /// Last iteration at which each hyperparameter of the incumbent changed.
    StabilizingIterations stabilizing;
    std::uint64_t evaluations = 0;
    std::size_t divergent_evaluations = 0;
};

namespace detail {
struct BudgetExhausted {};
}  // namespace detail

/// Tunes the surrogate with exactly `budget` training runs (fewer if the
/// algorithm's iteration schedule ends first). Population algorithms plan
/// budget / pop_size - 1 iterations; random search samples until the budget.
inline TuneResult tune(std::string_view algorithm, std::size_t budget, std::uint64_t seed,
                       const TuneOptions& opts = {}) {
    if (budget < 20) throw std::invalid_argument("tune budget must be >= 20");
    if (opts.pop_size < 4 || opts.pop_size > budget)
        throw std::invalid_argument("tune pop_size must be in [4, budget]");
    if (!is_known_algorithm(algorithm))
        throw std::invalid_argument("unknown algorithm '" + std::string(algorithm) + "'");
    const SurrogateDataset data = gen_dataset(seed, opts.n_sequences);

    TuneResult res;
    res.algorithm = algorithm;
    res.seed = seed;
    res.budget = budget;
    res.loss = std::numeric_limits<double>::infinity();
    bool have_best = false;
    const std::size_t pop = opts.pop_size;
    const auto snapshot = [&] {
        res.trace.push_back(res.loss);
        res.best_trace.push_back(res.best);
    };

    Objective obj(3, [&](std::span<const double> x) {
        if (res.evaluations >= budget) throw detail::BudgetExhausted{};
        ++res.evaluations;
        const HyperParams hp = HyperBox::decode(x);
        const auto r = train_model(hp, data, seed, opts.train);
        const double loss = r.divergent ? kDivergencePenalty : r.loss;
        if (r.divergent) ++res.divergent_evaluations;
        if (!have_best || loss < res.loss) {
            res.loss = loss;
            res.best = hp;
            have_best = true;
        }
        // every algorithm spends its first pop_size evaluations on the initial population
        if (res.evaluations == pop && res.trace.empty()) snapshot();
        return loss;
    });

    const std::size_t planned = algorithm == "random" ? budget : std::max<std::size_t>(2, budget / pop - 1);
    RngStream rng = RngStream::derive(seed, 0, algorithm, "tune-demo");
    try {
        run_algorithm(algorithm, obj, HyperBox::space(), pop, planned, rng,
                      [&](std::size_t, std::span<const Individual>) { snapshot(); });
    } catch (const detail::BudgetExhausted&) {
        snapshot();
    }

    for (std::size_t t = 1; t < res.best_trace.size(); ++t) {
        const auto& prev = res.best_trace[t - 1];
        const auto& cur = res.best_trace[t];
        if (cur.nodes != prev.nodes) res.stabilizing.nodes = t;
        if (cur.batch != prev.batch) res.stabilizing.batch = t;
        if (cur.lr != prev.lr) res.stabilizing.lr = t;
    }
    return res;
}

inline std::string tune_trace_csv(const TuneResult& r) {
    std::ostringstream os;
    os << "iter,best_loss,nodes,batch,lr\n";
    for (std::size_t t = 0; t < r.trace.size(); ++t)
        os << t << ',' << format_number(r.trace[t]) << ',' << r.best_trace[t].nodes << ','
           << r.best_trace[t].batch << ',' << format_number(r.best_trace[t].lr) << '\n';
    return os.str();
}

inline nlohmann::json to_json(const TuneResult& r, const std::string& trace_csv_path) {
    return {{"algorithm", r.algorithm},
            {"seed", r.seed},
            {"budget", r.budget},
            {"best", {{"nodes", r.best.nodes}, {"batch", r.best.batch}, {"lr", r.best.lr}}},
            {"loss", r.loss},
            {"stabilizing_iterations",
             {{"nodes", r.stabilizing.nodes}, {"batch", r.stabilizing.batch}, {"lr", r.stabilizing.lr}}},
            {"evaluations", r.evaluations},
            {"divergent_evaluations", r.divergent_evaluations},
            {"trace_csv_path", trace_csv_path}};
}

/// Writes tune.json and trace.csv into `dir`. The JSON refers to the trace by
/// file name so results do not depend on where they were written.
inline void export_tune(const TuneResult& r, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());
    detail::write_text(dir / "trace.csv", tune_trace_csv(r));
    detail::write_text(dir / "tune.json", to_json(r, "trace.csv").dump(2) + "\n");
}

}  // namespace snakeopt
