#pragma once

// Descriptive statistics, competition ranking, the Wilcoxon rank-sum test and
// regression error metrics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace snakeopt {

struct TrialSample {
    std::string algorithm;
    std::string function;
    std::vector<double> values;
};

struct Description {
    double best = 0.0;
    double worst = 0.0;
    double mean = 0.0;
    double std = 0.0;  ///< sample standard deviation (n - 1)
};

inline double mean_of(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean of an empty sample");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double median_of(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of an empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline Description describe(std::span<const double> values) {
    if (values.size() < 2)
        throw std::invalid_argument("describe needs at least two values for a standard deviation");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("describe: non-finite value");
    // sorted copy so the result does not depend on input order
    std::vector<double> s(values.begin(), values.end());
    std::sort(s.begin(), s.end());
    Description d;
    d.best = s.front();
    d.worst = s.back();
    d.mean = mean_of(s);
    double ss = 0.0;
    for (double v : s) ss += (v - d.mean) * (v - d.mean);
    d.std = std::sqrt(ss / static_cast<double>(s.size() - 1));
    return d;
}

/// Competition ranking of means (ascending). Means within
/// 1e-9 * max(1, |mean|) of the first of a tie group share its rank.
inline std::vector<int> rank_algorithms(std::span<const double> means) {
    if (means.size() < 2) throw std::invalid_argument("ranking needs at least two algorithms");
    std::vector<std::size_t> order(means.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return means[a] < means[b]; });
    std::vector<int> ranks(means.size());
    std::size_t group_start = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double lead = means[order[group_start]];
        const double tol = 1e-9 * std::max(1.0, std::abs(lead));
        if (k > 0 && std::abs(means[order[k]] - lead) >= tol) group_start = k;
        ranks[order[k]] = static_cast<int>(group_start) + 1;
    }
    return ranks;
}

inline std::vector<int> rank_algorithms(std::span<const TrialSample> samples) {
    std::vector<double> means;
    for (const auto& s : samples) means.push_back(mean_of(s.values));
    return rank_algorithms(means);
}

// ---------------------------------------------------------------------------
// Wilcoxon rank-sum

enum class WilcoxonMethod { exact, normal_approx };
enum class Verdict { plus, equal, minus };

constexpr std::string_view verdict_symbol(Verdict v) {
    switch (v) {
        case Verdict::plus: return "+";
        case Verdict::equal: return "=";
        case Verdict::minus: return "-";
    }
    return "?";
}

constexpr std::string_view method_name(WilcoxonMethod m) {
    return m == WilcoxonMethod::exact ? "exact" : "normal_approx";
}

struct WilcoxonResult {
    double u_statistic = 0.0;  ///< Mann-Whitney U of the first sample
    double p_value = 1.0;      ///< two-sided
    WilcoxonMethod method = WilcoxonMethod::exact;
    /// Whether the first (reference) sample is significantly lower (+), higher (-) or neither.
    Verdict verdict = Verdict::equal;
};

inline constexpr double kSignificance = 0.05;
inline constexpr std::size_t kExactLimit = 20;

/// Mid-ranks (1-based) of the pooled sample; ties share the average rank.
inline std::vector<double> pooled_ranks(std::span<const double> pooled, bool* has_ties = nullptr) {
    std::vector<std::size_t> order(pooled.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
    std::vector<double> ranks(pooled.size());
    bool ties = false;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        if (j > i) ties = true;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    if (has_ties) *has_ties = ties;
    return ranks;
}

/// Number of size-n subsets of {1..total} for every rank sum (index = sum).
inline std::vector<double> rank_sum_counts(std::size_t n, std::size_t total) {
    const std::size_t max_sum = total * (total + 1) / 2;
    // counts[k][s]: subsets of size k with sum s, over the ranks seen so far
    std::vector<std::vector<double>> counts(n + 1, std::vector<double>(max_sum + 1, 0.0));
    counts[0][0] = 1.0;
    for (std::size_t r = 1; r <= total; ++r) {
        for (std::size_t k = std::min(n, r); k >= 1; --k) {
            for (std::size_t s = max_sum; s >= r; --s) counts[k][s] += counts[k - 1][s - r];
        }
    }
    return counts[n];
}

inline double standard_normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

/// Two-sided rank-sum test of x against y with the given null distribution.
/// The exact method needs tie-free samples.
inline WilcoxonResult wilcoxon_rank_sum_with(std::span<const double> x, std::span<const double> y,
                                             WilcoxonMethod method, double alpha = kSignificance) {
    if (x.empty() || y.empty()) throw std::invalid_argument("rank-sum test needs non-empty samples");
    const std::size_t n = x.size();
    const std::size_t m = y.size();
    const std::size_t total = n + m;
    std::vector<double> pooled(x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    bool ties = false;
    const auto ranks = pooled_ranks(pooled, &ties);
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) w += ranks[i];
    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(m);

    WilcoxonResult res;
    res.method = method;
    res.u_statistic = w - nd * (nd + 1.0) / 2.0;

    if (method == WilcoxonMethod::exact) {
        if (ties) throw std::invalid_argument("exact rank-sum test needs tie-free samples");
        const auto counts = rank_sum_counts(n, total);
        const auto ws = static_cast<std::size_t>(std::llround(w));
        double below = 0.0;
        double above = 0.0;
        double all = 0.0;
        for (std::size_t s = 0; s < counts.size(); ++s) {
            all += counts[s];
            if (s <= ws) below += counts[s];
            if (s >= ws) above += counts[s];
        }
        res.p_value = std::min(1.0, 2.0 * std::min(below, above) / all);
    } else {
        double tie_term = 0.0;
        std::vector<double> sorted = pooled;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size();) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
        const double td = static_cast<double>(total);
        const double var = total > 1 ? nd * md / 12.0 * ((td + 1.0) - tie_term / (td * (td - 1.0))) : 0.0;
        if (!(var > 0.0)) {
            res.p_value = 1.0;
        } else {
            const double dev = std::abs(res.u_statistic - nd * md / 2.0);
            const double z = std::max(0.0, dev - 0.5) / std::sqrt(var);
            res.p_value = std::min(1.0, 2.0 * standard_normal_sf(z));
        }
    }

    if (res.p_value < alpha) {
        const double mx = std::accumulate(x.begin(), x.end(), 0.0) / nd;
        const double my = std::accumulate(y.begin(), y.end(), 0.0) / md;
        if (mx < my) res.verdict = Verdict::plus;
        else if (mx > my) res.verdict = Verdict::minus;
    }
    return res;
}

/// Exact null distribution when |x| + |y| <= 20 and there are no ties;
/// otherwise the normal approximation with tie and continuity corrections.
/// All-tie samples give p = 1.
inline WilcoxonResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y,
                                        double alpha = kSignificance) {
    bool ties = false;
    std::vector<double> pooled(x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    pooled_ranks(pooled, &ties);
    const bool exact = pooled.size() <= kExactLimit && !ties;
    return wilcoxon_rank_sum_with(x, y, exact ? WilcoxonMethod::exact : WilcoxonMethod::normal_approx, alpha);
}

struct SignCounts {
    int plus = 0;
    int equal = 0;
    int minus = 0;
    bool operator==(const SignCounts&) const = default;
};

/// Tallies per-function verdicts of a reference against one rival.
inline SignCounts sign_summary(std::span<const WilcoxonResult> per_function) {
    SignCounts c;
    for (const auto& r : per_function) {
        switch (r.verdict) {
            case Verdict::plus: ++c.plus; break;
            case Verdict::equal: ++c.equal; break;
            case Verdict::minus: ++c.minus; break;
        }
    }
    return c;
}

/// Same tally from raw per-function p-values and means.
inline SignCounts sign_summary(std::span<const double> p_values, std::span<const double> ref_means,
                               std::span<const double> rival_means, double alpha = kSignificance) {
    if (p_values.size() != ref_means.size() || p_values.size() != rival_means.size())
        throw std::invalid_argument("sign_summary: inconsistent function sets");
    SignCounts c;
    for (std::size_t k = 0; k < p_values.size(); ++k) {
        if (p_values[k] < alpha && ref_means[k] < rival_means[k]) ++c.plus;
        else if (p_values[k] < alpha && ref_means[k] > rival_means[k]) ++c.minus;
        else ++c.equal;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Regression metrics

class RegressionMetrics {
public:
    double rmse = 0.0;
    double mae = 0.0;
    double maxae = 0.0;

    /// Percent. Undefined when any true value is zero.
    double mape() const {
        if (!mape_) throw std::domain_error("MAPE undefined: a true value is zero");
        return *mape_;
    }
    /// Undefined when the true values are constant.
    double r2() const {
        if (!r2_) throw std::domain_error("R^2 undefined: true values have zero variance");
        return *r2_;
    }
    bool has_mape() const noexcept { return mape_.has_value(); }
    bool has_r2() const noexcept { return r2_.has_value(); }

private:
    friend RegressionMetrics regression_metrics(std::span<const double>, std::span<const double>);
    std::optional<double> mape_;
    std::optional<double> r2_;
};

inline RegressionMetrics regression_metrics(std::span<const double> y_true,
                                            std::span<const double> y_pred) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("regression_metrics: length mismatch");
    if (y_true.size() < 2) throw std::invalid_argument("regression_metrics needs >= 2 points");
    const double n = static_cast<double>(y_true.size());
    RegressionMetrics m;
    double sse = 0.0;
    double sae = 0.0;
    double sape = 0.0;
    bool zero_truth = false;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double e = y_pred[i] - y_true[i];
        sse += e * e;
        sae += std::abs(e);
        m.maxae = std::max(m.maxae, std::abs(e));
        if (y_true[i] == 0.0) zero_truth = true;
        else sape += std::abs(e / y_true[i]);
    }
    m.rmse = std::sqrt(sse / n);
    m.mae = sae / n;
    if (!zero_truth) m.mape_ = 100.0 * sape / n;
    const double mu = mean_of(y_true);
    double sst = 0.0;
    for (double v : y_true) sst += (v - mu) * (v - mu);
    if (sst > 0.0) m.r2_ = 1.0 - sse / sst;
    return m;
}

}  // namespace snakeopt
