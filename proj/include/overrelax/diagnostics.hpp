#pragma once

// Autocorrelation estimation and integrated autocorrelation time (ACT).
// The ACT of a monitored function -- the sum of its autocorrelations over
// all lags -- measures how many dependent samples are worth one independent
// draw; ratios of ACTs compare sampler efficiency directly.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "overrelax/sampler.hpp"

namespace overrelax {

/// Sample autocorrelation at one lag, normalized so lag 0 gives 1.
/// Biased (divide-by-N) estimator: the estimated sequence stays positive
/// semidefinite.  Throws for constant series.
inline double autocorrelation(std::span<const double> series, std::size_t lag) {
    const std::size_t n = series.size();
    if (n < 10)
        throw std::invalid_argument("autocorrelation: need at least 10 samples");
    if (lag >= n)
        throw std::invalid_argument("autocorrelation: lag must be < series length");
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    if (var == 0.0)
        throw std::invalid_argument("autocorrelation: series is constant");
    double acc = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t)
        acc += (series[t] - mean) * (series[t + lag] - mean);
    return acc / var;
}

enum class TruncationRule {
    geyer_pairs,     // sum acf(2m-1)+acf(2m) until the first nonpositive pair
    noise_threshold  // stop before the first lag with |acf| < 2/sqrt(N)
};

inline const char* truncation_rule_name(TruncationRule rule) {
    return rule == TruncationRule::geyer_pairs ? "geyer" : "threshold";
}

inline TruncationRule parse_truncation_rule(const std::string& name) {
    if (name == "geyer") return TruncationRule::geyer_pairs;
    if (name == "threshold") return TruncationRule::noise_threshold;
    throw std::invalid_argument("truncation_rule: expected 'geyer' or 'threshold', got '" +
                                name + "'");
}

/// ACT estimates can come out negative on strongly antithetic chains; they
/// are clamped below at this floor instead of zero.
constexpr double kActFloor = 0.01;

struct AcfReport {
    std::string function_name;
    std::vector<double> acf;     // lags 0..L as estimated
    std::size_t truncation_lag = 0;
    double act = 1.0;
    std::size_t n_samples = 0;   // post burn-in length used
    std::size_t burn_in = 0;
    TruncationRule rule = TruncationRule::geyer_pairs;
};

/// act = 1 + 2 sum_{k=1..M} acf(k), clamped at the floor.
inline double act_from_acf(std::span<const double> acf, std::size_t truncation_lag) {
    if (truncation_lag >= acf.size())
        throw std::invalid_argument("act_from_acf: truncation lag beyond stored lags");
    double sum = 0.0;
    for (std::size_t k = 1; k <= truncation_lag; ++k) sum += acf[k];
    const double act = 1.0 + 2.0 * sum;
    return act < kActFloor ? kActFloor : act;
}

/// Estimate the ACT of a series after discarding burn_in points.
///
/// geyer_pairs: consecutive-lag pairs acf(2m-1)+acf(2m) are added while
/// they stay positive; the truncation lag M is the last lag of the last
/// positive pair.  noise_threshold: M is the lag before the first k with
/// |acf(k)| < 2/sqrt(N).  The report keeps every estimated lag, including
/// the ones that triggered the stop.
inline AcfReport autocorrelation_time(std::span<const double> series,
                                      std::size_t burn_in,
                                      TruncationRule rule = TruncationRule::geyer_pairs,
                                      std::string function_name = {}) {
    if (burn_in >= series.size() || series.size() - burn_in < 1000)
        throw std::invalid_argument(
            "autocorrelation_time: need at least 1000 post-burn-in samples");
    const std::span<const double> post = series.subspan(burn_in);
    const std::size_t n = post.size();

    double mean = 0.0;
    for (double v : post) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> centered(n);
    for (std::size_t t = 0; t < n; ++t) centered[t] = post[t] - mean;
    double var = 0.0;
    for (double c : centered) var += c * c;
    if (var == 0.0)
        throw std::invalid_argument("autocorrelation_time: series is constant");

    auto acf_at = [&](std::size_t lag) {
        double acc = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t) acc += centered[t] * centered[t + lag];
        return acc / var;
    };

    AcfReport report;
    report.function_name = std::move(function_name);
    report.burn_in = burn_in;
    report.n_samples = n;
    report.rule = rule;
    report.acf.push_back(1.0);

    const std::size_t max_lag = n - 2;
    if (rule == TruncationRule::geyer_pairs) {
        std::size_t m = 1;
        while (2 * m <= max_lag) {
            const double a = acf_at(2 * m - 1);
            const double b = acf_at(2 * m);
            report.acf.push_back(a);
            report.acf.push_back(b);
            if (a + b <= 0.0) break;
            report.truncation_lag = 2 * m;
            ++m;
        }
    } else {
        const double threshold = 2.0 / std::sqrt(static_cast<double>(n));
        for (std::size_t k = 1; k <= max_lag; ++k) {
            const double a = acf_at(k);
            report.acf.push_back(a);
            if (std::fabs(a) < threshold) break;
            report.truncation_lag = k;
        }
    }
    // Keep estimating until a near-zero lag is on record, so the report can
    // always answer "where does the acf first reach the noise band".
    {
        const double threshold = 2.0 / std::sqrt(static_cast<double>(n));
        while (report.acf.size() - 1 < max_lag) {
            bool found = false;
            for (std::size_t k = 1; k < report.acf.size(); ++k)
                if (report.acf[k] <= threshold) { found = true; break; }
            if (found) break;
            report.acf.push_back(acf_at(report.acf.size()));
        }
    }
    report.act = act_from_acf(report.acf, report.truncation_lag);
    return report;
}

/// First lag whose estimated autocorrelation has dropped into the
/// 2/sqrt(N) noise band.
inline std::size_t first_near_zero_lag(const AcfReport& report) {
    const double threshold = 2.0 / std::sqrt(static_cast<double>(report.n_samples));
    for (std::size_t k = 1; k < report.acf.size(); ++k)
        if (report.acf[k] <= threshold) return k;
    throw std::runtime_error(
        "first_near_zero_lag: no lag within the noise band was estimated");
}

/// act(baseline) / act(method) for one monitored function: how many times
/// fewer iterations the method needs for the same estimation accuracy.
inline double efficiency_ratio(const ChainTrace& baseline, const ChainTrace& method,
                               const std::string& fn,
                               TruncationRule rule = TruncationRule::geyer_pairs) {
    const AcfReport base =
        autocorrelation_time(baseline.column(fn), baseline.burn_in, rule, fn);
    const AcfReport meth =
        autocorrelation_time(method.column(fn), method.burn_in, rule, fn);
    return base.act / meth.act;
}

}  // namespace overrelax
