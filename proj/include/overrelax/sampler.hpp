#pragma once

// Single-component update kernels -- Gibbs, Adler overrelaxation, ordered
// overrelaxation (direct and cdf-based), ordered underrelaxation -- and the
// sequential-scan chain driver.
//
// Ordered overrelaxation of component i: generate K values from the full
// conditional, place the old value among them in nondecreasing order (rank
// r, ties broken at random), and adopt the value at index K - r of the
// combined ordering.  K = 1 reduces to Gibbs sampling; large K approaches a
// deterministic reflection through the conditional median.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "overrelax/distribution.hpp"
#include "overrelax/model.hpp"
#include "overrelax/rng.hpp"

namespace overrelax {

struct SamplerSpec {
    enum class Method { gibbs, adler, ordered_over, ordered_under };
    enum class OverImpl { direct, cdf };

    Method method = Method::gibbs;
    double adler_alpha = 0.0;      // adler only
    int k = 1;                     // ordered methods only
    OverImpl impl = OverImpl::cdf; // ordered_over only

    void validate() const {
        if (method == Method::adler &&
            !(adler_alpha >= -1.0 && adler_alpha <= 1.0))
            throw std::invalid_argument(
                "SamplerSpec: adler_alpha=" + std::to_string(adler_alpha) +
                " invalid; Adler updates require -1 <= alpha <= +1");
        if ((method == Method::ordered_over || method == Method::ordered_under) &&
            k < 1)
            throw std::invalid_argument("SamplerSpec: k must be >= 1");
    }

    std::string describe() const {
        switch (method) {
            case Method::gibbs: return "gibbs";
            case Method::adler: {
                char buf[64];
                std::snprintf(buf, sizeof buf, "adler(alpha=%g)", adler_alpha);
                return buf;
            }
            case Method::ordered_over: {
                char buf[64];
                std::snprintf(buf, sizeof buf, "ordered_over(k=%d,impl=%s)", k,
                              impl == OverImpl::direct ? "direct" : "cdf");
                return buf;
            }
            default: {
                char buf[64];
                std::snprintf(buf, sizeof buf, "ordered_under(k=%d)", k);
                return buf;
            }
        }
    }
};

/// Optional per-update trace of the kernel internals.
struct UpdateAudit {
    double u = std::numeric_limits<double>::quiet_NaN();        // F(x_i)
    int rank = -1;                                              // r
    double v = std::numeric_limits<double>::quiet_NaN();        // beta variate
    double u_prime = std::numeric_limits<double>::quiet_NaN();  // overrelaxed u
    double noise_n = std::numeric_limits<double>::quiet_NaN();  // Adler's n
    int chosen_index = -1;                                      // index adopted
};

// Before quantile inversion u' is clamped away from the endpoints, where
// F^-1 of an unbounded family is infinite.
constexpr double kQuantileClamp = 1e-15;

struct RankCount {
    int below = 0;  // draws strictly less than the old value
    int ties = 0;   // draws exactly equal to the old value
};

inline RankCount count_rank(std::span<const double> draws, double old_value) {
    RankCount rc;
    for (double d : draws) {
        if (d < old_value) ++rc.below;
        else if (d == old_value) ++rc.ties;
    }
    return rc;
}

/// Rank of the old value in the combined nondecreasing ordering: a uniformly
/// random position inside its block of exactly-equal values.
inline int resolve_rank(const RankCount& rc, RngStream& rng) {
    if (rc.ties == 0) return rc.below;
    return rc.below + static_cast<int>(rng.uniform_below(
                          static_cast<std::uint64_t>(rc.ties) + 1));
}

/// Value at position `index` of the combined ordering of `draws` plus the
/// old value, when the old value occupies position `old_rank`.  Positions
/// below old_rank are filled by the smallest draws, positions above it by
/// the rest, so only one order statistic of `draws` is ever needed.
inline double combined_order_statistic(std::vector<double>& draws, int index,
                                       int old_rank, double old_value) {
    if (index == old_rank) return old_value;
    const int j = (index < old_rank) ? index : index - 1;
    auto nth = draws.begin() + j;
    std::nth_element(draws.begin(), nth, draws.end());
    return *nth;
}

template <conditional_model M>
double gibbs_update(std::size_t i, const StateVector& x, const M& model,
                    RngStream& rng) {
    return draw(model.full_conditional(i, x), rng);
}

/// x'_i = mu + alpha (x_i - mu) + sd sqrt(1 - alpha^2) n, n ~ N(0,1).
/// Valid only when the full conditional is Gaussian.
template <conditional_model M>
double adler_update(std::size_t i, const StateVector& x, const M& model,
                    double adler_alpha, RngStream& rng,
                    UpdateAudit* audit = nullptr) {
    if (!(adler_alpha >= -1.0 && adler_alpha <= 1.0))
        throw std::invalid_argument(
            "adler_update: requires -1 <= alpha <= +1");
    const ScalarDistribution dist = model.full_conditional(i, x);
    if (!dist.is<Gaussian>())
        throw std::invalid_argument(
            std::string("adler_update: full conditional must be Gaussian, got ") +
            dist.family_name());
    const Gaussian& g = dist.as<Gaussian>();
    const double n = standard_normal(rng);
    if (audit) audit->noise_n = n;
    return g.mean + adler_alpha * (x[i] - g.mean) +
           g.sd * std::sqrt(1.0 - adler_alpha * adler_alpha) * n;
}

template <conditional_model M>
double ordered_overrelax_direct(std::size_t i, const StateVector& x, const M& model,
                                int k, RngStream& rng,
                                UpdateAudit* audit = nullptr) {
    if (k < 1) throw std::invalid_argument("ordered_overrelax_direct: k must be >= 1");
    const ScalarDistribution dist = model.full_conditional(i, x);
    std::vector<double> draws(static_cast<std::size_t>(k));
    for (double& d : draws) d = draw(dist, rng);
    const int r = resolve_rank(count_rank(draws, x[i]), rng);
    const int target = k - r;
    if (audit) {
        audit->rank = r;
        audit->chosen_index = target;
    }
    return combined_order_statistic(draws, target, r, x[i]);
}

/// Same transition distribution as the direct form, in time independent of
/// K: overrelax u = F(x_i) against the uniform distribution using a
/// binomial rank and a rescaled beta order statistic, then map back.
template <conditional_model M>
double ordered_overrelax_cdf(std::size_t i, const StateVector& x, const M& model,
                             int k, RngStream& rng,
                             UpdateAudit* audit = nullptr) {
    if (k < 1) throw std::invalid_argument("ordered_overrelax_cdf: k must be >= 1");
    const ScalarDistribution dist = model.full_conditional(i, x);
    const double u = cdf(dist, x[i]);
    const int r = static_cast<int>(draw(ScalarDistribution{Binomial{k, u}}, rng));
    if (audit) {
        audit->u = u;
        audit->rank = r;
        audit->chosen_index = k - r;
    }
    double u_prime;
    if (r > k - r) {
        const double v = draw(
            ScalarDistribution{Beta{static_cast<double>(k - r + 1),
                                    static_cast<double>(2 * r - k)}},
            rng);
        u_prime = u * v;
        if (audit) audit->v = v;
    } else if (r < k - r) {
        const double v = draw(
            ScalarDistribution{Beta{static_cast<double>(r + 1),
                                    static_cast<double>(k - 2 * r)}},
            rng);
        u_prime = 1.0 - (1.0 - u) * v;
        if (audit) audit->v = v;
    } else {
        if (audit) audit->u_prime = u;
        return x[i];  // r = k - r: the old value is its own reflection
    }
    u_prime = std::clamp(u_prime, kQuantileClamp, 1.0 - kQuantileClamp);
    if (audit) audit->u_prime = u_prime;
    return quantile(dist, u_prime);
}

/// Underrelaxed companion: after ranking the old value, move to the
/// neighbouring order statistic r+1 or r-1 (fair coin); if the chosen index
/// falls outside [0, K] the update is rejected and x_i is kept.
template <conditional_model M>
double ordered_underrelax(std::size_t i, const StateVector& x, const M& model,
                          int k, RngStream& rng, UpdateAudit* audit = nullptr) {
    if (k < 1) throw std::invalid_argument("ordered_underrelax: k must be >= 1");
    const ScalarDistribution dist = model.full_conditional(i, x);
    std::vector<double> draws(static_cast<std::size_t>(k));
    for (double& d : draws) d = draw(dist, rng);
    const int r = resolve_rank(count_rank(draws, x[i]), rng);
    const int target = rng.coin() ? r + 1 : r - 1;
    if (audit) {
        audit->rank = r;
        audit->chosen_index = target;
    }
    if (target < 0 || target > k) return x[i];  // out of range: rejected
    return combined_order_statistic(draws, target, r, x[i]);
}

/// K giving ordered overrelaxation on a Gaussian target roughly the
/// behaviour of an Adler update with the given negative alpha:
/// K ~ 3.5 / (1 + alpha).
inline double equivalent_K(double adler_alpha) {
    if (!(adler_alpha > -1.0 && adler_alpha <= 0.0))
        throw std::domain_error(
            "equivalent_K: requires -1 < adler_alpha <= 0");
    return 3.5 / (1.0 + adler_alpha);
}

/// Apply the update selected by spec to component i, returning the new value.
template <conditional_model M>
double update_component(std::size_t i, const StateVector& x, const M& model,
                        const SamplerSpec& spec, RngStream& rng,
                        UpdateAudit* audit = nullptr) {
    switch (spec.method) {
        case SamplerSpec::Method::gibbs:
            return gibbs_update(i, x, model, rng);
        case SamplerSpec::Method::adler:
            return adler_update(i, x, model, spec.adler_alpha, rng, audit);
        case SamplerSpec::Method::ordered_over:
            return spec.impl == SamplerSpec::OverImpl::direct
                       ? ordered_overrelax_direct(i, x, model, spec.k, rng, audit)
                       : ordered_overrelax_cdf(i, x, model, spec.k, rng, audit);
        default:
            return ordered_underrelax(i, x, model, spec.k, rng, audit);
    }
}

/// A named scalar function of state recorded once per sweep.
struct Monitor {
    std::string name;
    std::function<double(const StateVector&)> fn;
};

inline Monitor coordinate_monitor(std::size_t i) {
    return {"x" + std::to_string(i + 1),
            [i](const StateVector& x) { return x.at(i); }};
}

inline Monitor coordinate_square_monitor(std::size_t i) {
    return {"x" + std::to_string(i + 1) + "sq",
            [i](const StateVector& x) { return x.at(i) * x.at(i); }};
}

/// The last state component, which for the pump model is tau.
inline Monitor tau_monitor() {
    return {"tau", [](const StateVector& x) { return x.back(); }};
}

/// Recorded values of the monitored functions, one row per sweep.
struct ChainTrace {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;  // columns[f][iteration]
    std::size_t burn_in = 0;
    std::uint64_t seed = 0;
    SamplerSpec spec;

    std::size_t n_iterations() const {
        return columns.empty() ? 0 : columns.front().size();
    }

    bool has(const std::string& name) const {
        return std::find(names.begin(), names.end(), name) != names.end();
    }

    std::span<const double> column(const std::string& name) const {
        for (std::size_t f = 0; f < names.size(); ++f)
            if (names[f] == name) return columns[f];
        throw std::invalid_argument("ChainTrace: no monitored function named '" +
                                    name + "'");
    }
};

/// Run n_iter sequential sweeps (components updated in ascending index
/// order, so for the pump model first the lambdas and then tau), recording
/// every monitor once per sweep.  Bit-reproducible for a given seed.
template <conditional_model M>
ChainTrace run_chain(const M& model, const SamplerSpec& spec, std::size_t n_iter,
                     StateVector init, const std::vector<Monitor>& monitored,
                     std::uint64_t seed, std::size_t burn_in = 0,
                     std::uint64_t chain_index = 0) {
    spec.validate();
    if (init.size() != model.dimension())
        throw std::invalid_argument("run_chain: init does not match model dimension");
    if (n_iter == 0)
        throw std::invalid_argument("run_chain: n_iter must be >= 1");
    if (burn_in >= n_iter)
        throw std::invalid_argument("run_chain: burn_in must be < n_iter");
    if (monitored.empty())
        throw std::invalid_argument("run_chain: need at least one monitor");

    ChainTrace trace;
    trace.burn_in = burn_in;
    trace.seed = seed;
    trace.spec = spec;
    trace.names.reserve(monitored.size());
    for (const Monitor& m : monitored) trace.names.push_back(m.name);
    trace.columns.assign(monitored.size(), {});
    for (auto& col : trace.columns) col.reserve(n_iter);

    RngStream rng(seed, chain_index);
    StateVector x = std::move(init);
    const std::size_t dim = model.dimension();
    for (std::size_t it = 0; it < n_iter; ++it) {
        for (std::size_t i = 0; i < dim; ++i)
            x[i] = update_component(i, x, model, spec, rng);
        for (std::size_t f = 0; f < monitored.size(); ++f)
            trace.columns[f].push_back(monitored[f].fn(x));
    }
    return trace;
}

}  // namespace overrelax
