#pragma once

// Tagged univariate distributions plus the three operations the samplers
// need: draw, cdf, quantile.  Parameters are validated at construction;
// cdf/quantile exist only for the continuous families.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include "overrelax/rng.hpp"
#include "overrelax/special.hpp"

namespace overrelax {

struct Gaussian {
    double mean;
    double sd;
};

struct Gamma {
    double shape;
    double rate;
};

struct Beta {
    double a;
    double b;
};

struct Binomial {
    long n;
    double p;
};

struct Poisson {
    double mean;
};

struct Uniform {
    double lo;
    double hi;
};

class ScalarDistribution {
public:
    using Variant = std::variant<Gaussian, Gamma, Beta, Binomial, Poisson, Uniform>;

    ScalarDistribution(Gaussian g) : v_(g) {
        if (!std::isfinite(g.mean) || !(g.sd > 0.0) || !std::isfinite(g.sd))
            throw std::invalid_argument("Gaussian: requires finite mean and sd > 0");
    }
    ScalarDistribution(Gamma g) : v_(g) {
        if (!(g.shape > 0.0) || !(g.rate > 0.0) || !std::isfinite(g.shape) ||
            !std::isfinite(g.rate))
            throw std::invalid_argument("Gamma: requires shape > 0 and rate > 0");
    }
    ScalarDistribution(Beta b) : v_(b) {
        if (!(b.a > 0.0) || !(b.b > 0.0) || !std::isfinite(b.a) || !std::isfinite(b.b))
            throw std::invalid_argument("Beta: requires a > 0 and b > 0");
    }
    ScalarDistribution(Binomial b) : v_(b) {
        if (b.n < 0 || !(b.p >= 0.0 && b.p <= 1.0))
            throw std::invalid_argument("Binomial: requires n >= 0 and p in [0,1]");
    }
    ScalarDistribution(Poisson p) : v_(p) {
        if (!(p.mean >= 0.0) || !std::isfinite(p.mean))
            throw std::invalid_argument("Poisson: requires mean >= 0");
    }
    ScalarDistribution(Uniform u) : v_(u) {
        if (!(u.hi > u.lo) || !std::isfinite(u.lo) || !std::isfinite(u.hi))
            throw std::invalid_argument("Uniform: requires hi > lo, both finite");
    }

    template <typename T>
    bool is() const { return std::holds_alternative<T>(v_); }

    template <typename T>
    const T& as() const { return std::get<T>(v_); }

    bool is_continuous() const {
        return !is<Binomial>() && !is<Poisson>();
    }

    const char* family_name() const {
        switch (v_.index()) {
            case 0: return "gaussian";
            case 1: return "gamma";
            case 2: return "beta";
            case 3: return "binomial";
            case 4: return "poisson";
            default: return "uniform";
        }
    }

    double mean() const {
        return std::visit(
            [](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, Gaussian>) return d.mean;
                else if constexpr (std::is_same_v<T, Gamma>) return d.shape / d.rate;
                else if constexpr (std::is_same_v<T, Beta>) return d.a / (d.a + d.b);
                else if constexpr (std::is_same_v<T, Binomial>)
                    return static_cast<double>(d.n) * d.p;
                else if constexpr (std::is_same_v<T, Poisson>) return d.mean;
                else return 0.5 * (d.lo + d.hi);
            },
            v_);
    }

    double variance() const {
        return std::visit(
            [](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, Gaussian>) return d.sd * d.sd;
                else if constexpr (std::is_same_v<T, Gamma>)
                    return d.shape / (d.rate * d.rate);
                else if constexpr (std::is_same_v<T, Beta>) {
                    const double s = d.a + d.b;
                    return d.a * d.b / (s * s * (s + 1.0));
                } else if constexpr (std::is_same_v<T, Binomial>)
                    return static_cast<double>(d.n) * d.p * (1.0 - d.p);
                else if constexpr (std::is_same_v<T, Poisson>) return d.mean;
                else {
                    const double w = d.hi - d.lo;
                    return w * w / 12.0;
                }
            },
            v_);
    }

    template <typename Visitor>
    decltype(auto) visit(Visitor&& vis) const {
        return std::visit(std::forward<Visitor>(vis), v_);
    }

private:
    Variant v_;
};

/// Standard normal variate from one uniform, through the inverse cdf.
inline double standard_normal(RngStream& rng) {
    return normal_quantile(rng.uniform());
}

namespace detail {

// Marsaglia-Tsang squeeze method for shape >= 1; the shape < 1 case boosts
// a shape+1 draw by u^(1/shape).  Unit rate.
inline double standard_gamma(double shape, RngStream& rng) {
    if (shape < 1.0) {
        const double u = rng.uniform();
        return standard_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = standard_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

inline long draw_binomial(long n, double p, RngStream& rng) {
    long count = 0;
    for (long i = 0; i < n; ++i)
        if (rng.uniform() < p) ++count;
    return count;
}

// Exact Poisson: reduce a large mean with gamma splits, then finish with
// the product-of-uniforms loop.
inline long draw_poisson(double mean, RngStream& rng) {
    long total = 0;
    while (mean > 12.0) {
        const long m = static_cast<long>(std::floor(mean * 7.0 / 8.0));
        const double g = standard_gamma(static_cast<double>(m), rng);
        if (g < mean) {
            total += m;
            mean -= g;
        } else {
            return total + draw_binomial(m - 1, mean / g, rng);
        }
    }
    const double limit = std::exp(-mean);
    double prod = 1.0;
    long k = 0;
    do {
        ++k;
        prod *= rng.uniform();
    } while (prod > limit);
    return total + k - 1;
}

}  // namespace detail

/// One variate from dist.  The amount of stream consumed is deterministic
/// given the same inputs and the same algorithm branch.
inline double draw(const ScalarDistribution& dist, RngStream& rng) {
    return dist.visit([&rng](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
            return d.mean + d.sd * standard_normal(rng);
        } else if constexpr (std::is_same_v<T, Gamma>) {
            return detail::standard_gamma(d.shape, rng) / d.rate;
        } else if constexpr (std::is_same_v<T, Beta>) {
            const double ga = detail::standard_gamma(d.a, rng);
            const double gb = detail::standard_gamma(d.b, rng);
            return ga / (ga + gb);
        } else if constexpr (std::is_same_v<T, Binomial>) {
            return static_cast<double>(detail::draw_binomial(d.n, d.p, rng));
        } else if constexpr (std::is_same_v<T, Poisson>) {
            return static_cast<double>(detail::draw_poisson(d.mean, rng));
        } else {
            return d.lo + (d.hi - d.lo) * rng.uniform();
        }
    });
}

/// F(x) for the continuous families; throws for binomial/poisson.
inline double cdf(const ScalarDistribution& dist, double x) {
    return dist.visit([x, &dist](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
            return normal_cdf((x - d.mean) / d.sd);
        } else if constexpr (std::is_same_v<T, Gamma>) {
            if (x <= 0.0) return 0.0;
            return gamma_p(d.shape, d.rate * x);
        } else if constexpr (std::is_same_v<T, Beta>) {
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            return beta_i(d.a, d.b, x);
        } else if constexpr (std::is_same_v<T, Uniform>) {
            if (x <= d.lo) return 0.0;
            if (x >= d.hi) return 1.0;
            return (x - d.lo) / (d.hi - d.lo);
        } else {
            throw std::domain_error(std::string("cdf: unsupported discrete family ") +
                                    dist.family_name());
        }
    });
}

/// F^-1(u) for the continuous families, u strictly inside (0, 1).
inline double quantile(const ScalarDistribution& dist, double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("quantile: u must be strictly inside (0,1), got " +
                                std::to_string(u));
    return dist.visit([u, &dist](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
            return d.mean + d.sd * normal_quantile(u);
        } else if constexpr (std::is_same_v<T, Gamma>) {
            return gamma_p_inverse(d.shape, u) / d.rate;
        } else if constexpr (std::is_same_v<T, Beta>) {
            return beta_i_inverse(d.a, d.b, u);
        } else if constexpr (std::is_same_v<T, Uniform>) {
            return d.lo + u * (d.hi - d.lo);
        } else {
            throw std::domain_error(
                std::string("quantile: unsupported discrete family ") +
                dist.family_name());
        }
    });
}

}  // namespace overrelax
