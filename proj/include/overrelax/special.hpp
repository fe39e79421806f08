#pragma once

// Special functions backing the distribution CDFs and quantiles: Gaussian
// cdf/quantile, regularized incomplete gamma and beta with their inverses.
// Accuracy targets: ~1e-14 for the forward functions, |F(F^-1(u)) - u| below
// 1e-12 for the inverses over u in [1e-12, 1 - 1e-12].

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace overrelax {

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

inline double normal_pdf(double x) {
    return 0.39894228040143267794 * std::exp(-0.5 * x * x);
}

/// Inverse of the standard Gaussian cdf (Wichura's PPND16 rational
/// approximations, three branches).  p must lie strictly inside (0, 1).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile: p must be in (0,1), got " +
                                std::to_string(p));
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                      2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                    3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                  4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
                (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                      1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                    6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                  2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                      1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                    2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                  5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
                (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                      1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                    1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                  5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -value : value;
}

namespace detail {

constexpr int kSeriesMaxIter = 20000;
constexpr double kSeriesEps = 1.0e-16;
constexpr double kLentzTiny = 1.0e-300;

// Lower regularized incomplete gamma by power series; valid for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 0; n < kSeriesMaxIter; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kSeriesEps)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_p_series: no convergence");
}

// Upper regularized incomplete gamma by continued fraction; for x >= a + 1.
inline double gamma_q_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kLentzTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kSeriesMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kLentzTiny) d = kLentzTiny;
        c = b + an / c;
        if (std::fabs(c) < kLentzTiny) c = kLentzTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kSeriesEps)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_q_continued_fraction: no convergence");
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
inline double gamma_p(double a, double x) {
    if (!(a > 0.0))
        throw std::domain_error("gamma_p: shape must be positive");
    if (x < 0.0)
        throw std::domain_error("gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_continued_fraction(a, x);
}

/// Inverse of gamma_p in x: returns x with P(a, x) = p.  Start from a
/// Wilson-Hilferty guess, polish with Newton, and keep a hard bracket so a
/// wild step can never escape.
inline double gamma_p_inverse(double a, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("gamma_p_inverse: p must be in (0,1)");
    if (!(a > 0.0))
        throw std::domain_error("gamma_p_inverse: shape must be positive");

    double x;
    if (a > 1.0) {
        const double z = normal_quantile(p);
        const double c = 1.0 / (9.0 * a);
        const double t = 1.0 - c + z * std::sqrt(c);
        x = a * t * t * t;
        if (x <= 0.0) x = 1e-8 * a;
    } else {
        const double t = 1.0 - a * (0.253 + 0.12 * a);
        if (p < t)
            x = std::pow(p / t, 1.0 / a);
        else
            x = 1.0 - std::log((1.0 - p) / (1.0 - t));
    }

    // Bracket the root: P is increasing in x.
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    const double gln = std::lgamma(a);
    for (int it = 0; it < 200; ++it) {
        const double f = gamma_p(a, x) - p;
        if (std::fabs(f) < 1.0e-14) break;
        if (f > 0.0) hi = x; else lo = x;
        const double logpdf = (a - 1.0) * std::log(x) - x - gln;
        double step;
        if (logpdf > -690.0) {
            step = f / std::exp(logpdf);
        } else {
            step = std::numeric_limits<double>::infinity();  // force bisection
        }
        double next = x - step;
        if (!(next > lo && (next < hi))) {
            next = std::isinf(hi) ? 2.0 * x + 1.0 : 0.5 * (lo + hi);
        }
        if (next == x) break;
        x = next;
    }
    return x;
}

namespace detail {

// Continued fraction for the regularized incomplete beta (Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kLentzTiny) d = kLentzTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kSeriesMaxIter; ++m) {
        const double dm = static_cast<double>(m);
        const double m2 = 2.0 * dm;
        double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kLentzTiny) d = kLentzTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kLentzTiny) c = kLentzTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kLentzTiny) d = kLentzTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kLentzTiny) c = kLentzTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kSeriesEps) return h;
    }
    throw std::runtime_error("beta_continued_fraction: no convergence");
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b) for x in [0, 1].
inline double beta_i(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0))
        throw std::domain_error("beta_i: shapes must be positive");
    if (x < 0.0 || x > 1.0)
        throw std::domain_error("beta_i: x must be in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(lbt);
    if (x < (a + 1.0) / (a + b + 2.0))
        return bt * detail::beta_continued_fraction(a, b, x) / a;
    return 1.0 - bt * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// Inverse of beta_i in x.
inline double beta_i_inverse(double a, double b, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("beta_i_inverse: p must be in (0,1)");
    if (!(a > 0.0 && b > 0.0))
        throw std::domain_error("beta_i_inverse: shapes must be positive");

    double x;
    if (a >= 1.0 && b >= 1.0) {
        const double z = normal_quantile(p);
        const double al = (z * z - 3.0) / 6.0;
        const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
        const double w = z * std::sqrt(al + h) / h -
                         (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) *
                             (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
        x = a / (a + b * std::exp(2.0 * w));
    } else {
        const double lna = std::log(a / (a + b));
        const double lnb = std::log(b / (a + b));
        const double t = std::exp(a * lna) / a;
        const double u = std::exp(b * lnb) / b;
        const double w = t + u;
        if (p < t / w)
            x = std::pow(a * w * p, 1.0 / a);
        else
            x = 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
    }
    x = std::fmin(std::fmax(x, 1e-300), 1.0 - 1e-16);

    double lo = 0.0, hi = 1.0;
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    for (int it = 0; it < 200; ++it) {
        const double f = beta_i(a, b, x) - p;
        if (std::fabs(f) < 1.0e-14) break;
        if (f > 0.0) hi = x; else lo = x;
        const double logpdf =
            (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lbeta;
        double next;
        if (logpdf > -690.0) {
            next = x - f / std::exp(logpdf);
        } else {
            next = 0.5 * (lo + hi);
        }
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
    }
    return x;
}

}  // namespace overrelax
