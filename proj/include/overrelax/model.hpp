#pragma once

// Target distributions expressed through their full conditionals
// pi(x_i | x_j, j != i).  A model only has to say how many components the
// state has and what the conditional of component i is; the samplers do
// the rest.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "overrelax/distribution.hpp"
#include "overrelax/rng.hpp"

namespace overrelax {

using StateVector = std::vector<double>;

template <typename M>
concept conditional_model = requires(const M& m, std::size_t i, const StateVector& x) {
    { m.dimension() } -> std::convertible_to<std::size_t>;
    { m.full_conditional(i, x) } -> std::convertible_to<ScalarDistribution>;
};

/// Conditional of one coordinate of a unit-variance bivariate Gaussian with
/// correlation rho, given the other coordinate.
inline ScalarDistribution bivariate_conditional(double rho, double other) {
    if (!(std::fabs(rho) < 1.0))
        throw std::invalid_argument("bivariate_conditional: |rho| must be < 1");
    return Gaussian{rho * other, std::sqrt(1.0 - rho * rho)};
}

/// Conditional of x1 under pi(x1,x2) proportional to exp(-(1+x1^2)(1+x2^2)):
/// Gaussian with mean 0 and variance 1 / (2(1+other^2)).
inline ScalarDistribution multiquadratic_conditional(double other) {
    if (!std::isfinite(other))
        throw std::invalid_argument("multiquadratic_conditional: other must be finite");
    return Gaussian{0.0, 1.0 / std::sqrt(2.0 * (1.0 + other * other))};
}

class BivariateGaussianModel {
public:
    explicit BivariateGaussianModel(double rho) : rho_(rho) {
        if (!(std::fabs(rho) < 1.0))
            throw std::invalid_argument("BivariateGaussianModel: |rho| must be < 1");
    }

    std::size_t dimension() const { return 2; }
    double rho() const { return rho_; }

    ScalarDistribution full_conditional(std::size_t i, const StateVector& x) const {
        check_index(i, x);
        return bivariate_conditional(rho_, x[1 - i]);
    }

    double log_density(const StateVector& x) const {
        check_index(0, x);
        return -0.5 * (x[0] * x[0] - 2.0 * rho_ * x[0] * x[1] + x[1] * x[1]) /
               (1.0 - rho_ * rho_);
    }

private:
    void check_index(std::size_t i, const StateVector& x) const {
        if (i >= 2 || x.size() != 2)
            throw std::invalid_argument("BivariateGaussianModel: dimension is 2");
    }
    double rho_;
};

class MultiquadraticModel {
public:
    std::size_t dimension() const { return 2; }

    ScalarDistribution full_conditional(std::size_t i, const StateVector& x) const {
        if (i >= 2 || x.size() != 2)
            throw std::invalid_argument("MultiquadraticModel: dimension is 2");
        return multiquadratic_conditional(x[1 - i]);
    }

    double log_density(const StateVector& x) const {
        return -(1.0 + x[0] * x[0]) * (1.0 + x[1] * x[1]);
    }
};

/// One-component model whose conditional never changes.  Useful for studying
/// a kernel against a known stationary target.
class FixedConditionalModel {
public:
    explicit FixedConditionalModel(ScalarDistribution dist) : dist_(std::move(dist)) {}

    std::size_t dimension() const { return 1; }

    ScalarDistribution full_conditional(std::size_t i, const StateVector&) const {
        if (i != 0)
            throw std::invalid_argument("FixedConditionalModel: dimension is 1");
        return dist_;
    }

private:
    ScalarDistribution dist_;
};

/// Synthetic observations for the gamma-Poisson hierarchy: p counts s_i
/// taken over exposures t_i = i/p.
struct PumpDataset {
    std::vector<double> t;
    std::vector<long> s;
    double true_tau = std::numeric_limits<double>::quiet_NaN();
    double gamma_shape = std::numeric_limits<double>::quiet_NaN();
    double beta_true = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t seed = 0;
};

/// Hierarchical gamma-Poisson model.  State layout is (lambda_1..lambda_p,
/// tau) where tau = 1/beta is the precision-style hyperparameter; all
/// components are positive.  Conditionals:
///   tau      | rest ~ Gamma(p*gamma_shape + hyper_gamma, hyper_delta + sum lambda)
///   lambda_i | rest ~ Gamma(s_i + gamma_shape, t_i + tau)
class PumpModel {
public:
    PumpModel(double gamma_shape, double hyper_gamma, double hyper_delta,
              std::vector<double> t, std::vector<long> s)
        : gamma_shape_(gamma_shape),
          hyper_gamma_(hyper_gamma),
          hyper_delta_(hyper_delta),
          t_(std::move(t)),
          s_(std::move(s)) {
        if (!(gamma_shape_ > 0.0))
            throw std::invalid_argument("PumpModel: gamma_shape must be > 0");
        if (!(hyper_gamma_ > 0.0) || !(hyper_delta_ > 0.0))
            throw std::invalid_argument("PumpModel: hyper_gamma and hyper_delta must be > 0");
        if (t_.empty() || t_.size() != s_.size())
            throw std::invalid_argument("PumpModel: t and s must be nonempty, equal length");
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (!(t_[i] > 0.0))
                throw std::invalid_argument("PumpModel: all t_i must be > 0");
            if (s_[i] < 0)
                throw std::invalid_argument("PumpModel: all s_i must be >= 0");
        }
    }

    static PumpModel from_dataset(double gamma_shape, double hyper_gamma,
                                  double hyper_delta, const PumpDataset& data) {
        return PumpModel(gamma_shape, hyper_gamma, hyper_delta, data.t, data.s);
    }

    std::size_t count_groups() const { return t_.size(); }
    std::size_t dimension() const { return t_.size() + 1; }
    double gamma_shape() const { return gamma_shape_; }
    double hyper_gamma() const { return hyper_gamma_; }
    double hyper_delta() const { return hyper_delta_; }
    double observation_time(std::size_t i) const { return t_.at(i); }
    long count(std::size_t i) const { return s_.at(i); }

    ScalarDistribution full_conditional(std::size_t i, const StateVector& x) const {
        const std::size_t p = count_groups();
        if (x.size() != p + 1)
            throw std::invalid_argument("PumpModel: state must have p+1 components");
        if (i == p) {
            return tau_conditional(
                StateVector(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p)));
        }
        if (i > p)
            throw std::invalid_argument("PumpModel: component index out of range");
        return lambda_conditional(i, x[p]);
    }

    ScalarDistribution tau_conditional(const StateVector& lambdas) const {
        if (lambdas.size() != count_groups())
            throw std::invalid_argument("PumpModel: expected p lambda values");
        double sum = 0.0;
        for (double lam : lambdas) {
            if (!(lam > 0.0))
                throw std::invalid_argument("PumpModel: lambdas must be positive");
            sum += lam;
        }
        return Gamma{static_cast<double>(count_groups()) * gamma_shape_ + hyper_gamma_,
                     hyper_delta_ + sum};
    }

    ScalarDistribution lambda_conditional(std::size_t i, double tau) const {
        if (i >= count_groups())
            throw std::invalid_argument("PumpModel: lambda index out of range");
        if (!(tau > 0.0))
            throw std::invalid_argument("PumpModel: tau must be positive");
        return Gamma{static_cast<double>(s_[i]) + gamma_shape_, t_[i] + tau};
    }

    /// Log joint density of (lambda_1..p, tau), up to an additive constant.
    double log_density(const StateVector& x) const {
        const std::size_t p = count_groups();
        if (x.size() != p + 1)
            throw std::invalid_argument("PumpModel: state must have p+1 components");
        const double tau = x[p];
        if (!(tau > 0.0)) return -std::numeric_limits<double>::infinity();
        double lp = (static_cast<double>(p) * gamma_shape_ + hyper_gamma_ - 1.0) *
                        std::log(tau) -
                    hyper_delta_ * tau;
        for (std::size_t i = 0; i < p; ++i) {
            const double lam = x[i];
            if (!(lam > 0.0)) return -std::numeric_limits<double>::infinity();
            lp += (static_cast<double>(s_[i]) + gamma_shape_ - 1.0) * std::log(lam) -
                  lam * (t_[i] + tau);
        }
        return lp;
    }

private:
    double gamma_shape_;
    double hyper_gamma_;
    double hyper_delta_;
    std::vector<double> t_;
    std::vector<long> s_;
};

/// The free-function forms of the pump conditionals.
inline ScalarDistribution pump_tau_conditional(const PumpModel& model,
                                               const StateVector& lambdas) {
    return model.tau_conditional(lambdas);
}

inline ScalarDistribution pump_lambda_conditional(const PumpModel& model,
                                                  std::size_t i, double tau) {
    return model.lambda_conditional(i, tau);
}

/// Synthetic data: t_i = i/p, lambda_i ~ Gamma(shape=gamma_shape,
/// scale=beta_true), s_i ~ Poisson(lambda_i * t_i).  Deterministic in seed.
inline PumpDataset generate_pump_data(std::size_t p, double gamma_shape,
                                      double beta_true, std::uint64_t seed) {
    if (p < 1)
        throw std::invalid_argument("generate_pump_data: p must be >= 1");
    if (!(gamma_shape > 0.0) || !(beta_true > 0.0))
        throw std::invalid_argument(
            "generate_pump_data: gamma_shape and beta_true must be > 0");
    PumpDataset data;
    data.t.resize(p);
    data.s.resize(p);
    data.true_tau = 1.0 / beta_true;
    data.gamma_shape = gamma_shape;
    data.beta_true = beta_true;
    data.seed = seed;
    RngStream rng(seed);
    // scale = beta_true, so rate = 1/beta_true
    const ScalarDistribution lambda_prior{Gamma{gamma_shape, 1.0 / beta_true}};
    for (std::size_t i = 0; i < p; ++i) {
        data.t[i] = static_cast<double>(i + 1) / static_cast<double>(p);
        const double lambda = draw(lambda_prior, rng);
        data.s[i] = static_cast<long>(
            draw(ScalarDistribution{Poisson{lambda * data.t[i]}}, rng));
    }
    return data;
}

}  // namespace overrelax
