#include "truncext/model.hpp"

#include <cmath>
#include <stdexcept>

#include "truncext/quadrature.hpp"

namespace truncext {

double burr_survival(double x, double delta, double g) {
    if (!(delta > 0.0) || !(g > 0.0)) {
        throw std::domain_error("burr_survival: delta and g must be positive");
    }
    if (!std::isfinite(x) || x < 0.0) {
        throw std::domain_error("burr_survival: x must be finite and nonnegative");
    }
    return std::pow(1.0 + std::pow(x, 1.0 / delta), -delta / g);
}

double burr_quantile(double u, double delta, double g) {
    if (!(delta > 0.0) || !(g > 0.0)) {
        throw std::domain_error("burr_quantile: delta and g must be positive");
    }
    if (!(u >= 0.0) || u >= 1.0) {
        throw std::domain_error("burr_quantile: u must lie in [0, 1)");
    }
    if (u == 0.0) {
        return 0.0;
    }
    return std::pow(std::pow(1.0 - u, -g / delta) - 1.0, delta);
}

BurrTruncationModel::BurrTruncationModel(double gamma1, double gamma2, double delta)
    : gamma1_(gamma1), gamma2_(gamma2), delta_(delta) {
    if (!(gamma1 > 0.0) || !(gamma2 > 0.0) || !(delta > 0.0)) {
        throw std::domain_error("BurrTruncationModel: parameters must be positive");
    }
    p_ = gamma2 / (gamma1 + gamma2);
    gamma_ = gamma1 * gamma2 / (gamma1 + gamma2);
    tau_ = -2.0 * gamma_ / delta;
    tau2_ = -gamma2 / delta;
    tau1_ = -gamma1 / delta;
}

BurrTruncationModel BurrTruncationModel::from_gammas(double gamma1, double gamma2,
                                                     double delta) {
    return BurrTruncationModel(gamma1, gamma2, delta);
}

BurrTruncationModel BurrTruncationModel::from_truncation_probability(double p,
                                                                     double gamma1,
                                                                     double delta) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::domain_error("from_truncation_probability: p must lie in (0, 1)");
    }
    const double gamma2 = p * gamma1 / (1.0 - p);
    return BurrTruncationModel(gamma1, gamma2, delta);
}

double BurrTruncationModel::observed_survival_x(double x) const {
    // With a common Burr base, p^-1 int_x^inf S_Y dF_X collapses to
    // S_X(x)^{gamma1/gamma}, i.e. the observed margin is Burr with index gamma.
    return burr_survival(x, delta_, gamma_);
}

double BurrTruncationModel::observed_survival_y(double y) const {
    const double s = survival_y(y);
    return (s - (1.0 - p_) * std::pow(s, (gamma1_ + gamma2_) / gamma1_)) / p_;
}

double BurrTruncationModel::observed_quantile_x(double u) const {
    return burr_quantile(u, delta_, gamma_);
}

double BurrTruncationModel::overlap(double x) const {
    return (1.0 - survival_x(x)) * survival_y(x) / p_;
}

double BurrTruncationModel::lambda_integral(double x) const {
    const double s0 = observed_survival_x(x);
    if (!(s0 < 1.0)) {
        throw std::domain_error("lambda_integral: x must be interior (S(x) < 1)");
    }
    if (s0 <= 0.0) {
        return 0.0;
    }
    // In survival scale s = S_obs(z), dF/C becomes p ds / (s^q - s) with
    // q = gamma/gamma2.  The further substitution s = v^m flattens the
    // endpoint singularity s^-q at the origin.
    const double q = gamma_ / gamma2_;
    if (!(q < 1.0)) {
        throw std::domain_error("lambda_integral: requires gamma < gamma2");
    }
    const int m = static_cast<int>(std::ceil(1.0 / (1.0 - q))) + 1;
    const double upper = std::pow(s0, 1.0 / m);
    const double exponent = m - 1 - m * q; // >= 1 by choice of m
    auto integrand = [&](double v) {
        if (v <= 0.0) {
            return 0.0;
        }
        return p_ * m * std::pow(v, exponent) / (1.0 - std::pow(v, m * (1.0 - q)));
    };
    return adaptive_simpson(integrand, 0.0, upper, 1e-10);
}

TruncatedSample sample_truncated_pairs(const BurrTruncationModel& model, std::size_t N,
                                       RngSeed seed) {
    if (N < 1) {
        throw std::invalid_argument("sample_truncated_pairs: N must be >= 1");
    }
    Rng rng(seed);
    std::vector<std::pair<double, double>> kept;
    kept.reserve(static_cast<std::size_t>(static_cast<double>(N) * model.p() * 1.1) + 16);
    for (std::size_t i = 0; i < N; ++i) {
        const double x = model.quantile_x(rng.uniform01());
        const double y = model.quantile_y(rng.uniform01());
        if (x <= y) {
            kept.emplace_back(x, y);
        }
    }
    return TruncatedSample::from_validated(std::move(kept));
}

double true_premium(double gamma1, const std::function<double(double)>& survival,
                    double u) {
    if (!(gamma1 > 0.0)) {
        throw std::domain_error("true_premium: gamma1 must be positive");
    }
    if (gamma1 >= 1.0) {
        throw std::domain_error("true_premium: gamma1 >= 1 implies an infinite mean");
    }
    if (!(u > 0.0)) {
        throw std::domain_error("true_premium: retention u must be positive");
    }
    // x = u v^-m maps [u, inf) onto (0, 1]; m is chosen large enough that the
    // integrand vanishes at v = 0 given the x^{-1/gamma1} tail.
    const int m = static_cast<int>(std::ceil(gamma1 / (1.0 - gamma1))) + 1;
    auto integrand = [&](double v) {
        if (v <= 0.0) {
            return 0.0;
        }
        return u * m * survival(u * std::pow(v, -m)) * std::pow(v, -m - 1);
    };
    return adaptive_simpson(integrand, 0.0, 1.0, 1e-8);
}

double pareto_premium(double gamma1, double u) {
    if (!(gamma1 > 0.0) || gamma1 >= 1.0) {
        throw std::domain_error("pareto_premium: gamma1 must lie in (0, 1)");
    }
    if (!(u > 0.0)) {
        throw std::domain_error("pareto_premium: retention u must be positive");
    }
    return gamma1 / (1.0 - gamma1) * std::pow(u, 1.0 - 1.0 / gamma1);
}

double lemma2_limit_check(const BurrTruncationModel& model, double t) {
    if (!(model.gamma1() < model.gamma2())) {
        throw std::domain_error("lemma2_limit_check: requires gamma1 < gamma2");
    }
    if (!(t > 1.0)) {
        throw std::domain_error("lemma2_limit_check: t must exceed 1");
    }
    const double u_t = model.observed_quantile_x(1.0 - 1.0 / t);
    return t * model.lambda_integral(u_t) * model.overlap(u_t);
}

} // namespace truncext
