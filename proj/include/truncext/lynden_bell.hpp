#ifndef TRUNCEXT_LYNDEN_BELL_HPP
#define TRUNCEXT_LYNDEN_BELL_HPP

#include <cstddef>
#include <functional>
#include <optional>

#include "truncext/rng.hpp"
#include "truncext/sample.hpp"
#include "truncext/tail_estimation.hpp"

namespace truncext {

/// Excess-of-loss premium estimate at retention u from a truncated sample.
struct PremiumEstimate {
    double u = 0.0;
    std::size_t k = 0;
    double pi_hat = 0.0;
    /// Lynden-Bell tail of the underlying df at the pivot order statistic.
    double lb_survival_at_pivot = 0.0;
    /// Set when some product factor had n C_n = 1, exhausting the survival mass.
    bool survival_mass_exhausted = false;
    std::optional<ConfidenceBounds> ci;
};

/// Cumulative-hazard sum Lambda_n(x) = sum_{X_i > x} 1 / (n C_n(X_i)).
double lambda_n(const TruncatedSample& sample, double x);

/// Lynden-Bell product-limit tail 1 - F_n(x) of the underlying df,
///   F_n(x) = prod_{X_{i:n} > x} (1 - 1/(n C_n(X_{i:n}))).
/// With tied x-values the product form over-counts, so the always-defined
/// exponential form exp(-Lambda_n) is used instead.
double lynden_bell_survival(const TruncatedSample& sample, double x);

/// Lynden-Bell tail at the pivot X_{n-k:n}: the k-term product over the top
/// order statistics (exponential form under ties).
double lynden_bell_tail_at_pivot(const TruncatedSample& sample, std::size_t k);

/// Weissman-type tail extrapolation for truncated data,
///   (x / X_{n-k:n})^{-1/gamma1_hat} * (1 - F_n(X_{n-k:n})), for x >= pivot.
double weissman_tail(const TruncatedSample& sample, std::size_t k, double gamma1_hat,
                     double x);

/// Premium estimator
///   gamma1_hat/(1-gamma1_hat) X_{n-k:n} (u/X_{n-k:n})^{1-1/gamma1_hat}
///     * (1 - F_n(X_{n-k:n})).
/// Requires 0 < gamma1_hat < 1 (finite-mean estimate) and u > 0.
PremiumEstimate premium_estimate(const TruncatedSample& sample, std::size_t k, double u,
                                 double gamma1_hat);

/// Limiting variance gamma2^2 / (gamma2^2 - gamma1^2) of the normalized
/// Lynden-Bell tail ratio at the pivot.  Requires gamma1 < gamma2.
double theorem2_variance(double gamma1, double gamma2);

/// Asymptotic variance of the normalized premium estimator:
///   sigma*^2 = zeta^2 sigma^2
///            + gamma1^2 gamma2^2 / ((gamma2^2 - gamma1^2)(1 - gamma1)^2)
///            + 2 gamma gamma1 zeta delta* / (1 - gamma1),
/// zeta = ((1-gamma1) log a + gamma1) / (gamma1 (1-gamma1)^2), with sigma^2
/// and the three R-integrals of delta* evaluated by seeded Monte Carlo
/// (the s^{-gamma/gamma2-1} weight is importance-sampled).  The returned
/// std_error propagates the Monte Carlo uncertainty.
MonteCarloEstimate theorem3_sigma_star(double gamma1, double gamma2, double a,
                                       const std::function<double(double, double)>& R,
                                       std::size_t mc_points, RngSeed seed);

struct PremiumCiOptions {
    double level = 0.95;
    std::size_t mc_points = 100000;
    RngSeed seed;
    /// Optional (lambda_star, tau1) pair for the asymptotic-bias term; when
    /// absent the bias is taken as 0.
    std::optional<std::pair<double, double>> bias_term;
};

/// Premium estimate with a confidence interval built from the plug-ins
/// gamma1_hat, gamma2_hat, a = u / X_{n-k:n}, the empirical tail copula, and
/// the empirical normalizer (u/X_{n-k:n})^{1-1/gamma1_hat} X_{n-k:n}
/// (1 - F_n(X_{n-k:n})).
PremiumEstimate premium_confidence_interval(const TruncatedSample& sample,
                                            std::size_t k, double u, double gamma1_hat,
                                            double gamma2_hat,
                                            const PremiumCiOptions& opts);

} // namespace truncext

#endif
