#ifndef TRUNCEXT_MODEL_HPP
#define TRUNCEXT_MODEL_HPP

#include <cstddef>
#include <functional>

#include "truncext/rng.hpp"
#include "truncext/sample.hpp"

namespace truncext {

/// Burr survival function (1 + x^{1/delta})^{-delta/g}.
double burr_survival(double x, double delta, double g);

/// Burr quantile ((1 - u)^{-g/delta} - 1)^delta, the inverse of
/// 1 - burr_survival.  Requires 0 <= u < 1.
double burr_quantile(double u, double delta, double g);

/// Generative truncation model: X with tail index gamma1 is right-truncated by
/// an independent Y with tail index gamma2, both Burr with common shape delta.
class BurrTruncationModel {
  public:
    static BurrTruncationModel from_gammas(double gamma1, double gamma2, double delta);

    /// Solves p = gamma2 / (gamma1 + gamma2) for gamma2.  Requires p in (0,1).
    static BurrTruncationModel from_truncation_probability(double p, double gamma1,
                                                           double delta);

    double gamma1() const { return gamma1_; }
    double gamma2() const { return gamma2_; }
    double delta() const { return delta_; }
    /// Observation probability p = P(X <= Y) = gamma2 / (gamma1 + gamma2).
    double p() const { return p_; }
    /// Tail index of the observed X margin, gamma1 * gamma2 / (gamma1 + gamma2).
    double gamma() const { return gamma_; }
    double tau() const { return tau_; }
    double tau2() const { return tau2_; }
    double tau1() const { return tau1_; }

    /// True when gamma1 < gamma2, required for the premium estimator and the
    /// Lynden-Bell asymptotics (not for point estimation of gamma1).
    bool truncation_lighter_than_target() const { return gamma1_ < gamma2_; }

    /// Underlying marginal survival functions.
    double survival_x(double x) const { return burr_survival(x, delta_, gamma1_); }
    double survival_y(double y) const { return burr_survival(y, delta_, gamma2_); }
    double quantile_x(double u) const { return burr_quantile(u, delta_, gamma1_); }
    double quantile_y(double u) const { return burr_quantile(u, delta_, gamma2_); }

    /// Observed-data marginals.  The common Burr base makes them exact:
    /// the observed X margin is Burr with index gamma, and the observed
    /// Y tail is p^-1 s (1 - (1-p) s^{gamma2/gamma1}) at s = survival_y(y).
    double observed_survival_x(double x) const;
    double observed_survival_y(double y) const;
    /// Quantile of the observed X margin (inverse of 1 - observed_survival_x).
    double observed_quantile_x(double u) const;

    /// Overlap probability C(x) = P(X <= x <= Y) = p^-1 F_X(x) S_Y(x),
    /// in terms of the underlying cdf/survival.
    double overlap(double x) const;

    /// Cumulative hazard-type integral Lambda(x) = int_x^inf dF(z)/C(z) of the
    /// observed margin, evaluated by adaptive quadrature after the substitution
    /// s = observed_survival_x(z) (which removes the infinite upper limit).
    double lambda_integral(double x) const;

  private:
    BurrTruncationModel(double gamma1, double gamma2, double delta);

    double gamma1_, gamma2_, delta_;
    double p_, gamma_, tau_, tau2_, tau1_;
};

/// Draws N independent (X, Y) pairs by inverse transform and keeps those with
/// x <= y.  The returned size is Binomial(N, p); deterministic given the seed.
TruncatedSample sample_truncated_pairs(const BurrTruncationModel& model, std::size_t N,
                                       RngSeed seed);

/// Net premium of the layer above retention u, Pi(u) = int_u^inf survival(x) dx,
/// by adaptive quadrature (relative tolerance 1e-8).  gamma1 is the tail index
/// of the supplied survival function and must be < 1 for the integral to exist.
double true_premium(double gamma1, const std::function<double(double)>& survival,
                    double u);

/// Closed form of the premium for the exact Pareto tail x^{-1/gamma1}:
/// gamma1 / (1 - gamma1) * u^{1 - 1/gamma1}.
double pareto_premium(double gamma1, double u);

/// Evaluates t * Lambda(U(t)) * C(U(t)), which approaches gamma1 / gamma for
/// large t.  Requires gamma1 < gamma2.
double lemma2_limit_check(const BurrTruncationModel& model, double t);

} // namespace truncext

#endif
