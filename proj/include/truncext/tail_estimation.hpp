#ifndef TRUNCEXT_TAIL_ESTIMATION_HPP
#define TRUNCEXT_TAIL_ESTIMATION_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "truncext/rng.hpp"
#include "truncext/sample.hpp"

namespace truncext {

/// (k, Hill X, Hill Y, truncated-data index) bundle from one estimation run.
struct TailIndexEstimate {
    std::size_t k = 0;
    double gamma_hat = 0.0;  // Hill estimate for the X margin
    double gamma2_hat = 0.0; // Hill estimate for the Y margin
    double gamma1_hat = 0.0; // truncation-corrected tail index
};

/// The single-fraction estimator has a pole when the Y-margin Hill value does
/// not exceed the X-margin one; callers typically retry with a smaller k.
class degenerate_fraction_error : public std::runtime_error {
  public:
    degenerate_fraction_error(std::size_t k, double gamma_hat, double gamma2_hat);

    std::size_t k() const { return k_; }
    double gamma_hat() const { return gamma_hat_; }
    double gamma2_hat() const { return gamma2_hat_; }

  private:
    std::size_t k_;
    double gamma_hat_;
    double gamma2_hat_;
};

/// Plug-in variance estimate turned out negative (possible under extreme
/// Monte-Carlo noise in the tail-copula functional); never silently clamped.
class negative_variance_error : public std::runtime_error {
  public:
    explicit negative_variance_error(double sigma2);
    double sigma2() const { return sigma2_; }

  private:
    double sigma2_;
};

struct ConfidenceBounds {
    double lcb = 0.0;
    double ucb = 0.0;
    double level = 0.0;
};

/// Full plug-in inference bundle behind a confidence interval.
struct InferenceReport {
    TailIndexEstimate estimate;
    double tau_hat = 0.0;
    double tau2_hat = 0.0;
    double lambda_hat = 0.0;
    double lambda2_hat = 0.0;
    double c_hat = 0.0;
    double c2_hat = 0.0;
    double delta_hat = 0.0;
    double delta_std_error = 0.0;
    double mu_hat = 0.0;
    double sigma2_hat = 0.0;
    ConfidenceBounds ci;
};

/// Hill estimator k^-1 sum_{i=1}^{k} log(V_{n-i+1:n} / V_{n-k:n}) on an
/// ascending-sorted positive sample.  Requires 1 <= k < n.
double hill(const std::vector<double>& sorted_values, std::size_t k);

/// Single-sample-fraction tail index for randomly right-truncated data.
/// Evaluates the ratio form directly from the top-k log spacings of both
/// margins and also reports the two Hill estimates.  Requires 1 < k < n.
/// Throws degenerate_fraction_error when the denominator is <= 0.
TailIndexEstimate truncated_tail_index(const TruncatedSample& sample, std::size_t k);

/// Empirical tail copula
///   R(s, t) = k^-1 #{i : X_i >= X_{n-[ks]:n}, Y_i >= Y_{n-[kt]:n}},
/// [.] = floor, with a floor of 1 on the order-statistic index.  Exact
/// count-based evaluation, O(n) per call.
double tail_copula_hat(const TruncatedSample& sample, std::size_t k, double s, double t);

/// Grid-backed evaluator for the empirical tail copula; same values as
/// tail_copula_hat on (0, 1]^2 but O(1) per query after an O(n + k^2) setup.
class EmpiricalTailCopula {
  public:
    EmpiricalTailCopula(const TruncatedSample& sample, std::size_t k);

    double operator()(double s, double t) const;
    std::size_t k() const { return k_; }

  private:
    std::size_t k_;
    std::vector<double> counts_; // (k+1) x (k+1) cumulative counts
};

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo estimate of the asymptotic-covariance functional
///   delta(R) = int int R(s,t)/(st) ds dt - int (R(s,1) - R(1,s)) ds + R(1,1)
/// over (0,1]^2, using mc_points uniform draws per integral with antithetic
/// pairing.  Each evaluation of R is clamped into the admissible envelope
/// [0, min(s, t)], which keeps the 1/(st)-weighted integral finite for
/// step-function estimates; the final value is clamped to [-4, 4].
MonteCarloEstimate delta_functional(const std::function<double(double, double)>& R,
                                    std::size_t mc_points, RngSeed seed);

/// Second-order parameter estimate by the moment-ratio method (tuning
/// exponent 0) at the internal fraction k_rho = min(floor(n^0.975), n-1),
/// clamped to [-10, -0.01].  Requires n >= 20 and a non-degenerate top.
double second_order_tau_hat(const std::vector<double>& sorted_values);

/// Plug-in estimate of the scaled second-order auxiliary term,
///   sqrt(k) tau (V_{n-2k:n} - 2^-g V_{n-k:n}) / (2^-g (2^-tau - 1) V_{n-k:n}),
/// with g = gamma_est.  Serves both margins.  Requires 2k < n.
double lambda_hat(const std::vector<double>& sorted_values, std::size_t k,
                  double gamma_est, double tau_est);

/// Runs the full plug-in pipeline at fraction k and returns the
/// (level x 100)% confidence bounds
///   gamma1_hat + k^{-1/2} (mu_hat -+/+ sigma_hat z) for the tail index.
/// tau_fixed overrides the estimated second-order parameter on both margins.
InferenceReport confidence_interval(const TruncatedSample& sample, std::size_t k,
                                    double level, std::size_t mc_points, RngSeed seed,
                                    std::optional<double> tau_fixed = std::nullopt);

} // namespace truncext

#endif
