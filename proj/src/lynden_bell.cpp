#include "truncext/lynden_bell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "truncext/stats.hpp"

namespace truncext {

namespace {

bool has_x_ties(const TruncatedSample& sample) {
    const auto& xs = sample.x_sorted();
    return std::adjacent_find(xs.begin(), xs.end()) != xs.end();
}

// Count n C_n(x) as an exact integer.
std::size_t overlap_count(const TruncatedSample& sample, double x) {
    return static_cast<std::size_t>(
        std::llround(sample.c_n(x) * static_cast<double>(sample.size())));
}

struct TailProduct {
    double value = 1.0;
    bool exhausted = false; // some factor had n C_n = 1
};

// Product (or exp-sum under x-ties) of (1 - 1/(n C_n)) over the top m order
// statistics of the X margin.
TailProduct top_product(const TruncatedSample& sample, std::size_t m) {
    const std::size_t n = sample.size();
    const auto& xs = sample.x_sorted();
    const bool ties = has_x_ties(sample);
    TailProduct out;
    double log_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double xi = xs[n - 1 - i];
        const std::size_t cnt = overlap_count(sample, xi);
        if (cnt <= 1) {
            out.exhausted = true;
        }
        if (ties) {
            log_sum += 1.0 / static_cast<double>(cnt);
        } else {
            out.value *= 1.0 - 1.0 / static_cast<double>(cnt);
        }
    }
    if (ties) {
        out.value = std::exp(-log_sum);
    }
    return out;
}

} // namespace

double lambda_n(const TruncatedSample& sample, double x) {
    if (sample.empty()) {
        throw std::invalid_argument("lambda_n: empty sample");
    }
    if (!(x > 0.0)) {
        throw std::invalid_argument("lambda_n: x must be positive");
    }
    const auto& xs = sample.x_sorted();
    double sum = 0.0;
    for (auto it = xs.rbegin(); it != xs.rend() && *it > x; ++it) {
        sum += 1.0 / static_cast<double>(overlap_count(sample, *it));
    }
    return sum;
}

double lynden_bell_survival(const TruncatedSample& sample, double x) {
    if (sample.empty()) {
        throw std::invalid_argument("lynden_bell_survival: empty sample");
    }
    if (!(x > 0.0)) {
        throw std::invalid_argument("lynden_bell_survival: x must be positive");
    }
    if (has_x_ties(sample)) {
        return 1.0 - std::exp(-lambda_n(sample, x));
    }
    const auto& xs = sample.x_sorted();
    double prod = 1.0;
    for (auto it = xs.rbegin(); it != xs.rend() && *it > x; ++it) {
        prod *= 1.0 - 1.0 / static_cast<double>(overlap_count(sample, *it));
    }
    return 1.0 - prod;
}

double lynden_bell_tail_at_pivot(const TruncatedSample& sample, std::size_t k) {
    const std::size_t n = sample.size();
    if (k < 1 || k >= n) {
        throw std::invalid_argument("lynden_bell_tail_at_pivot: need 1 <= k < n");
    }
    return 1.0 - top_product(sample, k).value;
}

double weissman_tail(const TruncatedSample& sample, std::size_t k, double gamma1_hat,
                     double x) {
    const std::size_t n = sample.size();
    if (k < 1 || k >= n) {
        throw std::invalid_argument("weissman_tail: need 1 <= k < n");
    }
    if (!(gamma1_hat > 0.0)) {
        throw std::invalid_argument("weissman_tail: gamma1_hat must be positive");
    }
    const double pivot = sample.order_stat(Margin::X, n - k);
    if (!(x >= pivot)) {
        throw std::invalid_argument(
            "weissman_tail: x must lie at or above the pivot order statistic");
    }
    return std::pow(x / pivot, -1.0 / gamma1_hat) *
           lynden_bell_tail_at_pivot(sample, k);
}

PremiumEstimate premium_estimate(const TruncatedSample& sample, std::size_t k, double u,
                                 double gamma1_hat) {
    const std::size_t n = sample.size();
    if (k < 1 || k >= n) {
        throw std::invalid_argument("premium_estimate: need 1 <= k < n");
    }
    if (!(u > 0.0)) {
        throw std::invalid_argument("premium_estimate: retention u must be positive");
    }
    if (!(gamma1_hat > 0.0 && gamma1_hat < 1.0)) {
        throw std::invalid_argument(
            "premium_estimate: gamma1_hat must lie in (0, 1) for a finite mean");
    }
    const double pivot = sample.order_stat(Margin::X, n - k);
    const TailProduct prod = top_product(sample, k);

    PremiumEstimate out;
    out.u = u;
    out.k = k;
    out.lb_survival_at_pivot = 1.0 - prod.value;
    out.survival_mass_exhausted = prod.exhausted;
    out.pi_hat = gamma1_hat / (1.0 - gamma1_hat) * pivot *
                 std::pow(u / pivot, 1.0 - 1.0 / gamma1_hat) * (1.0 - prod.value);
    return out;
}

double theorem2_variance(double gamma1, double gamma2) {
    if (!(gamma1 > 0.0) || !(gamma2 > gamma1)) {
        throw std::invalid_argument("theorem2_variance: need 0 < gamma1 < gamma2");
    }
    return gamma2 * gamma2 / (gamma2 * gamma2 - gamma1 * gamma1);
}

namespace {

// Clamp a tail-copula evaluation into the admissible envelope [0, min(s, t)].
double admissible(const std::function<double(double, double)>& R, double s, double t) {
    return std::clamp(R(s, t), 0.0, std::min(s, t));
}

} // namespace

MonteCarloEstimate theorem3_sigma_star(double gamma1, double gamma2, double a,
                                       const std::function<double(double, double)>& R,
                                       std::size_t mc_points, RngSeed seed) {
    if (!(gamma1 > 0.0 && gamma1 < 1.0)) {
        throw std::invalid_argument("theorem3_sigma_star: gamma1 must lie in (0, 1)");
    }
    if (!(gamma2 > gamma1)) {
        throw std::invalid_argument("theorem3_sigma_star: need gamma1 < gamma2");
    }
    if (!(a > 0.0)) {
        throw std::invalid_argument("theorem3_sigma_star: need a > 0");
    }
    if (mc_points < 2) {
        throw std::invalid_argument("theorem3_sigma_star: need mc_points >= 2");
    }
    const double gamma = gamma1 * gamma2 / (gamma1 + gamma2);
    const double c = gamma1 * gamma1 / gamma;
    const double c2 = gamma1 * gamma1 / gamma2;
    const double q = gamma / gamma2; // < 1/2 since gamma1 < gamma2

    const MonteCarloEstimate delta =
        delta_functional(R, mc_points, derive_stream(seed, 0));
    const double sigma2 = 2.0 * c * c + 2.0 * c2 * c2 - 2.0 * c * c2 * delta.value;

    // Three Monte-Carlo integrals of the tail copula.  The s^{-q-1} weight is
    // importance-sampled with density (1-q) s^{-q} (s = u^{1/(1-q)}); the
    // double integral additionally samples t with density t^{-1/2}/2 (t = u^2)
    // to keep the estimator variance finite near the origin.
    const std::size_t draws = mc_points;
    Rng rng_a(derive_stream(seed, 1));
    Rng rng_b(derive_stream(seed, 2));
    Rng rng_c(derive_stream(seed, 3));
    double sum_a = 0.0, sq_a = 0.0;
    double sum_b = 0.0, sq_b = 0.0;
    double sum_c = 0.0, sq_c = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const double t1 = rng_a.uniform01();
        const double va = admissible(R, 1.0, t1) / t1;
        sum_a += va;
        sq_a += va * va;

        const double s2 = std::pow(rng_b.uniform01(), 1.0 / (1.0 - q));
        const double vb = admissible(R, s2, 1.0) / ((1.0 - q) * s2);
        sum_b += vb;
        sq_b += vb * vb;

        const double s3 = std::pow(rng_c.uniform01(), 1.0 / (1.0 - q));
        const double u3 = rng_c.uniform01();
        const double t3 = u3 * u3;
        const double vc =
            2.0 * admissible(R, s3, t3) / ((1.0 - q) * s3 * std::sqrt(t3));
        sum_c += vc;
        sq_c += vc * vc;
    }
    const double nd = static_cast<double>(draws);
    const double int_a = sum_a / nd;
    const double int_b = sum_b / nd;
    const double int_c = sum_c / nd;
    const double se_a = std::sqrt(std::max(0.0, sq_a / nd - int_a * int_a) / nd);
    const double se_b = std::sqrt(std::max(0.0, sq_b / nd - int_b * int_b) / nd);
    const double se_c = std::sqrt(std::max(0.0, sq_c / nd - int_c * int_c) / nd);

    const double delta_star = c / (gamma * gamma2) +
                              c2 / gamma1 * (admissible(R, 1.0, 1.0) - int_a) +
                              c2 / (gamma1 + gamma2) * (int_b - int_c);
    const double se_delta_star =
        std::sqrt(c2 / gamma1 * (c2 / gamma1) * se_a * se_a +
                  c2 / (gamma1 + gamma2) * (c2 / (gamma1 + gamma2)) *
                      (se_b * se_b + se_c * se_c));

    const double one_m = 1.0 - gamma1;
    const double zeta = (one_m * std::log(a) + gamma1) / (gamma1 * one_m * one_m);
    const double var_term = gamma1 * gamma1 * gamma2 * gamma2 /
                            ((gamma2 * gamma2 - gamma1 * gamma1) * one_m * one_m);
    const double cross_coef = 2.0 * gamma * gamma1 * zeta / one_m;

    MonteCarloEstimate out;
    out.value = zeta * zeta * sigma2 + var_term + cross_coef * delta_star;
    const double se_from_delta = 2.0 * c * c2 * zeta * zeta * delta.std_error;
    const double se_from_star = cross_coef * se_delta_star;
    out.std_error = std::sqrt(se_from_delta * se_from_delta +
                              se_from_star * se_from_star);
    return out;
}

PremiumEstimate premium_confidence_interval(const TruncatedSample& sample,
                                            std::size_t k, double u, double gamma1_hat,
                                            double gamma2_hat,
                                            const PremiumCiOptions& opts) {
    const std::size_t n = sample.size();
    if (k < 2 || k >= n) {
        throw std::invalid_argument("premium_confidence_interval: need 2 <= k < n");
    }
    if (!(gamma2_hat > gamma1_hat)) {
        throw std::invalid_argument(
            "premium_confidence_interval: need gamma1_hat < gamma2_hat");
    }
    if (!(opts.level > 0.0 && opts.level < 1.0)) {
        throw std::invalid_argument(
            "premium_confidence_interval: level must lie in (0, 1)");
    }
    PremiumEstimate out = premium_estimate(sample, k, u, gamma1_hat);
    const double pivot = sample.order_stat(Margin::X, n - k);
    const double a = u / pivot;

    const EmpiricalTailCopula copula(sample, k);
    const MonteCarloEstimate sigma_star2 = theorem3_sigma_star(
        gamma1_hat, gamma2_hat, a, std::cref(copula), opts.mc_points,
        derive_stream(opts.seed, 0x7072656d69756dULL));
    if (!(sigma_star2.value >= 0.0)) {
        throw negative_variance_error(sigma_star2.value);
    }
    const double sigma_star = std::sqrt(sigma_star2.value);

    double bias = 0.0;
    if (opts.bias_term) {
        const auto [lambda_star, tau1] = *opts.bias_term;
        bias = lambda_star / ((gamma1_hat - 1.0 - tau1) * (gamma1_hat - 1.0));
    }

    const double normalizer = std::pow(a, 1.0 - 1.0 / gamma1_hat) * pivot *
                              out.lb_survival_at_pivot;
    const double root_k = std::sqrt(static_cast<double>(k));
    const double z = normal_quantile(1.0 - (1.0 - opts.level) / 2.0);
    const double center = out.pi_hat - normalizer * bias / root_k;
    const double half = normalizer * sigma_star * z / root_k;
    out.ci = ConfidenceBounds{center - half, center + half, opts.level};
    return out;
}

} // namespace truncext
