#include "truncext/tail_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "truncext/stats.hpp"

namespace truncext {

degenerate_fraction_error::degenerate_fraction_error(std::size_t k, double gamma_hat,
                                                     double gamma2_hat)
    : std::runtime_error("degenerate sample fraction k=" + std::to_string(k) +
                         ": Hill(Y)=" + std::to_string(gamma2_hat) +
                         " <= Hill(X)=" + std::to_string(gamma_hat)),
      k_(k), gamma_hat_(gamma_hat), gamma2_hat_(gamma2_hat) {}

negative_variance_error::negative_variance_error(double sigma2)
    : std::runtime_error("plug-in variance estimate is negative: sigma2_hat=" +
                         std::to_string(sigma2)),
      sigma2_(sigma2) {}

double hill(const std::vector<double>& sorted_values, std::size_t k) {
    const std::size_t n = sorted_values.size();
    if (k < 1 || k >= n) {
        throw std::invalid_argument("hill: k must satisfy 1 <= k < n");
    }
    const double pivot = sorted_values[n - k - 1];
    if (!(pivot > 0.0)) {
        throw std::domain_error("hill: pivot order statistic must be positive");
    }
    double sum = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        sum += std::log(sorted_values[n - i] / pivot);
    }
    return sum / static_cast<double>(k);
}

TailIndexEstimate truncated_tail_index(const TruncatedSample& sample, std::size_t k) {
    const std::size_t n = sample.size();
    if (k <= 1 || k >= n) {
        throw std::invalid_argument("truncated_tail_index: k must satisfy 1 < k < n");
    }
    const auto& xs = sample.x_sorted();
    const auto& ys = sample.y_sorted();
    const double x_pivot = xs[n - k - 1];
    const double y_pivot = ys[n - k - 1];
    double sum_x = 0.0;
    double sum_y = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        sum_x += std::log(xs[n - i] / x_pivot);
        sum_y += std::log(ys[n - i] / y_pivot);
    }
    TailIndexEstimate est;
    est.k = k;
    est.gamma_hat = sum_x / static_cast<double>(k);
    est.gamma2_hat = sum_y / static_cast<double>(k);
    // The denominator of the displayed ratio telescopes to sum_y - sum_x.
    const double denom = sum_y - sum_x;
    if (!(denom > 0.0)) {
        throw degenerate_fraction_error(k, est.gamma_hat, est.gamma2_hat);
    }
    est.gamma1_hat = sum_x * sum_y / (static_cast<double>(k) * denom);
    return est;
}

namespace {

std::size_t copula_index(std::size_t k, std::size_t n, double s, const char* what) {
    const double scaled = std::floor(static_cast<double>(k) * s);
    if (!(scaled >= 0.0) || scaled > static_cast<double>(n - 1)) {
        throw std::out_of_range(std::string(what) +
                                ": [k*s] outside [0, n-1], s=" + std::to_string(s));
    }
    // [ks] = 0 is clamped to 1: the threshold sits at the top order statistic.
    return std::max<std::size_t>(1, static_cast<std::size_t>(scaled));
}

} // namespace

double tail_copula_hat(const TruncatedSample& sample, std::size_t k, double s,
                       double t) {
    const std::size_t n = sample.size();
    if (k < 1 || k >= n) {
        throw std::invalid_argument("tail_copula_hat: k must satisfy 1 <= k < n");
    }
    const std::size_t a = copula_index(k, n, s, "tail_copula_hat");
    const std::size_t b = copula_index(k, n, t, "tail_copula_hat");
    const double x_thresh = sample.x_sorted()[n - a - 1];
    const double y_thresh = sample.y_sorted()[n - b - 1];
    std::size_t count = 0;
    for (const auto& [x, y] : sample.pairs()) {
        if (x >= x_thresh && y >= y_thresh) {
            ++count;
        }
    }
    return static_cast<double>(count) / static_cast<double>(k);
}

EmpiricalTailCopula::EmpiricalTailCopula(const TruncatedSample& sample, std::size_t k)
    : k_(k) {
    const std::size_t n = sample.size();
    if (k < 1 || k >= n) {
        throw std::invalid_argument("EmpiricalTailCopula: k must satisfy 1 <= k < n");
    }
    const auto& xs = sample.x_sorted();
    const auto& ys = sample.y_sorted();
    // For each pair, the smallest grid index a (resp. b) at which it clears
    // the threshold X_{n-a:n} (resp. Y_{n-b:n}); histogram then prefix-sum.
    counts_.assign((k + 1) * (k + 1), 0.0);
    for (const auto& [x, y] : sample.pairs()) {
        const std::size_t below_x =
            n - (std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
        const std::size_t below_y =
            n - (std::upper_bound(ys.begin(), ys.end(), y) - ys.begin());
        const std::size_t a = std::max<std::size_t>(1, below_x);
        const std::size_t b = std::max<std::size_t>(1, below_y);
        if (a <= k && b <= k) {
            counts_[a * (k + 1) + b] += 1.0;
        }
    }
    for (std::size_t a = 1; a <= k; ++a) {
        for (std::size_t b = 1; b <= k; ++b) {
            counts_[a * (k + 1) + b] += counts_[(a - 1) * (k + 1) + b] +
                                        counts_[a * (k + 1) + b - 1] -
                                        counts_[(a - 1) * (k + 1) + b - 1];
        }
    }
}

double EmpiricalTailCopula::operator()(double s, double t) const {
    if (!(s > 0.0) || s > 1.0 || !(t > 0.0) || t > 1.0) {
        throw std::out_of_range("EmpiricalTailCopula: arguments must lie in (0, 1]");
    }
    const std::size_t a =
        std::min(k_, std::max<std::size_t>(
                         1, static_cast<std::size_t>(static_cast<double>(k_) * s)));
    const std::size_t b =
        std::min(k_, std::max<std::size_t>(
                         1, static_cast<std::size_t>(static_cast<double>(k_) * t)));
    return counts_[a * (k_ + 1) + b] / static_cast<double>(k_);
}

MonteCarloEstimate delta_functional(const std::function<double(double, double)>& R,
                                    std::size_t mc_points, RngSeed seed) {
    if (mc_points < 2) {
        throw std::invalid_argument("delta_functional: mc_points must be >= 2");
    }
    Rng rng(seed);
    auto admissible = [&](double s, double t) {
        const double r = R(s, t);
        return std::clamp(r, 0.0, std::min(s, t));
    };

    // Term 1: int int R(s,t)/(st), antithetic in both coordinates.
    const std::size_t pairs = mc_points / 2;
    double sum1 = 0.0;
    double sumsq1 = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double u = rng.uniform01();
        const double v = rng.uniform01();
        const double f1 = admissible(u, v) / (u * v);
        const double f2 = admissible(1.0 - u, 1.0 - v) / ((1.0 - u) * (1.0 - v));
        const double avg = 0.5 * (f1 + f2);
        sum1 += avg;
        sumsq1 += avg * avg;
    }
    const double np = static_cast<double>(pairs);
    const double term1 = sum1 / np;
    const double var1 = std::max(0.0, sumsq1 / np - term1 * term1) / np;

    // Term 2: int (R(s,1) - R(1,s)) ds.
    double sum2 = 0.0;
    double sumsq2 = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double u = rng.uniform01();
        const double f1 = admissible(u, 1.0) - admissible(1.0, u);
        const double w = 1.0 - u;
        const double f2 = admissible(w, 1.0) - admissible(1.0, w);
        const double avg = 0.5 * (f1 + f2);
        sum2 += avg;
        sumsq2 += avg * avg;
    }
    const double term2 = sum2 / np;
    const double var2 = std::max(0.0, sumsq2 / np - term2 * term2) / np;

    const double term3 = admissible(1.0, 1.0);

    MonteCarloEstimate out;
    out.value = std::clamp(term1 - term2 + term3, -4.0, 4.0);
    out.std_error = std::sqrt(var1 + var2);
    return out;
}

double second_order_tau_hat(const std::vector<double>& sorted_values) {
    const std::size_t n = sorted_values.size();
    if (n < 20) {
        throw std::invalid_argument("second_order_tau_hat: need n >= 20");
    }
    const std::size_t k_rho = std::min<std::size_t>(
        static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 0.975))),
        n - 1);
    const double pivot = sorted_values[n - k_rho - 1];
    if (!(pivot > 0.0)) {
        throw std::domain_error("second_order_tau_hat: pivot must be positive");
    }
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
    for (std::size_t i = 1; i <= k_rho; ++i) {
        const double d = std::log(sorted_values[n - i] / pivot);
        m1 += d;
        m2 += d * d;
        m3 += d * d * d;
    }
    const double kd = static_cast<double>(k_rho);
    m1 /= kd;
    m2 /= kd;
    m3 /= kd;
    if (!(m1 > 0.0) || !(m2 > 0.0) || !(m3 > 0.0)) {
        throw std::domain_error("second_order_tau_hat: degenerate top fraction");
    }
    const double num = std::log(m1) - 0.5 * std::log(m2 / 2.0);
    const double den = 0.5 * std::log(m2 / 2.0) - std::log(m3 / 6.0) / 3.0;
    double tau;
    if (den == 0.0) {
        tau = -10.0;
    } else {
        const double ratio = num / den;
        if (std::abs(ratio - 3.0) < 1e-12) {
            tau = -10.0;
        } else {
            tau = -std::abs(3.0 * (ratio - 1.0) / (ratio - 3.0));
        }
    }
    return std::clamp(tau, -10.0, -0.01);
}

double lambda_hat(const std::vector<double>& sorted_values, std::size_t k,
                  double gamma_est, double tau_est) {
    const std::size_t n = sorted_values.size();
    if (2 * k >= n) {
        throw std::invalid_argument("lambda_hat: requires 2k < n");
    }
    if (!(tau_est < 0.0)) {
        throw std::domain_error("lambda_hat: tau_est must be negative");
    }
    const double half_pivot = sorted_values[n - 2 * k - 1];
    const double pivot = sorted_values[n - k - 1];
    const double pow_g = std::pow(2.0, -gamma_est);
    const double pow_t = std::pow(2.0, -tau_est);
    return std::sqrt(static_cast<double>(k)) * tau_est *
           (half_pivot - pow_g * pivot) / (pow_g * (pow_t - 1.0) * pivot);
}

InferenceReport confidence_interval(const TruncatedSample& sample, std::size_t k,
                                    double level, std::size_t mc_points, RngSeed seed,
                                    std::optional<double> tau_fixed) {
    if (!(level > 0.0) || !(level < 1.0)) {
        throw std::invalid_argument("confidence_interval: level must lie in (0, 1)");
    }
    const std::size_t n = sample.size();
    if (2 * k >= n) {
        throw std::invalid_argument("confidence_interval: requires 2k < n");
    }

    InferenceReport rep;
    rep.estimate = truncated_tail_index(sample, k);
    rep.c_hat = rep.estimate.gamma1_hat * rep.estimate.gamma1_hat / rep.estimate.gamma_hat;
    rep.c2_hat =
        rep.estimate.gamma1_hat * rep.estimate.gamma1_hat / rep.estimate.gamma2_hat;

    rep.tau_hat = tau_fixed ? *tau_fixed : second_order_tau_hat(sample.x_sorted());
    rep.tau2_hat = tau_fixed ? *tau_fixed : second_order_tau_hat(sample.y_sorted());
    rep.lambda_hat =
        truncext::lambda_hat(sample.x_sorted(), k, rep.estimate.gamma_hat, rep.tau_hat);
    rep.lambda2_hat = truncext::lambda_hat(sample.y_sorted(), k, rep.estimate.gamma2_hat,
                                           rep.tau2_hat);

    const EmpiricalTailCopula copula(sample, k);
    const auto delta = delta_functional(
        [&](double s, double t) { return copula(s, t); }, mc_points,
        derive_stream(seed, 0x64656c7461ULL)); // independent stream for the functional
    rep.delta_hat = delta.value;
    rep.delta_std_error = delta.std_error;

    rep.mu_hat = rep.c_hat * rep.lambda_hat /
                     (rep.estimate.gamma_hat * (1.0 - rep.tau_hat)) +
                 rep.c2_hat * rep.lambda2_hat /
                     (rep.estimate.gamma2_hat * (1.0 - rep.tau2_hat));
    rep.sigma2_hat = 2.0 * rep.c_hat * rep.c_hat + 2.0 * rep.c2_hat * rep.c2_hat -
                     2.0 * rep.c_hat * rep.c2_hat * rep.delta_hat;
    if (rep.sigma2_hat < 0.0) {
        throw negative_variance_error(rep.sigma2_hat);
    }

    const double z = normal_quantile(1.0 - 0.5 * (1.0 - level));
    const double sigma = std::sqrt(rep.sigma2_hat);
    const double root_k = std::sqrt(static_cast<double>(k));
    rep.ci.lcb = rep.estimate.gamma1_hat + (rep.mu_hat - sigma * z) / root_k;
    rep.ci.ucb = rep.estimate.gamma1_hat + (rep.mu_hat + sigma * z) / root_k;
    rep.ci.level = level;
    return rep;
}

} // namespace truncext
