#include "truncext/k_select.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "truncext/tail_estimation.hpp"

namespace truncext {

KSelection reiss_thomas_k(
    const std::function<std::optional<double>(std::size_t)>& estimator_trace,
    std::size_t n, double beta) {
    if (n < 20) {
        throw std::invalid_argument("reiss_thomas_k: need n >= 20");
    }
    if (!(beta >= 0.0) || beta > 0.5) {
        throw std::invalid_argument("reiss_thomas_k: beta must lie in [0, 0.5]");
    }
    KSelection sel;
    sel.k_min = std::max<std::size_t>(3, n / 50); // floor(0.02 n)
    sel.k_max = n / 4;

    // Cache the trace on [2, k_max]; nullopt marks a degenerate fraction.
    std::vector<std::optional<double>> trace(sel.k_max + 1);
    for (std::size_t i = 2; i <= sel.k_max; ++i) {
        trace[i] = estimator_trace(i);
    }

    std::vector<double> window;     // defined trace values for i in [2, k]
    std::vector<double> sorted_win; // same values kept sorted for the median
    std::vector<std::pair<std::size_t, double>> weights; // (i, i^beta) per value
    window.reserve(sel.k_max);
    sorted_win.reserve(sel.k_max);

    bool have_best = false;
    double best_score = 0.0;
    for (std::size_t k = 2; k <= sel.k_max; ++k) {
        if (trace[k]) {
            const double v = *trace[k];
            window.push_back(v);
            sorted_win.insert(
                std::upper_bound(sorted_win.begin(), sorted_win.end(), v), v);
            weights.emplace_back(k, std::pow(static_cast<double>(k), beta));
        }
        if (k < sel.k_min || !trace[k] || window.empty()) {
            continue;
        }
        const std::size_t m = sorted_win.size();
        const double median = (m % 2 == 1)
                                  ? sorted_win[m / 2]
                                  : 0.5 * (sorted_win[m / 2 - 1] + sorted_win[m / 2]);
        double score = 0.0;
        for (std::size_t j = 0; j < window.size(); ++j) {
            score += weights[j].second * std::abs(window[j] - median);
        }
        score /= static_cast<double>(k);
        sel.criterion_values.emplace_back(k, score);
        if (!have_best || score <= best_score) {
            have_best = true;
            best_score = score;
            sel.k_star = k;
        }
    }
    if (!have_best) {
        throw std::runtime_error(
            "reiss_thomas_k: estimator degenerate at every candidate fraction");
    }
    return sel;
}

KSelection reiss_thomas_k(const TruncatedSample& sample, double beta) {
    const std::size_t n = sample.size();
    if (n < 20) {
        throw std::invalid_argument("reiss_thomas_k: need n >= 20");
    }
    const auto& xs = sample.x_sorted();
    const auto& ys = sample.y_sorted();
    // Prefix log-sums make each trace evaluation O(1).
    std::vector<double> lx(n + 1, 0.0), ly(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        lx[i] = lx[i - 1] + std::log(xs[n - i]);
        ly[i] = ly[i - 1] + std::log(ys[n - i]);
    }
    auto trace = [&](std::size_t k) -> std::optional<double> {
        if (k + 1 > n) {
            return std::nullopt;
        }
        const double kd = static_cast<double>(k);
        const double sum_x = lx[k] - kd * std::log(xs[n - k - 1]);
        const double sum_y = ly[k] - kd * std::log(ys[n - k - 1]);
        const double denom = sum_y - sum_x;
        if (!(denom > 0.0)) {
            return std::nullopt;
        }
        return sum_x * sum_y / (kd * denom);
    };
    return reiss_thomas_k(trace, n, beta);
}

} // namespace truncext
