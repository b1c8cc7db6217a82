#ifndef TRUNCEXT_K_SELECT_HPP
#define TRUNCEXT_K_SELECT_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "truncext/sample.hpp"

namespace truncext {

struct KSelection {
    std::size_t k_star = 0;
    std::size_t k_min = 0;
    std::size_t k_max = 0;
    /// (k, criterion score) diagnostic trace over the evaluated candidates.
    std::vector<std::pair<std::size_t, double>> criterion_values;
};

/// Stability-based choice of the sample fraction:
///   k* = argmin_k (1/k) sum_{i=2}^{k} i^beta |g(i) - median{g(2..k)}|
/// over k in [max(3, floor(0.02 n)), floor(0.25 n)], ties broken toward the
/// larger k.  The trace returns nullopt at fractions where the estimator is
/// degenerate; those are skipped both as candidates and inside the criterion.
/// Throws std::runtime_error when every candidate is degenerate.
KSelection reiss_thomas_k(
    const std::function<std::optional<double>(std::size_t)>& estimator_trace,
    std::size_t n, double beta = 0.3);

/// Convenience wrapper: applies the heuristic to the truncated tail-index
/// trace of a sample.
KSelection reiss_thomas_k(const TruncatedSample& sample, double beta = 0.3);

} // namespace truncext

#endif
