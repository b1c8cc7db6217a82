#ifndef TRUNCEXT_STATS_HPP
#define TRUNCEXT_STATS_HPP

namespace truncext {

/// Quantile of the standard normal distribution, p in (0, 1).
/// Acklam's rational approximation refined by one Halley step; absolute
/// error well below 1e-9 over the whole range.
double normal_quantile(double p);

} // namespace truncext

#endif
