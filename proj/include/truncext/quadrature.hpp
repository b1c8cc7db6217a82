#ifndef TRUNCEXT_QUADRATURE_HPP
#define TRUNCEXT_QUADRATURE_HPP

#include <functional>

namespace truncext {

/// Adaptive Simpson quadrature of f over [a, b] with a relative tolerance.
/// Throws std::runtime_error if the requested tolerance is not reached
/// before the recursion depth limit.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-8, int max_depth = 60);

} // namespace truncext

#endif
