#include "truncext/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace truncext {

namespace {

struct SimpsonCell {
    double fa, fm, fb;
    double estimate;
};

double simpson(const std::function<double(double)>& f, double a, double b, double fa,
               double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(const std::function<double(double)>& f, double a, double b, double fa,
               double fm, double fb, double whole, double abs_tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * abs_tol) {
        return left + right + delta / 15.0;
    }
    if (depth <= 0) {
        throw std::runtime_error("adaptive_simpson: quadrature did not converge");
    }
    return recurse(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1) +
           recurse(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth) {
    if (!(b > a)) {
        return 0.0;
    }
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson(f, a, b, fa, fm, fb);
    // Scale the absolute tolerance off a coarse magnitude estimate; fall back
    // to the interval length when the coarse pass is ~0 but the integrand is not.
    double scale = std::abs(whole);
    if (scale < 1e-30) {
        scale = std::abs(fa) + std::abs(fm) + std::abs(fb);
        if (scale < 1e-300) {
            return 0.0;
        }
        scale *= (b - a);
    }
    return recurse(f, a, b, fa, fm, fb, whole, rel_tol * scale, max_depth);
}

} // namespace truncext
