#include "gbdsde/quadrature.hpp"
#include "gbdsde/errors.hpp"

#include <cmath>
#include <string>

namespace gbdsde {
namespace {

double checked(const std::function<double(double)>& fn, double x)
{
    const double v = fn(x);
    if (!std::isfinite(v))
        throw EvaluationError("integrand not finite at x = " + std::to_string(x));
    return v;
}

double simpson_step(const std::function<double(double)>& fn, double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol, int depth)
{
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = checked(fn, lm), frm = checked(fn, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol || m - a <= 0.0 || b - m <= 0.0)
        return left + right + delta / 15.0;
    return simpson_step(fn, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(fn, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double abs_tol, int max_depth)
{
    if (a == b) return 0.0;
    if (b < a) return -adaptive_simpson(fn, b, a, abs_tol, max_depth);
    // A fixed first split avoids accepting a coincidentally flat 3-point estimate.
    constexpr int kPanels = 8;
    const double h = (b - a) / kPanels;
    double total = 0.0;
    double x0 = a, f0 = checked(fn, a);
    for (int i = 0; i < kPanels; ++i) {
        const double x1 = (i + 1 == kPanels) ? b : a + (i + 1) * h;
        const double f1 = checked(fn, x1);
        const double xm = 0.5 * (x0 + x1), fm = checked(fn, xm);
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += simpson_step(fn, x0, f0, x1, f1, xm, fm, whole, abs_tol / kPanels, max_depth);
        x0 = x1;
        f0 = f1;
    }
    return total;
}

double bisect(const std::function<double(double)>& fn, double lo, double hi, double tol)
{
    double flo = fn(lo);
    const double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw NumericalError("bisect: root is not bracketed");
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace gbdsde
