#ifndef CELLBIF_NUMERICS_QUAD_HPP
#define CELLBIF_NUMERICS_QUAD_HPP

/**
 * @file quad.hpp
 * @brief Adaptive Simpson quadrature on finite intervals.
 *
 * The absolute error target is tol * max(1, |result|).  Endpoint values may
 * be supplied by the caller for integrands with removable endpoint
 * singularities; interior non-finite evaluations are an error.
 */

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "../errors.hpp"

namespace cellbif::numerics {

namespace detail {

inline double quad_eval(const std::function<double(double)>& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v))
        throw evaluation_error("quad: integrand not finite at x = " + std::to_string(x));
    return v;
}

// One level of adaptive Simpson with the Richardson-corrected acceptance
// test; whole = S(a,b) computed by the caller.
inline double quad_step(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = quad_eval(f, lm), frm = quad_eval(f, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0)
        throw evaluation_error("quad: maximum refinement depth reached near x = " +
                               std::to_string(m));
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return quad_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           quad_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/**
 * @brief Integrate f over [a, b] adaptively.
 *
 * @param f   integrand; must be finite on (a, b)
 * @param a,b integration limits, a <= b
 * @param tol relative tolerance; the absolute error is bounded by
 *            tol * max(1, |result|), and splitting an interval at any c
 *            changes the sum by at most 3 tol (additivity property)
 * @param fa,fb optional limit values at the endpoints for integrands with
 *            removable singularities there
 * @throws evaluation_error if f is non-finite where it is actually sampled
 */
inline double quad(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                   std::optional<double> fa = std::nullopt,
                   std::optional<double> fb = std::nullopt) {
    if (a == b) return 0.0;
    const double va = fa ? *fa : detail::quad_eval(f, a);
    const double vb = fb ? *fb : detail::quad_eval(f, b);
    const double m = 0.5 * (a + b);
    const double vm = detail::quad_eval(f, m);
    const double whole = (b - a) / 6.0 * (va + 4.0 * vm + vb);
    return detail::quad_step(f, a, b, va, vm, vb, whole, tol, 60);
}

} // namespace cellbif::numerics

#endif // CELLBIF_NUMERICS_QUAD_HPP
