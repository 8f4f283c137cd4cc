#ifndef CELLBIF_NUMERICS_ROOT_HPP
#define CELLBIF_NUMERICS_ROOT_HPP

/**
 * @file root.hpp
 * @brief Bracketed scalar root finding (Brent) and sign-change scanning.
 *
 * find_root never leaves the caller-supplied bracket: every iterate keeps a
 * sign change enclosed, so the returned interval is a guarantee, not a hint.
 * The kernel does not scan; callers locate brackets (see find_sign_changes).
 */

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "../errors.hpp"

namespace cellbif::numerics {

/// Result of a bracketed root solve: the root and its final enclosure.
struct RootResult {
    double x;          ///< best root estimate
    double fx;         ///< f(x)
    double bracket_lo; ///< final bracket, contains a sign change
    double bracket_hi;
    int iterations;
};

namespace detail {

inline double checked_eval(const std::function<double(double)>& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v))
        throw evaluation_error("find_root: f(" + std::to_string(x) + ") is not finite");
    return v;
}

} // namespace detail

/**
 * @brief Find a root of f in [a, b] by Brent's method.
 *
 * @param f   continuous function; must change sign over [a, b]
 * @param a,b bracket endpoints, a < b
 * @param tol convergence tolerance: stops when |f(x)| <= tol or the bracket
 *            width falls below tol * max(1, |x|) + 4 eps |x|
 * @return RootResult; bracket_lo/hi always enclose a sign change of f
 * @throws bracket_error if f(a) f(b) > 0, evaluation_error on non-finite f
 */
inline RootResult find_root(const std::function<double(double)>& f, double a, double b,
                            double tol = 1e-14) {
    double fa = detail::checked_eval(f, a);
    double fb = detail::checked_eval(f, b);
    if (fa == 0.0) return {a, 0.0, a, a, 0};
    if (fb == 0.0) return {b, 0.0, b, b, 0};
    if ((fa > 0.0) == (fb > 0.0))
        throw bracket_error("find_root: no sign change on [" + std::to_string(a) + ", " +
                            std::to_string(b) + "]");

    // Brent: b is the best iterate, a the previous, c keeps the bracket.
    double c = a, fc = fa, d = b - a, e = d;
    int iter = 0;
    for (; iter < 200; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double eps = std::numeric_limits<double>::epsilon();
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || std::abs(fb) <= tol) break;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // Inverse quadratic / secant step.
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = detail::checked_eval(f, b);
    }
    const double lo = std::min(b, c), hi = std::max(b, c);
    return {b, fb, lo, hi, iter};
}

/**
 * @brief Scan [lo, hi] on n+1 uniform samples and return sign-change brackets.
 *
 * Samples where f is non-finite or |f| > pole_threshold are treated as poles
 * and excluded; a sign change straddling a pole is not reported.  Returned
 * brackets are ordered left to right.
 */
inline std::vector<std::pair<double, double>> find_sign_changes(
    const std::function<double(double)>& f, double lo, double hi, int n,
    double pole_threshold = std::numeric_limits<double>::infinity()) {
    std::vector<std::pair<double, double>> out;
    double prev_x = 0.0, prev_v = 0.0;
    bool have_prev = false;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / n;
        double v;
        try {
            v = f(x);
        } catch (const error&) {
            have_prev = false;
            continue;
        }
        if (!std::isfinite(v) || std::abs(v) > pole_threshold) {
            have_prev = false;
            continue;
        }
        if (have_prev && ((prev_v > 0.0) != (v > 0.0) || v == 0.0 || prev_v == 0.0))
            out.emplace_back(prev_x, x);
        prev_x = x;
        prev_v = v;
        have_prev = true;
    }
    return out;
}

} // namespace cellbif::numerics

#endif // CELLBIF_NUMERICS_ROOT_HPP
