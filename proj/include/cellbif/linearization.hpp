#ifndef CELLBIF_LINEARIZATION_HPP
#define CELLBIF_LINEARIZATION_HPP

/**
 * @file linearization.hpp
 * @brief Critical Peclet number K0, transversality gate, and the first-order
 *        (mode cos theta) profiles of the traveling-wave expansion.
 *
 * The bifurcation condition is
 *   P m0 - (D / K) J1(alpha) / (alpha J1'(alpha)) = 0,
 *   alpha(K) = (R0 / sqrt(Z)) sqrt(P K m0 / D - 1),
 * solved in K-space.  The scan runs over the equivalent entire function
 *   chi(alpha) = (1 + Z alpha^2 / R0^2) alpha J1'(alpha) - J1(alpha),
 * which has the same zeros and no poles, and every bracket is converted back
 * to a K-interval where Brent runs on the K-space residual itself.  alpha is
 * capped below the second zero of J1'; the first root is K0.
 *
 * Fields are scaled by D throughout the expansion; this module returns the
 * hatted profiles (sigma = sigma_hat / D, m = m_hat / D, K0 = D K0_hat),
 * which are independent of the diffusion magnitude:
 *   sigma_hat(r) = A r + B J1(alpha r / R0),  m_hat = K0_hat m0 sigma_hat - m0 r
 * with A = P m0 / (P K0_hat m0 - 1) and B = -A R0 / J1(alpha).
 */

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "numerics/bessel.hpp"
#include "numerics/grid.hpp"
#include "numerics/quad.hpp"
#include "numerics/root.hpp"

namespace cellbif {

// ============================================================================
// alpha(K) and the bifurcation condition
// ============================================================================

/**
 * @brief Radial wavenumber alpha(K) of the neutral cos(theta) mode.
 * @throws subcritical_k_error when P K m0 / D <= 1 (no real alpha)
 */
inline double alpha_of(double k, const PhysParams& par, const SteadyState& ss, double d0) {
    const double arg = par.p * k * ss.m0 / d0 - 1.0;
    if (!(arg > 0.0))
        throw subcritical_k_error("alpha(K): P K m0 / D - 1 = " + std::to_string(arg) +
                                  " is not positive at K = " + std::to_string(k));
    return ss.r0 / std::sqrt(par.z) * std::sqrt(arg);
}

/// K-space residual of the bifurcation condition.
inline double bifurcation_residual(double k, const PhysParams& par, const SteadyState& ss,
                                   double d0) {
    const double alpha = alpha_of(k, par, ss, d0);
    const double j1p = numerics::besselj1_prime(alpha);
    return par.p * ss.m0 - (d0 / k) * numerics::besselj1_over_x(alpha) / j1p;
}

// ============================================================================
// Transversality
// ============================================================================

/// Transversality functional and the boundary-derivative diagnostic built
/// from the same two integrals.
struct Transversality {
    double value = 0.0; ///< the non-degeneracy functional; must stay away from 0
    double s1p = 0.0;   ///< diagnostic combination -alpha J1' I1 + alpha Y1' I2
};

/**
 * @brief Evaluate the transversality functional
 *   T = -alpha J1'(alpha)/J1(alpha) - int_0^1 s Y1(alpha s) J1(alpha s) ds
 *       + (Y1'(alpha)/J1'(alpha)) int_0^1 s J1(alpha s)^2 ds.
 *
 * Both integrands extend continuously by 0 to s = 0 (the J1 zero cancels the
 * Y1 pole), which is supplied as the endpoint limit.
 */
inline Transversality transversality(double alpha, double tol_quad = 1e-10) {
    const numerics::BesselPair bp = numerics::bessel_eval(alpha);
    if (std::abs(bp.j1) < 1e-14)
        throw degenerate_denominator_error("transversality: J1(alpha) = 0 at alpha = " +
                                           std::to_string(alpha));
    if (std::abs(bp.j1p) < 1e-14)
        throw degenerate_denominator_error("transversality: J1'(alpha) = 0 at alpha = " +
                                           std::to_string(alpha));
    const auto f1 = [alpha](double s) {
        const numerics::BesselPair v = numerics::bessel_eval(alpha * s);
        return s * v.y1 * v.j1;
    };
    const auto f2 = [alpha](double s) {
        const double j = numerics::besselj1(alpha * s);
        return s * j * j;
    };
    const double i1 = numerics::quad(f1, 0.0, 1.0, tol_quad, /*fa=*/0.0);
    const double i2 = numerics::quad(f2, 0.0, 1.0, tol_quad, /*fa=*/0.0);
    Transversality t;
    t.value = -alpha * bp.j1p / bp.j1 - i1 + bp.y1p / bp.j1p * i2;
    t.s1p = -alpha * bp.j1p * i1 + alpha * bp.y1p * i2;
    return t;
}

// ============================================================================
// K0 solve
// ============================================================================

/// Critical point data: K0, its hatted form K0/D, alpha, and the gate values.
struct BifurcationPoint {
    double k0 = 0.0;             ///< critical Peclet number
    double k0_hat = 0.0;         ///< K0 / D(m0)
    double alpha = 0.0;          ///< radial wavenumber at K0
    double transversality = 0.0; ///< non-degeneracy functional at alpha
    double s1p = 0.0;            ///< diagnostic combination at alpha
    double residual = 0.0;       ///< bifurcation-condition residual at K0
};

namespace detail {

/// Entire rescaling of the bifurcation condition used for scanning.
inline double chi_of_alpha(double alpha, double z_over_r0sq) {
    return (1.0 + z_over_r0sq * alpha * alpha) * alpha * numerics::besselj1_prime(alpha) -
           numerics::besselj1(alpha);
}

} // namespace detail

/**
 * @brief Solve the bifurcation condition for the first critical K.
 *
 * @param tol_root Brent tolerance for the final K-space solve
 * @param tol_quad tolerance of the transversality integrals
 * @return BifurcationPoint with the transversality gate already enforced
 * @throws no_bifurcation_error if no root lies in the alpha window,
 *         transversality_error if |T| <= 1e-8 at the root
 */
inline BifurcationPoint solve_k0(const PhysParams& par, const SteadyState& ss, double d0,
                                 double tol_root = 1e-12, double tol_quad = 1e-10) {
    if (!(d0 > 0.0)) throw invalid_diffusion_error("solve_k0: D(m0) must be positive");
    const double zr = par.z / (ss.r0 * ss.r0);
    const auto chi = [zr](double a) { return detail::chi_of_alpha(a, zr); };
    const auto k_of_alpha = [&](double a) {
        return d0 * (1.0 + zr * a * a) / (par.p * ss.m0);
    };
    const auto resid_k = [&](double k) { return bifurcation_residual(k, par, ss, d0); };

    const double alpha_lo = 1e-3;
    const double alpha_hi = numerics::j1p_zero2 - 1e-3;
    const auto brackets = numerics::find_sign_changes(chi, alpha_lo, alpha_hi, 2000);
    if (brackets.empty())
        throw no_bifurcation_error("no root of the bifurcation condition for alpha in (0, " +
                                   std::to_string(alpha_hi) + ")");

    // First root in alpha order.  A scan cell can straddle a pole of the
    // K-space residual (a zero of J1') as well as the root; shrink it on chi
    // until the K endpoints show the sign change.
    double a_lo = brackets.front().first, a_hi = brackets.front().second;
    double chi_lo = chi(a_lo);
    for (int it = 0; it < 80; ++it) {
        const double ra = resid_k(k_of_alpha(a_lo));
        const double rb = resid_k(k_of_alpha(a_hi));
        if ((ra > 0.0) != (rb > 0.0)) break;
        const double mid = 0.5 * (a_lo + a_hi);
        const double chi_mid = chi(mid);
        if ((chi_lo > 0.0) != (chi_mid > 0.0)) {
            a_hi = mid;
        } else {
            a_lo = mid;
            chi_lo = chi_mid;
        }
        if (it == 79)
            throw no_bifurcation_error("could not isolate the bifurcation root from a residual "
                                       "pole near alpha = " + std::to_string(mid));
    }

    const auto root = numerics::find_root(resid_k, k_of_alpha(a_lo), k_of_alpha(a_hi), tol_root);
    BifurcationPoint bp;
    bp.k0 = root.x;
    bp.k0_hat = root.x / d0;
    bp.alpha = alpha_of(root.x, par, ss, d0);
    bp.residual = root.fx;

    const Transversality t = transversality(bp.alpha, tol_quad);
    bp.transversality = t.value;
    bp.s1p = t.s1p;
    if (std::abs(t.value) <= 1e-8)
        throw transversality_error("transversality functional " + std::to_string(t.value) +
                                   " vanishes at alpha = " + std::to_string(bp.alpha));
    return bp;
}

// ============================================================================
// First-order profiles
// ============================================================================

/// Hatted first-order profiles and their closed-form coefficients.
struct FirstOrderProfiles {
    numerics::Profile sigma;          ///< sigma_hat_11 (value, d1, d2)
    numerics::Profile m;              ///< m_hat_11 (value, d1, d2)
    std::vector<double> lap_sigma;    ///< L1[sigma_hat_11] from the ODE
    double a_hat = 0.0;               ///< linear coefficient A
    double b_hat = 0.0;               ///< Bessel coefficient B
    double omega = 0.0;               ///< alpha / R0
    double beta = 0.0;                ///< P K0_hat m0 - 1
    double sigma_pp_r0 = 0.0;         ///< sigma_hat_11''(R0)
    double r0 = 0.0;
    double m0 = 0.0;

    /// Closed-form sigma_hat_11(r) for quadrature use.
    double sigma_at(double r) const {
        return a_hat * r + b_hat * numerics::besselj1(omega * r);
    }
};

/**
 * @brief Build the hatted first-order profiles on a grid.
 *
 * Satisfies by construction: sigma(R0) = 0, K0_hat sigma'(R0) = 1 (via the
 * bifurcation condition), m'(R0) = 0, m(R0) = -m0 R0, sigma(0) = m(0) = 0.
 */
inline FirstOrderProfiles first_order_profiles(const numerics::Grid& grid,
                                               const BifurcationPoint& bp, const PhysParams& par,
                                               const SteadyState& ss) {
    const double alpha = bp.alpha;
    const double j1_alpha = numerics::besselj1(alpha);
    if (std::abs(j1_alpha) < 1e-12)
        throw degenerate_denominator_error("first_order_profiles: J1(alpha) = 0 at alpha = " +
                                           std::to_string(alpha));
    FirstOrderProfiles fo;
    fo.r0 = ss.r0;
    fo.m0 = ss.m0;
    fo.beta = par.p * bp.k0_hat * ss.m0 - 1.0;
    if (!(fo.beta > 0.0))
        throw subcritical_k_error("first_order_profiles: P K0_hat m0 - 1 = " +
                                  std::to_string(fo.beta) + " must be positive");
    fo.omega = alpha / ss.r0;
    fo.a_hat = par.p * ss.m0 / fo.beta;
    fo.b_hat = -fo.a_hat * ss.r0 / j1_alpha;

    const std::size_t n = grid.size();
    fo.sigma = numerics::Profile(n);
    fo.m = numerics::Profile(n);
    fo.lap_sigma.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid.r[i];
        const double x = fo.omega * r;
        const double j1 = numerics::besselj1(x);
        const double j1p = numerics::besselj1_prime(x);
        // J1''(x) = -J1'(x)/x + (1/x^2 - 1) J1(x); zero in the limit x -> 0.
        const double j1pp =
            (x > 0.0) ? (-j1p / x + (1.0 / (x * x) - 1.0) * j1) : 0.0;
        fo.sigma.v[i] = fo.a_hat * r + fo.b_hat * j1;
        fo.sigma.d1[i] = fo.a_hat + fo.b_hat * fo.omega * j1p;
        fo.sigma.d2[i] = fo.b_hat * fo.omega * fo.omega * j1pp;
        fo.m.v[i] = bp.k0_hat * ss.m0 * fo.sigma.v[i] - ss.m0 * r;
        fo.m.d1[i] = bp.k0_hat * ss.m0 * fo.sigma.d1[i] - ss.m0;
        fo.m.d2[i] = bp.k0_hat * ss.m0 * fo.sigma.d2[i];
        fo.lap_sigma[i] = (par.p * ss.m0 * r - fo.beta * fo.sigma.v[i]) / par.z;
    }
    fo.sigma_pp_r0 = fo.sigma.d2.back();
    return fo;
}

} // namespace cellbif

#endif // CELLBIF_LINEARIZATION_HPP
