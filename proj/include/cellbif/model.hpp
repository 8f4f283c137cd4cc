#ifndef CELLBIF_MODEL_HPP
#define CELLBIF_MODEL_HPP

/**
 * @file model.hpp
 * @brief Physical parameters, diffusion coefficient models, and the resting
 *        (disk) steady state of the free-boundary motility model.
 *
 * Nondimensional model on a moving domain Omega(t):
 *   Z lap(sigma) = sigma - P m
 *   dt m = div(D(m) grad m - K m grad sigma),   dnu m = 0 on the boundary
 *   sigma = -gamma H + 1 - |Omega(t)|           on the boundary
 *   K dnu sigma = V_nu                          on the boundary
 * with total mass int m = 1.  The resting state is a disk of radius R0 with
 * uniform m0 = 1/(pi R0^2) and sigma0 = P m0, where R0 solves
 *   g(R) = -gamma/R + 1 - pi R^2 - P/(pi R^2) = 0
 * (the boundary pressure balance).  We take the largest root: it is the
 * branch that connects to the gamma = 0 closed form
 *   pi R0^2 = 1/2 + sqrt(1/4 - P).
 */

#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "errors.hpp"
#include "numerics/bessel.hpp"
#include "numerics/root.hpp"

namespace cellbif {

// ============================================================================
// Parameters
// ============================================================================

/// Dimensionless physical parameters of the 2D model.
struct PhysParams {
    double p = 0.1;     ///< pressure-coupling parameter P in (0, 1/4) for gamma = 0
    double z = 1.25;    ///< substrate screening parameter Z > 0
    double gamma = 0.0; ///< surface tension gamma >= 0 (the K2 pipeline needs > 0)
};

// ============================================================================
// Diffusion models
// ============================================================================

/// Value of D and its first four derivatives at one point.
struct DiffusionDerivs {
    double d0 = 0.0; ///< D(m)
    double d1 = 0.0; ///< D'(m)
    double d2 = 0.0; ///< D''(m)
    double d3 = 0.0; ///< D'''(m)
    double d4 = 0.0; ///< D''''(m)
};

/**
 * @brief Myosin diffusion coefficient D(m).
 *
 * Variants:
 *  - constant:       D(m) = c
 *  - van_der_waals:  D(m) = m_inf^2/(m_inf - m)^2 - e_a m, the nonlinear
 *                    law with saturation density m_inf and attraction e_a
 *  - custom:         caller-supplied evaluator returning D..D'''' (the
 *                    pipeline trusts these values; no differencing is done)
 */
class DiffusionModel {
public:
    enum class Kind { constant, van_der_waals, custom };

    using CustomFn = std::function<std::array<double, 5>(double)>;

    static DiffusionModel constant(double c) {
        DiffusionModel m;
        m.kind_ = Kind::constant;
        m.c_ = c;
        return m;
    }

    static DiffusionModel van_der_waals(double m_inf, double e_a) {
        DiffusionModel m;
        m.kind_ = Kind::van_der_waals;
        m.m_inf_ = m_inf;
        m.e_a_ = e_a;
        return m;
    }

    static DiffusionModel custom(CustomFn fn) {
        DiffusionModel m;
        m.kind_ = Kind::custom;
        m.custom_ = std::move(fn);
        return m;
    }

    Kind kind() const { return kind_; }
    double m_inf() const { return m_inf_; }
    double e_a() const { return e_a_; }

    /// Evaluate D and derivatives at density m.
    DiffusionDerivs eval(double m) const {
        switch (kind_) {
        case Kind::constant:
            return {c_, 0.0, 0.0, 0.0, 0.0};
        case Kind::van_der_waals: {
            const double d = m_inf_ - m;
            if (d <= 0.0)
                throw pole_error("van der Waals diffusion: density " + std::to_string(m) +
                                 " at or beyond saturation m_inf = " + std::to_string(m_inf_));
            const double s = m_inf_ * m_inf_;
            const double d2 = d * d;
            return {s / d2 - e_a_ * m, 2.0 * s / (d2 * d) - e_a_, 6.0 * s / (d2 * d2),
                    24.0 * s / (d2 * d2 * d), 120.0 * s / (d2 * d2 * d2)};
        }
        case Kind::custom: {
            const auto v = custom_(m);
            return {v[0], v[1], v[2], v[3], v[4]};
        }
        }
        throw config_error("DiffusionModel: invalid kind");
    }

private:
    Kind kind_ = Kind::constant;
    double c_ = 1.0;
    double m_inf_ = 10.0;
    double e_a_ = 0.0;
    CustomFn custom_;
};

// ============================================================================
// Steady state
// ============================================================================

/// Resting disk: radius, area, uniform density and substrate tension.
struct SteadyState {
    double r0 = 0.0;     ///< disk radius
    double area = 0.0;   ///< pi R0^2
    double m0 = 0.0;     ///< uniform myosin density 1/area
    double sigma0 = 0.0; ///< uniform tension P m0
};

/// Boundary pressure balance whose largest root is R0.
inline double steady_residual(double r, const PhysParams& par) {
    const double pi = numerics::pi_const;
    const double area = pi * r * r;
    return -par.gamma / r + 1.0 - area - par.p / area;
}

/**
 * @brief Solve for the resting disk radius R0.
 *
 * Scans (1e-6, 2/sqrt(pi)] and takes the rightmost sign change of the
 * pressure balance; g is negative at both scan ends, so the rightmost
 * bracket holds the largest root.
 *
 * @throws no_steady_state_error when g < 0 on the whole scan range
 */
inline SteadyState solve_steady_state(const PhysParams& par, double tol_root = 1e-14) {
    if (!(par.p > 0.0)) throw config_error("solve_steady_state: P must be positive");
    if (par.gamma < 0.0) throw config_error("solve_steady_state: gamma must be nonnegative");
    const double pi = numerics::pi_const;
    const double lo = 1e-6, hi = 2.0 / std::sqrt(pi);
    const auto g = [&](double r) { return steady_residual(r, par); };
    const auto brackets = numerics::find_sign_changes(g, lo, hi, 4000);
    if (brackets.empty())
        throw no_steady_state_error("no positive root of the pressure balance for P = " +
                                    std::to_string(par.p) + ", gamma = " +
                                    std::to_string(par.gamma));
    const auto [ba, bb] = brackets.back();
    const auto root = numerics::find_root(g, ba, bb, tol_root);
    SteadyState ss;
    ss.r0 = root.x;
    ss.area = pi * ss.r0 * ss.r0;
    ss.m0 = 1.0 / ss.area;
    ss.sigma0 = par.p * ss.m0;
    return ss;
}

/// Closed-form R0 for gamma = 0 (used by tests as an independent check).
inline double steady_radius_closed_form(double p) {
    if (!(p > 0.0) || p > 0.25)
        throw no_steady_state_error("gamma = 0 closed form needs 0 < P <= 1/4, got " +
                                    std::to_string(p));
    const double pi = numerics::pi_const;
    return std::sqrt((0.5 + std::sqrt(0.25 - p)) / pi);
}

/**
 * @brief Evaluate the diffusion model at the steady density m0.
 * @throws pole_error for m0 >= m_inf, invalid_diffusion_error for D(m0) <= 0
 */
inline DiffusionDerivs diffusion_at_steady(const DiffusionModel& model, const SteadyState& ss) {
    const DiffusionDerivs d = model.eval(ss.m0);
    if (!(d.d0 > 0.0))
        throw invalid_diffusion_error("D(m0) = " + std::to_string(d.d0) +
                                      " is not positive at m0 = " + std::to_string(ss.m0));
    return d;
}

} // namespace cellbif

#endif // CELLBIF_MODEL_HPP
