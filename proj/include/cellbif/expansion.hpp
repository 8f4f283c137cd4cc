#ifndef CELLBIF_EXPANSION_HPP
#define CELLBIF_EXPANSION_HPP

/**
 * @file expansion.hpp
 * @brief Weakly nonlinear expansion around K0 up to third order and the
 *        bifurcation-curve curvature K2 with its diffusion decomposition.
 *
 * The traveling-wave branch is parameterized by speed V with K(V) = K0 + K2 V^2.
 * The gauge rho_1 = 0 fixes the pitchfork symmetry, so second order splits into
 * angular modes {0, 2} and two blocks:
 *   A: advection/translation quadratics (coefficient 1/D^2 in physical fields)
 *   B: diffusion-slope quadratics       (coefficient D'/D^3)
 * Each (block, mode) pair is an auxiliary potential w with Delta_n w = -g and a
 * sigma problem Z L_n[sigma] + beta sigma = -P w, regular at 0 with Neumann 0
 * at R0, where m = K0h m0 sigma + w and beta = P K0h m0 - 1.  All second-order
 * fields here are hatted (D-independent); physical fields are recovered as
 * m2 = m2A / D^2 + D' m2B / D^3.
 *
 * Third order produces the mode-1 source f, assembled twice: once split into
 * the four hatted blocks f1..f4 (cubic, slope-squared, slope-cross, plain) and
 * once unsplit from physical totals.  Pairing against the homogeneous solution
 * U = J1(omega r)/J1(alpha) of Z L1[U] + beta U = 0 yields K2 directly and as
 *   K2 = A1 D''/D^2 + A2 D'^2/D^3 + A3 D'/D^2 + A4 / D.
 */

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linearization.hpp"
#include "model.hpp"
#include "numerics/bessel.hpp"
#include "numerics/bvp.hpp"
#include "numerics/grid.hpp"
#include "numerics/quad.hpp"

namespace cellbif {

// ============================================================================
// Angular mode projections
// ============================================================================

/// Mode-0 and mode-2 components of an angular quadratic.
struct ModePair {
    std::vector<double> c0, c2;
};

/// a cos(t) * b cos(t) -> (ab/2, ab/2).
inline ModePair product_modes(const std::vector<double>& a, const std::vector<double>& b) {
    ModePair out;
    out.c0.resize(a.size());
    out.c2.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.c0[i] = 0.5 * a[i] * b[i];
        out.c2[i] = out.c0[i];
    }
    return out;
}

/// grad(a cos t) . grad(b cos t) -> ( (a'b' + ab/r^2)/2, (a'b' - ab/r^2)/2 ).
/// Both fields must vanish at r = 0; the limit of ab/r^2 there is a'(0) b'(0).
inline ModePair grad_dot_modes(const numerics::Grid& g, const numerics::Profile& a,
                               const numerics::Profile& b) {
    ModePair out;
    out.c0.resize(g.size());
    out.c2.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double dd = a.d1[i] * b.d1[i];
        const double rr = (i == 0) ? a.d1[0] * b.d1[0] : a.v[i] * b.v[i] / (g.r[i] * g.r[i]);
        out.c0[i] = 0.5 * (dd + rr);
        out.c2[i] = 0.5 * (dd - rr);
    }
    return out;
}

/// e1 . grad(g cos t) -> ( (g' + g/r)/2, (g' - g/r)/2 ), limit g'(0) at r = 0.
inline ModePair e1_grad_modes(const numerics::Grid& g, const numerics::Profile& a) {
    ModePair out;
    out.c0.resize(g.size());
    out.c2.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double over_r = (i == 0) ? a.d1[0] : a.v[i] / g.r[i];
        out.c0[i] = 0.5 * (a.d1[i] + over_r);
        out.c2[i] = 0.5 * (a.d1[i] - over_r);
    }
    return out;
}

namespace detail {

/// L1[a q] for a mode-1 field a (a(0) = 0, lap_a supplied from its ODE) and an
/// even combination q:  L1[a q] = q L1[a] + a (q'' + q'/r) + 2 a' q'.
inline std::vector<double> l1_product(const numerics::Grid& g, const numerics::Profile& a,
                                      const std::vector<double>& lap_a,
                                      const std::vector<double>& q, const std::vector<double>& qp,
                                      const std::vector<double>& qpp) {
    std::vector<double> out(g.size(), 0.0);
    for (std::size_t i = 1; i < g.size(); ++i) {
        out[i] = q[i] * lap_a[i] + a.v[i] * (qpp[i] + qp[i] / g.r[i]) + 2.0 * a.d1[i] * qp[i];
    }
    // q'(0) = 0 and a(0) = 0, so only the q L1[a] term survives at the origin.
    out[0] = q[0] * lap_a[0];
    return out;
}

} // namespace detail

// ============================================================================
// Second order
// ============================================================================

/// One (block, mode) second-order solution.
struct SecondOrderMode {
    numerics::Profile sigma;       ///< hatted sigma_{2n}
    numerics::Profile w;           ///< auxiliary potential, m = K0h m0 sigma + w
    numerics::Profile m;           ///< hatted m_{2n}
    std::vector<double> lap_sigma; ///< L_n[sigma] from the ODE
    double rho = 0.0;              ///< hatted boundary coefficient rho_{2n}
};

/// Block A (advection quadratics) or B (diffusion-slope quadratics).
struct SecondOrderBlock {
    SecondOrderMode n0, n2;
    std::vector<double> g0, g2; ///< sources, Delta_n w = -g
    double shift = 0.0;         ///< constant added to w0 by the mass constraint
    double compat = 0.0;        ///< int_0^R0 r g0 dr (vanishes analytically)
    double beta2 = 0.0;         ///< r^2 coefficient closing the mode-2 Neumann condition
};

/// Both second-order blocks plus the shared mode-0 boundary coupling.
struct SecondOrderProfiles {
    SecondOrderBlock a, b;
    double c0_coupling = 0.0; ///< sigma_{20}(R0) = c0 rho_20, c0 = gamma/R0^2 - 2 pi R0
};

namespace detail {

/// Solve one block given its mode sources.
inline SecondOrderBlock solve_block(const numerics::Grid& g, const PhysParams& par,
                                    const SteadyState& ss, const BifurcationPoint& bp,
                                    double beta, double c0, std::vector<double> g0,
                                    std::vector<double> g2) {
    const std::size_t n = g.size();
    const double h = g.h;
    const double r0 = ss.r0;
    SecondOrderBlock blk;
    blk.g0 = std::move(g0);
    blk.g2 = std::move(g2);

    {
        std::vector<double> rg0(n);
        for (std::size_t i = 0; i < n; ++i) rg0[i] = g.r[i] * blk.g0[i];
        blk.compat = numerics::integrate4(rg0, h);
    }

    // Mode 0 potential: w0'(r) = -(1/r) int_0^r s g0 ds, then w0 by quadrature.
    SecondOrderMode& m0 = blk.n0;
    m0.w = numerics::Profile(n);
    {
        std::vector<double> sg(n);
        for (std::size_t i = 0; i < n; ++i) sg[i] = g.r[i] * blk.g0[i];
        const std::vector<double> cum = numerics::cumint4(sg, h);
        for (std::size_t i = 1; i < n; ++i) m0.w.d1[i] = -cum[i] / g.r[i];
        m0.w.d1[0] = 0.0;
        m0.w.v = numerics::cumint4(m0.w.d1, h);
        for (std::size_t i = 1; i < n; ++i) m0.w.d2[i] = -blk.g0[i] - m0.w.d1[i] / g.r[i];
        m0.w.d2[0] = -0.5 * blk.g0[0];
    }

    // Mode 2 potential: particular solution by variation of parameters plus a
    // beta2 r^2 homogeneous part enforcing w2'(R0) = 0.
    SecondOrderMode& m2 = blk.n2;
    m2.w = numerics::Profile(n);
    {
        std::vector<double> h_over_s(n, 0.0), s3h(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) {
            const double r = g.r[i];
            h_over_s[i] = -blk.g2[i] / r;
            s3h[i] = -blk.g2[i] * r * r * r;
        }
        const std::vector<double> c1 = numerics::cumint4(h_over_s, h);
        const std::vector<double> c2 = numerics::cumint4(s3h, h);
        const double wp_r0 = 0.5 * r0 * c1.back() + 0.5 * c2.back() / (r0 * r0 * r0);
        blk.beta2 = -wp_r0 / (2.0 * r0);
        for (std::size_t i = 1; i < n; ++i) {
            const double r = g.r[i];
            m2.w.v[i] = 0.25 * r * r * c1[i] - 0.25 * c2[i] / (r * r) + blk.beta2 * r * r;
            m2.w.d1[i] = 0.5 * r * c1[i] + 0.5 * c2[i] / (r * r * r) + 2.0 * blk.beta2 * r;
            m2.w.d2[i] = -blk.g2[i] - m2.w.d1[i] / r + 4.0 * m2.w.v[i] / (r * r);
        }
        m2.w.d2[0] = 2.0 * blk.beta2;
    }

    // sigma problems: Z L_n[sigma] + beta sigma = -P w, Neumann at R0.
    const auto solve_sigma = [&](SecondOrderMode& mode, int n_mode) {
        numerics::RadialBVP bvp;
        bvp.grid = &g;
        bvp.n_mode = n_mode;
        bvp.a = par.z;
        bvp.b = beta;
        bvp.rhs.resize(n);
        for (std::size_t i = 0; i < n; ++i) bvp.rhs[i] = -par.p * mode.w.v[i];
        bvp.right = numerics::RightBC::neumann;
        bvp.right_value = 0.0;
        mode.sigma = numerics::Profile(n);
        mode.sigma.v = numerics::solve_radial_bvp(bvp);
        mode.lap_sigma.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            mode.lap_sigma[i] = (-beta * mode.sigma.v[i] - par.p * mode.w.v[i]) / par.z;
    };
    solve_sigma(m0, 0);
    solve_sigma(m2, 2);

    // Derivative channels from integral identities, never grid differencing.
    {
        std::vector<double> integ(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            integ[i] = g.r[i] * (beta * m0.sigma.v[i] + par.p * m0.w.v[i]);
        const std::vector<double> cum = numerics::cumint4(integ, h);
        for (std::size_t i = 1; i < n; ++i) m0.sigma.d1[i] = -cum[i] / (par.z * g.r[i]);
        m0.sigma.d1[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i)
            m0.sigma.d2[i] = m0.lap_sigma[i] - m0.sigma.d1[i] / g.r[i];
        m0.sigma.d2[0] = (-beta * m0.sigma.v[0] - par.p * m0.w.v[0]) / (2.0 * par.z);
    }
    {
        std::vector<double> integ(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) {
            const double r = g.r[i];
            integ[i] = 4.0 * par.z * m2.sigma.v[i] / r -
                       r * (beta * m2.sigma.v[i] + par.p * m2.w.v[i]);
        }
        const std::vector<double> cum = numerics::cumint4(integ, h);
        for (std::size_t i = 1; i < n; ++i) m2.sigma.d1[i] = cum[i] / (par.z * g.r[i]);
        m2.sigma.d1[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double r = g.r[i];
            m2.sigma.d2[i] =
                m2.lap_sigma[i] - m2.sigma.d1[i] / r + 4.0 * m2.sigma.v[i] / (r * r);
        }
        m2.sigma.d2[0] = 2.0 * m2.sigma.v[1] / (h * h);
    }

    const auto assemble_m = [&](SecondOrderMode& mode) {
        const double km = bp.k0_hat * ss.m0;
        mode.m = numerics::Profile(n);
        for (std::size_t i = 0; i < n; ++i) {
            mode.m.v[i] = km * mode.sigma.v[i] + mode.w.v[i];
            mode.m.d1[i] = km * mode.sigma.d1[i] + mode.w.d1[i];
            mode.m.d2[i] = km * mode.sigma.d2[i] + mode.w.d2[i];
        }
    };
    assemble_m(m0);
    assemble_m(m2);

    m0.rho = m0.sigma.v.back() / c0;
    m2.rho = -m2.sigma.v.back() * r0 * r0 / (3.0 * par.gamma);

    // Mass constraint: int_0^R0 m_20 r dr + m0 R0 rho_20 = 0.  Adding c to w0
    // shifts sigma_20 by delta1 c (constant), m_20 by (K0h m0 delta1 + 1) c and
    // rho_20 by delta1 c / c0, with delta1 = -P/beta.
    {
        std::vector<double> rm(n);
        for (std::size_t i = 0; i < n; ++i) rm[i] = g.r[i] * m0.m.v[i];
        const double defect = numerics::integrate4(rm, h) + ss.m0 * r0 * m0.rho;
        const double delta1 = -par.p / beta;
        const double rate =
            (bp.k0_hat * ss.m0 * delta1 + 1.0) * 0.5 * r0 * r0 + ss.m0 * r0 * delta1 / c0;
        if (std::abs(rate) < 1e-14)
            throw degenerate_denominator_error("second order: mass-constraint rate vanishes");
        blk.shift = -defect / rate;
        const double dsig = delta1 * blk.shift;
        for (std::size_t i = 0; i < n; ++i) {
            m0.w.v[i] += blk.shift;
            m0.sigma.v[i] += dsig;
            m0.m.v[i] += bp.k0_hat * ss.m0 * dsig + blk.shift;
            // lap_sigma is unchanged: beta delta1 + P = 0.
        }
        m0.rho += dsig / c0;
    }
    return blk;
}

} // namespace detail

/**
 * @brief Solve both second-order blocks in hatted variables.
 *
 * @throws degenerate_denominator_error when gamma <= 0 (the mode-2 shape
 *         coupling rho_22 = -sigma_22(R0) R0^2 / (3 gamma) degenerates) or
 *         when the mode-0 coupling c0 = gamma/R0^2 - 2 pi R0 vanishes
 */
inline SecondOrderProfiles solve_second_order(const numerics::Grid& g, const PhysParams& par,
                                              const SteadyState& ss, const BifurcationPoint& bp,
                                              const FirstOrderProfiles& fo) {
    if (!(par.gamma > 0.0))
        throw degenerate_denominator_error(
            "second order: the mode-2 shape coupling requires gamma > 0");
    const double c0 = par.gamma / (ss.r0 * ss.r0) - 2.0 * numerics::pi_const * ss.r0;
    if (std::abs(c0) < 1e-12)
        throw degenerate_denominator_error("second order: mode-0 boundary coupling vanishes");
    const double beta = fo.beta;
    const double k0h = bp.k0_hat;
    const std::size_t n = g.size();

    // Block A: translation term e1 . grad(m11) minus K0h [grad m11 . grad s11
    // + m11 L1[s11]] projected on modes 0 and 2.
    const ModePair tr = e1_grad_modes(g, fo.m);
    const ModePair gd = grad_dot_modes(g, fo.m, fo.sigma);
    std::vector<double> ga0(n), ga2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lap_term = 0.5 * k0h * fo.m.v[i] * fo.lap_sigma[i];
        ga0[i] = tr.c0[i] - k0h * gd.c0[i] - lap_term;
        ga2[i] = tr.c2[i] - k0h * gd.c2[i] - lap_term;
    }

    // Block B: quarter Laplacians of m11^2 (modes 0 and 2 of L[m11^2 cos^2]).
    std::vector<double> gb0(n), gb2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double mp2 = fo.m.d1[i] * fo.m.d1[i];
        const double mmpp = fo.m.v[i] * fo.m.d2[i];
        const double over_r =
            (i == 0) ? mp2 : fo.m.v[i] * fo.m.d1[i] / g.r[i];
        const double l0 = 2.0 * mp2 + 2.0 * mmpp + 2.0 * over_r;
        const double sq_over_r2 =
            (i == 0) ? mp2 : fo.m.v[i] * fo.m.v[i] / (g.r[i] * g.r[i]);
        gb0[i] = 0.25 * l0;
        gb2[i] = 0.25 * (l0 - 4.0 * sq_over_r2);
    }

    SecondOrderProfiles so;
    so.c0_coupling = c0;
    so.a = detail::solve_block(g, par, ss, bp, beta, c0, std::move(ga0), std::move(ga2));
    so.b = detail::solve_block(g, par, ss, bp, beta, c0, std::move(gb0), std::move(gb2));
    return so;
}

// ============================================================================
// Third-order source
// ============================================================================

/// Coefficients of the (m - m0)^2 / (m - m0)^3 constitutive terms.  The
/// Taylor pair (1, 1/6) follows the flux potential expansion literally and is
/// the default: it reproduces the known van der Waals transition at
/// e_A ~ 0.599.  The doubled pair (2, 1/3) is kept as a diagnostic
/// alternative; it shifts the transition to ~ 0.502.
enum class CubicPolicy { taylor, doubled };

inline double cubic_mix(CubicPolicy p) { return p == CubicPolicy::taylor ? 1.0 : 2.0; }
inline double cubic_self(CubicPolicy p) { return p == CubicPolicy::taylor ? 1.0 / 6.0 : 1.0 / 3.0; }

inline const char* to_string(CubicPolicy p) {
    return p == CubicPolicy::taylor ? "taylor" : "doubled";
}

/// Mode-1 divergence functional E[b0, b2] = b0' + b2'/2 + b2/r.
inline std::vector<double> functional_e(const numerics::Grid& g, const numerics::Profile& b0,
                                        const numerics::Profile& b2) {
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double over_r = (i == 0) ? b2.d1[0] : b2.v[i] / g.r[i];
        out[i] = b0.d1[i] + 0.5 * b2.d1[i] + over_r;
    }
    return out;
}

/// X[a; b0, b2] = (b0 + b2/2) L1[a] + (b0' + b2'/2) a' + b2 a / r^2 for a
/// mode-1 field a paired with an even (mode 0 + 2) density.
inline std::vector<double> functional_x(const numerics::Grid& g, const numerics::Profile& a,
                                        const std::vector<double>& lap_a,
                                        const numerics::Profile& b0,
                                        const numerics::Profile& b2) {
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double cross =
            (i == 0) ? 0.0 : b2.v[i] * a.v[i] / (g.r[i] * g.r[i]);
        out[i] = (b0.v[i] + 0.5 * b2.v[i]) * lap_a[i] +
                 (b0.d1[i] + 0.5 * b2.d1[i]) * a.d1[i] + cross;
    }
    return out;
}

/// Y[a; b0, b2] = a (L0[b0] + L2[b2]/2) + a' (b0' + b2'/2) + a b2 / r^2.
inline std::vector<double> functional_y(const numerics::Grid& g, const numerics::Profile& a,
                                        const numerics::Profile& b0, const numerics::Profile& b2,
                                        const std::vector<double>& lap_b0,
                                        const std::vector<double>& lap_b2) {
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double cross =
            (i == 0) ? 0.0 : a.v[i] * b2.v[i] / (g.r[i] * g.r[i]);
        out[i] = a.v[i] * (lap_b0[i] + 0.5 * lap_b2[i]) +
                 a.d1[i] * (b0.d1[i] + 0.5 * b2.d1[i]) + cross;
    }
    return out;
}

/// Hatted third-order blocks and the independently assembled physical total.
struct ThirdOrderSource {
    std::vector<double> f1, f2, f3, f4; ///< hatted blocks
    std::vector<double> f_split;        ///< physical total via the block split
    std::vector<double> f_total;        ///< physical total, unsplit assembly
    double split_mismatch = 0.0;        ///< max |f_split - f_total| / scale
};

namespace detail {

/// Linear combination of two profiles.
inline numerics::Profile combine(const numerics::Profile& a, double ca,
                                 const numerics::Profile& b, double cb) {
    numerics::Profile out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.v[i] = ca * a.v[i] + cb * b.v[i];
        out.d1[i] = ca * a.d1[i] + cb * b.d1[i];
        out.d2[i] = ca * a.d2[i] + cb * b.d2[i];
    }
    return out;
}

inline std::vector<double> combine_vec(const std::vector<double>& a, double ca,
                                       const std::vector<double>& b, double cb) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = ca * a[i] + cb * b[i];
    return out;
}

} // namespace detail

/**
 * @brief Assemble the third-order mode-1 source.
 *
 * Hatted blocks:
 *   f1 = (3 c_self / 4) L1[m11^3]
 *   f2 = c_mix L1[m11 (m20B + m22B/2)]
 *   f3 = c_mix L1[m11 (m20A + m22A/2)] + E[m2B] - K0h X[s11; m2B] - K0h Y[m11; s2B]
 *   f4 = E[m2A] - K0h X[s11; m2A] - K0h Y[m11; s2A]
 * and the physical total carries the diffusion weights
 *   f = (D''/D^3) f1 + (D'^2/D^4) f2 + (D'/D^3) f3 + (1/D^2) f4.
 * The unsplit assembly rebuilds f from physical first/second-order fields and
 * must agree with the split path; the mismatch is recorded for diagnostics.
 */
inline ThirdOrderSource third_order_source(const numerics::Grid& g, const PhysParams& /*par*/,
                                           const SteadyState& ss, const BifurcationPoint& bp,
                                           const FirstOrderProfiles& fo,
                                           const SecondOrderProfiles& so,
                                           const DiffusionDerivs& dd, CubicPolicy policy) {
    const std::size_t n = g.size();
    const double k0h = bp.k0_hat;
    const double c_mix = cubic_mix(policy);
    const double c_self = cubic_self(policy);
    ThirdOrderSource src;

    std::vector<double> lap_m(n);
    for (std::size_t i = 0; i < n; ++i) lap_m[i] = k0h * ss.m0 * fo.lap_sigma[i];

    // f1: cubic self-interaction through the flux potential.
    {
        std::vector<double> q(n), qp(n), qpp(n);
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = fo.m.v[i] * fo.m.v[i];
            qp[i] = 2.0 * fo.m.v[i] * fo.m.d1[i];
            qpp[i] = 2.0 * (fo.m.d1[i] * fo.m.d1[i] + fo.m.v[i] * fo.m.d2[i]);
        }
        src.f1 = detail::l1_product(g, fo.m, lap_m, q, qp, qpp);
        for (auto& v : src.f1) v *= 0.75 * c_self;
    }

    const auto mix_with = [&](const SecondOrderBlock& blk) {
        std::vector<double> q(n), qp(n), qpp(n);
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = blk.n0.m.v[i] + 0.5 * blk.n2.m.v[i];
            qp[i] = blk.n0.m.d1[i] + 0.5 * blk.n2.m.d1[i];
            qpp[i] = blk.n0.m.d2[i] + 0.5 * blk.n2.m.d2[i];
        }
        std::vector<double> out = detail::l1_product(g, fo.m, lap_m, q, qp, qpp);
        for (auto& v : out) v *= c_mix;
        return out;
    };
    src.f2 = mix_with(so.b);

    const auto transport_with = [&](const SecondOrderBlock& blk) {
        const std::vector<double> e = functional_e(g, blk.n0.m, blk.n2.m);
        const std::vector<double> x = functional_x(g, fo.sigma, fo.lap_sigma, blk.n0.m, blk.n2.m);
        const std::vector<double> y =
            functional_y(g, fo.m, blk.n0.sigma, blk.n2.sigma, blk.n0.lap_sigma,
                         blk.n2.lap_sigma);
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = e[i] - k0h * x[i] - k0h * y[i];
        return out;
    };
    src.f3 = mix_with(so.a);
    {
        const std::vector<double> tb = transport_with(so.b);
        for (std::size_t i = 0; i < n; ++i) src.f3[i] += tb[i];
    }
    src.f4 = transport_with(so.a);

    const double d = dd.d0, dp = dd.d1, dpp = dd.d2;
    src.f_split.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        src.f_split[i] = dpp / (d * d * d) * src.f1[i] + dp * dp / (d * d * d * d) * src.f2[i] +
                         dp / (d * d * d) * src.f3[i] + 1.0 / (d * d) * src.f4[i];
    }

    // Unsplit physical assembly: scale fields back, combine blocks, reassemble.
    {
        numerics::Profile m1 = fo.m;
        m1.scale(1.0 / d);
        numerics::Profile s1 = fo.sigma;
        s1.scale(1.0 / d);
        std::vector<double> lap_s1(n), lap_m1(n);
        for (std::size_t i = 0; i < n; ++i) {
            lap_s1[i] = fo.lap_sigma[i] / d;
            lap_m1[i] = lap_m[i] / d;
        }
        const double ca = 1.0 / (d * d), cb = dp / (d * d * d);
        const numerics::Profile m20 = detail::combine(so.a.n0.m, ca, so.b.n0.m, cb);
        const numerics::Profile m22 = detail::combine(so.a.n2.m, ca, so.b.n2.m, cb);
        const numerics::Profile s20 = detail::combine(so.a.n0.sigma, ca, so.b.n0.sigma, cb);
        const numerics::Profile s22 = detail::combine(so.a.n2.sigma, ca, so.b.n2.sigma, cb);
        const std::vector<double> lap_s20 =
            detail::combine_vec(so.a.n0.lap_sigma, ca, so.b.n0.lap_sigma, cb);
        const std::vector<double> lap_s22 =
            detail::combine_vec(so.a.n2.lap_sigma, ca, so.b.n2.lap_sigma, cb);
        const double k0 = bp.k0;

        std::vector<double> cube, mix;
        {
            std::vector<double> q(n), qp(n), qpp(n);
            for (std::size_t i = 0; i < n; ++i) {
                q[i] = m1.v[i] * m1.v[i];
                qp[i] = 2.0 * m1.v[i] * m1.d1[i];
                qpp[i] = 2.0 * (m1.d1[i] * m1.d1[i] + m1.v[i] * m1.d2[i]);
            }
            cube = detail::l1_product(g, m1, lap_m1, q, qp, qpp);
        }
        {
            std::vector<double> q(n), qp(n), qpp(n);
            for (std::size_t i = 0; i < n; ++i) {
                q[i] = m20.v[i] + 0.5 * m22.v[i];
                qp[i] = m20.d1[i] + 0.5 * m22.d1[i];
                qpp[i] = m20.d2[i] + 0.5 * m22.d2[i];
            }
            mix = detail::l1_product(g, m1, lap_m1, q, qp, qpp);
        }
        const std::vector<double> e = functional_e(g, m20, m22);
        const std::vector<double> x = functional_x(g, s1, lap_s1, m20, m22);
        const std::vector<double> y = functional_y(g, m1, s20, s22, lap_s20, lap_s22);

        src.f_total.resize(n);
        double scale = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            src.f_total[i] = 0.75 * c_self * dpp * cube[i] + c_mix * dp * mix[i] + e[i] -
                             k0 * x[i] - k0 * y[i];
            scale = std::max(scale, std::abs(src.f_split[i]));
            diff = std::max(diff, std::abs(src.f_split[i] - src.f_total[i]));
        }
        src.split_mismatch = diff / std::max(1.0, scale);
    }
    return src;
}

// ============================================================================
// Test function and K2 pairing
// ============================================================================

/// Homogeneous mode-1 solution U = J1(omega r) / J1(alpha), U(R0) = 1.
struct TestFunctionU {
    double omega = 0.0;
    double j1_alpha = 0.0;

    double at(double r) const { return numerics::besselj1(omega * r) / j1_alpha; }
    double d_at(double r) const {
        return omega * numerics::besselj1_prime(omega * r) / j1_alpha;
    }
};

/// @throws degenerate_test_function_error when J1(alpha) = 0
inline TestFunctionU test_function(const BifurcationPoint& bp, const SteadyState& ss) {
    TestFunctionU u;
    u.omega = bp.alpha / ss.r0;
    u.j1_alpha = numerics::besselj1(bp.alpha);
    if (std::abs(u.j1_alpha) < 1e-12)
        throw degenerate_test_function_error("test function: J1(alpha) = 0 at alpha = " +
                                             std::to_string(bp.alpha));
    return u;
}

/// Pitchfork classification of the bifurcation curve K = K0 + K2 V^2.
enum class PitchforkType { direct_pitchfork, inverse_pitchfork, degenerate };

inline PitchforkType classify_k2(double k2) {
    if (std::abs(k2) <= 1e-9 * std::max(1.0, std::abs(k2))) return PitchforkType::degenerate;
    return k2 > 0.0 ? PitchforkType::direct_pitchfork : PitchforkType::inverse_pitchfork;
}

inline const char* to_string(PitchforkType t) {
    switch (t) {
        case PitchforkType::direct_pitchfork: return "direct_pitchfork";
        case PitchforkType::inverse_pitchfork: return "inverse_pitchfork";
        default: return "degenerate";
    }
}

/// Full curvature result with the diffusion decomposition and diagnostics.
struct K2Report {
    double k2 = 0.0;                ///< decomposed-path value (primary)
    double k2_direct = 0.0;         ///< physical Green-pairing value
    double dual_path_rel_err = 0.0; ///< |k2 - k2_direct| / max(1, |k2|)
    double a0 = 0.0;                ///< pairing denominator (hatted)
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0; ///< decomposition coefficients
    double k0 = 0.0, k0_hat = 0.0, alpha = 0.0;
    double transversality = 0.0, s1p = 0.0;
    double r0 = 0.0, m0 = 0.0, d0 = 0.0;
    double rho20 = 0.0, rho22 = 0.0; ///< physical shape coefficients
    double split_mismatch = 0.0;
    CubicPolicy policy = CubicPolicy::taylor;
    PitchforkType verdict = PitchforkType::degenerate;
};

/// Options shared by the curvature pipelines.
struct K2Options {
    int grid_n = 0; ///< 0 picks default_grid_n()
    CubicPolicy policy = CubicPolicy::taylor;
    double tol_root = 1e-12;
    double tol_quad = 1e-10;
};

/// Everything the curvature pipeline builds, reusable by external checks.
struct K2Workspace {
    SteadyState ss;
    DiffusionDerivs dd;
    BifurcationPoint bp;
    numerics::Grid grid;
    FirstOrderProfiles fo;
    SecondOrderProfiles so;
    ThirdOrderSource src;
};

/// Run the pipeline through the third-order source on one grid.
inline K2Workspace build_k2_workspace(const PhysParams& par, const DiffusionModel& model,
                                      const K2Options& opt = {}) {
    K2Workspace ws;
    ws.ss = solve_steady_state(par);
    ws.dd = diffusion_at_steady(model, ws.ss);
    ws.bp = solve_k0(par, ws.ss, ws.dd.d0, opt.tol_root, opt.tol_quad);
    const int n = opt.grid_n > 0 ? opt.grid_n : numerics::default_grid_n();
    ws.grid = numerics::Grid(ws.ss.r0, n);
    ws.fo = first_order_profiles(ws.grid, ws.bp, par, ws.ss);
    ws.so = solve_second_order(ws.grid, par, ws.ss, ws.bp, ws.fo);
    ws.src = third_order_source(ws.grid, par, ws.ss, ws.bp, ws.fo, ws.so, ws.dd, opt.policy);
    return ws;
}

namespace detail {

/// Phi[f](r) = r int_r^R0 f ds + (1/r) int_0^r s^2 f ds; solves L1[Phi] = -2 f.
inline std::vector<double> phi_kernel(const numerics::Grid& g, const std::vector<double>& f) {
    const std::size_t n = g.size();
    std::vector<double> s2f(n);
    for (std::size_t i = 0; i < n; ++i) s2f[i] = g.r[i] * g.r[i] * f[i];
    const std::vector<double> cf = numerics::cumint4(f, g.h);
    const std::vector<double> cs = numerics::cumint4(s2f, g.h);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        out[i] = g.r[i] * (cf.back() - cf[i]) + cs[i] / g.r[i];
    return out;
}

/// Green pairing weight of one hatted source block:
/// W = [ (Ir / R0^2) int s^2 f + int r U Phi[f] ] / 2.
inline double pairing_weight(const numerics::Grid& g, const TestFunctionU& u, double ir,
                             const std::vector<double>& f) {
    const std::size_t n = g.size();
    std::vector<double> s2f(n), ruphi(n);
    const std::vector<double> phi = phi_kernel(g, f);
    for (std::size_t i = 0; i < n; ++i) {
        s2f[i] = g.r[i] * g.r[i] * f[i];
        ruphi[i] = g.r[i] * u.at(g.r[i]) * phi[i];
    }
    const double r0 = g.r_max;
    return 0.5 * (ir / (r0 * r0) * numerics::integrate4(s2f, g.h) +
                  numerics::integrate4(ruphi, g.h));
}

} // namespace detail

/**
 * @brief Pair a built workspace against the test function U.
 *
 * Decomposed (hatted) path: per-block weights W1..W4 and boundary terms G_A,
 * G_B produce A1..A4 with K2 = A1 D''/D^2 + A2 D'^2/D^3 + A3 D'/D^2 + A4/D.
 * Direct path: the unsplit physical source is solved for the particular
 * profile phi = Phi[f]/(2D), C1 = -phi'(R0), and paired against U with the
 * physical boundary data.  Both must agree; the report keeps the difference.
 *
 * @throws degenerate_denominator_error when the pairing denominator vanishes
 */
inline K2Report pair_k2(const K2Workspace& ws, const PhysParams& par, const K2Options& opt = {}) {
    const numerics::Grid& g = ws.grid;
    const double r0 = ws.ss.r0, m0 = ws.ss.m0;
    const double d = ws.dd.d0, dp = ws.dd.d1, dpp = ws.dd.d2;
    const double k0h = ws.bp.k0_hat, k0 = ws.bp.k0, alpha = ws.bp.alpha;
    const TestFunctionU u = test_function(ws.bp, ws.ss);

    const double ir =
        numerics::quad([&](double r) { return r * r * u.at(r); }, 0.0, r0, opt.tol_quad, 0.0);
    const double isig_hat = numerics::quad(
        [&](double r) { return r * u.at(r) * ws.fo.sigma_at(r); }, 0.0, r0, opt.tol_quad, 0.0);

    const double a0 = par.z * r0 / (k0h * k0h) - par.p * m0 * isig_hat;
    if (std::abs(a0) <= 1e-9 * (std::abs(par.z * r0 / (k0h * k0h)) +
                                std::abs(par.p * m0 * isig_hat)))
        throw degenerate_denominator_error("K2 pairing denominator A0 vanishes");

    const double w1 = detail::pairing_weight(g, u, ir, ws.src.f1);
    const double w2 = detail::pairing_weight(g, u, ir, ws.src.f2);
    const double w3 = detail::pairing_weight(g, u, ir, ws.src.f3);
    const double w4 = detail::pairing_weight(g, u, ir, ws.src.f4);

    const double j_ratio = numerics::besselj1_prime(alpha) / numerics::besselj1(alpha);
    const auto boundary_g = [&](const SecondOrderBlock& blk) {
        const double big_sigma = blk.n0.rho + 0.5 * blk.n2.rho;
        return -par.z * r0 *
               (big_sigma * ws.fo.sigma_pp_r0 + blk.n2.rho / (k0h * r0) -
                big_sigma * alpha / (k0h * r0) * j_ratio);
    };
    const double ga = boundary_g(ws.so.a);
    const double gb = boundary_g(ws.so.b);

    K2Report rep;
    rep.a0 = a0;
    rep.a1 = par.p * w1 / a0;
    rep.a2 = par.p * w2 / a0;
    rep.a3 = (par.p * w3 + gb) / a0;
    rep.a4 = (par.p * w4 + ga) / a0;
    rep.k2 = rep.a1 * dpp / (d * d) + rep.a2 * dp * dp / (d * d * d) + rep.a3 * dp / (d * d) +
             rep.a4 / d;

    // Direct path on the unsplit physical source.
    {
        const std::size_t n = g.size();
        std::vector<double> s2f(n);
        for (std::size_t i = 0; i < n; ++i) s2f[i] = g.r[i] * g.r[i] * ws.src.f_total[i];
        const double int_s2f = numerics::integrate4(s2f, g.h);
        const double c1 = int_s2f / (2.0 * d * r0 * r0);
        std::vector<double> phi = detail::phi_kernel(g, ws.src.f_total);
        for (auto& v : phi) v /= 2.0 * d;
        std::vector<double> ruphi(n);
        for (std::size_t i = 0; i < n; ++i) ruphi[i] = g.r[i] * u.at(g.r[i]) * phi[i];
        const double iphi = numerics::integrate4(ruphi, g.h);

        const double ca = 1.0 / (d * d), cb = dp / (d * d * d);
        rep.rho20 = ca * ws.so.a.n0.rho + cb * ws.so.b.n0.rho;
        rep.rho22 = ca * ws.so.a.n2.rho + cb * ws.so.b.n2.rho;
        const double big_sigma = rep.rho20 + 0.5 * rep.rho22;
        const double sig1_pp = ws.fo.sigma_pp_r0 / d;
        const double num =
            par.p * (c1 * ir + iphi) -
            par.z * r0 *
                (big_sigma * sig1_pp + rep.rho22 / (k0 * r0) -
                 big_sigma * alpha / (k0 * r0) * j_ratio);
        const double den = par.z * r0 / (k0 * k0) - par.p * (m0 / d) * (isig_hat / d);
        if (std::abs(den) <= 1e-300)
            throw degenerate_denominator_error("K2 direct-path denominator vanishes");
        rep.k2_direct = num / den;
    }

    rep.dual_path_rel_err = std::abs(rep.k2 - rep.k2_direct) / std::max(1.0, std::abs(rep.k2));
    rep.k0 = k0;
    rep.k0_hat = k0h;
    rep.alpha = alpha;
    rep.transversality = ws.bp.transversality;
    rep.s1p = ws.bp.s1p;
    rep.r0 = r0;
    rep.m0 = m0;
    rep.d0 = d;
    rep.split_mismatch = ws.src.split_mismatch;
    rep.policy = opt.policy;
    rep.verdict = classify_k2(rep.k2);
    return rep;
}

/// Full curvature pipeline: build the workspace, then pair.
inline K2Report compute_k2(const PhysParams& par, const DiffusionModel& model,
                           const K2Options& opt = {}) {
    return pair_k2(build_k2_workspace(par, model, opt), par, opt);
}

} // namespace cellbif

#endif // CELLBIF_EXPANSION_HPP
