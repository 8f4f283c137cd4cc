#ifndef CELLBIF_ONED_HPP
#define CELLBIF_ONED_HPP

/**
 * @file oned.hpp
 * @brief One-dimensional reduction of the pipeline on the half-interval [0, L0].
 *
 * The 1D resting state is an interval of half-length L0 = ell/2 with
 * ell = (1 + sqrt(1 - 4P))/2 and m0 = 1/ell.  The critical Peclet number
 * solves P m0 - (D/K) tan(alpha)/alpha = 0 with
 * alpha = (L0/sqrt(Z)) sqrt(P K m0 / D - 1); the expansion in the speed V
 * mirrors the radial one with even/odd parities replacing angular modes, and
 * every first integral is explicit, so the second-order potentials and the
 * third-order source need quadratures only.  K2 again decomposes as
 *   K2 = A1 D''/D^2 + A2 D'^2/D^3 + A3 D'/D^2 + A4 / D,
 * and the sign change of K2 along a van der Waals attraction sweep locates
 * the direct/inverse pitchfork transition.
 */

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "expansion.hpp"
#include "model.hpp"
#include "numerics/bvp.hpp"
#include "numerics/grid.hpp"
#include "numerics/root.hpp"
#include "oracle.hpp"

namespace cellbif {

// ============================================================================
// Steady state and critical point
// ============================================================================

/// 1D resting interval data.
struct OneDSteady {
    double ell = 0.0; ///< interval length
    double l0 = 0.0;  ///< half-length, the computational domain
    double m0 = 0.0;  ///< uniform myosin level, 1/ell
};

/// @throws no_steady_state_error when P > 1/4
inline OneDSteady oned_steady(const PhysParams& par) {
    if (!(par.p > 0.0)) throw config_error("oned_steady: P must be positive");
    const double disc = 1.0 - 4.0 * par.p;
    if (disc < 0.0)
        throw no_steady_state_error("no 1D resting interval for P = " + std::to_string(par.p) +
                                    " > 1/4");
    OneDSteady ss;
    ss.ell = 0.5 * (1.0 + std::sqrt(disc));
    ss.l0 = 0.5 * ss.ell;
    ss.m0 = 1.0 / ss.ell;
    return ss;
}

/// 1D critical point; psi is the rescaled condition 1 + Z a^2/L0^2 - tan(a)/a.
struct OneDBifurcation {
    double k0 = 0.0;
    double k0_hat = 0.0;
    double alpha = 0.0;
    double residual = 0.0;
    double psi = 0.0;
};

/// 1D K-space residual of the bifurcation condition.
inline double oned_residual(double k, const PhysParams& par, const OneDSteady& ss, double d0) {
    const double arg = par.p * k * ss.m0 / d0 - 1.0;
    if (!(arg > 0.0))
        throw subcritical_k_error("1D alpha(K): P K m0 / D - 1 is not positive at K = " +
                                  std::to_string(k));
    const double alpha = ss.l0 / std::sqrt(par.z) * std::sqrt(arg);
    return par.p * ss.m0 - (d0 / k) * std::tan(alpha) / alpha;
}

/**
 * @brief First critical K of the 1D problem.
 *
 * Scans the entire rescaling chi(a) = a (1 + Z a^2/L0^2) cos a - sin a for
 * alpha in (0, 3 pi/2), isolates the root from the tan poles, and finishes
 * with Brent on the K-space residual.
 */
inline OneDBifurcation oned_k0(const PhysParams& par, const OneDSteady& ss, double d0,
                               double tol_root = 1e-12) {
    if (!(d0 > 0.0)) throw invalid_diffusion_error("oned_k0: D(m0) must be positive");
    const double zl = par.z / (ss.l0 * ss.l0);
    const auto chi = [zl](double a) {
        return a * (1.0 + zl * a * a) * std::cos(a) - std::sin(a);
    };
    const auto k_of_alpha = [&](double a) {
        return d0 * (1.0 + zl * a * a) / (par.p * ss.m0);
    };
    const auto resid_k = [&](double k) { return oned_residual(k, par, ss, d0); };

    const double alpha_hi = 1.5 * numerics::pi_const - 1e-3;
    const auto brackets = numerics::find_sign_changes(chi, 1e-3, alpha_hi, 2000);
    if (brackets.empty())
        throw no_bifurcation_error("no root of the 1D bifurcation condition below 3 pi / 2");

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
            throw no_bifurcation_error("could not isolate the 1D bifurcation root from a pole");
    }

    const auto root = numerics::find_root(resid_k, k_of_alpha(a_lo), k_of_alpha(a_hi), tol_root);
    OneDBifurcation bp;
    bp.k0 = root.x;
    bp.k0_hat = root.x / d0;
    bp.residual = root.fx;
    bp.alpha = ss.l0 / std::sqrt(par.z) * std::sqrt(par.p * root.x * ss.m0 / d0 - 1.0);
    bp.psi = 1.0 + zl * bp.alpha * bp.alpha - std::tan(bp.alpha) / bp.alpha;
    return bp;
}

// ============================================================================
// Expansion profiles
// ============================================================================

/// Hatted 1D first-order profiles, sigma = A y + B sin(omega y).
struct OneDFirstOrder {
    numerics::Profile sigma, m;
    double a_hat = 0.0, b_hat = 0.0, omega = 0.0, beta = 0.0;
    double sigma_pp_l0 = 0.0;

    double sigma_at(double y) const { return a_hat * y + b_hat * std::sin(omega * y); }
};

/// One hatted second-order block (A: advection, B: diffusion slope).
struct OneDSecondOrder {
    numerics::Profile sigma, w, m;
    double rho = 0.0;   ///< hatted boundary displacement, -sigma(L0)/2
    double shift = 0.0; ///< mass-constraint constant added to w
};

/// Everything the 1D pipeline builds.
struct OneDWorkspace {
    OneDSteady ss;
    DiffusionDerivs dd;
    OneDBifurcation bp;
    numerics::Grid grid;
    OneDFirstOrder fo;
    OneDSecondOrder a, b;
    std::vector<double> g1, g2, g3, g4; ///< hatted third-order blocks
    std::vector<double> g_split;        ///< physical total via the split
    std::vector<double> g_total;        ///< physical total, unsplit assembly
    double split_mismatch = 0.0;
};

/// 1D curvature result; mirrors the radial report.
struct OneDReport {
    double k2 = 0.0;
    double k2_direct = 0.0;
    double dual_path_rel_err = 0.0;
    double a0 = 0.0;
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
    double k0 = 0.0, k0_hat = 0.0, alpha = 0.0, psi = 0.0;
    double l0 = 0.0, m0 = 0.0, d0 = 0.0;
    double rho2 = 0.0; ///< physical boundary displacement coefficient
    double split_mismatch = 0.0;
    CubicPolicy policy = CubicPolicy::taylor;
    PitchforkType verdict = PitchforkType::degenerate;
};

namespace detail {

inline OneDSecondOrder oned_block(const numerics::Grid& g, const PhysParams& par,
                                  const OneDSteady& ss, const OneDBifurcation& bp,
                                  const OneDFirstOrder& fo, numerics::Profile w) {
    const std::size_t n = g.size();
    const double beta = fo.beta;
    OneDSecondOrder blk;
    blk.w = std::move(w);

    numerics::IntervalBVP bvp;
    bvp.grid = &g;
    bvp.parity = numerics::Parity::even;
    bvp.a = par.z;
    bvp.b = beta;
    bvp.rhs.resize(n);
    for (std::size_t i = 0; i < n; ++i) bvp.rhs[i] = -par.p * blk.w.v[i];
    bvp.right = numerics::RightBC::neumann;
    bvp.right_value = 0.0;
    blk.sigma = numerics::Profile(n);
    blk.sigma.v = numerics::solve_interval_bvp(bvp);
    for (std::size_t i = 0; i < n; ++i)
        blk.sigma.d2[i] = (-beta * blk.sigma.v[i] - par.p * blk.w.v[i]) / par.z;
    blk.sigma.d1 = numerics::cumint4(blk.sigma.d2, g.h); // even field: sigma'(0) = 0

    const double km = bp.k0_hat * ss.m0;
    blk.m = numerics::Profile(n);
    for (std::size_t i = 0; i < n; ++i) {
        blk.m.v[i] = km * blk.sigma.v[i] + blk.w.v[i];
        blk.m.d1[i] = km * blk.sigma.d1[i] + blk.w.d1[i];
        blk.m.d2[i] = km * blk.sigma.d2[i] + blk.w.d2[i];
    }
    blk.rho = -0.5 * blk.sigma.v.back();

    // Mass constraint: int_0^L0 m2 dy + m0 rho2 = 0 under the w -> w + c shift.
    const double defect = numerics::integrate4(blk.m.v, g.h) + ss.m0 * blk.rho;
    const double delta1 = -par.p / beta;
    const double rate = (km * delta1 + 1.0) * g.r_max - 0.5 * ss.m0 * delta1;
    if (std::abs(rate) < 1e-14)
        throw degenerate_denominator_error("1D second order: mass-constraint rate vanishes");
    blk.shift = -defect / rate;
    const double dsig = delta1 * blk.shift;
    for (std::size_t i = 0; i < n; ++i) {
        blk.w.v[i] += blk.shift;
        blk.sigma.v[i] += dsig;
        blk.m.v[i] += km * dsig + blk.shift;
    }
    blk.rho += -0.5 * dsig;
    return blk;
}

} // namespace detail

/// Build the full 1D workspace through the third-order source.
inline OneDWorkspace build_oned_workspace(const PhysParams& par, const DiffusionModel& model,
                                          const K2Options& opt = {}) {
    OneDWorkspace ws;
    ws.ss = oned_steady(par);
    {
        SteadyState proxy;
        proxy.m0 = ws.ss.m0;
        ws.dd = diffusion_at_steady(model, proxy);
    }
    ws.bp = oned_k0(par, ws.ss, ws.dd.d0, opt.tol_root);
    const int n = opt.grid_n > 0 ? opt.grid_n : numerics::default_grid_n();
    ws.grid = numerics::Grid(ws.ss.l0, n);
    const numerics::Grid& g = ws.grid;
    const std::size_t nn = g.size();

    // First order: sigma = A y + B sin(omega y), m = K0h m0 sigma - m0 y.
    OneDFirstOrder& fo = ws.fo;
    fo.beta = par.p * ws.bp.k0_hat * ws.ss.m0 - 1.0;
    if (!(fo.beta > 0.0))
        throw subcritical_k_error("1D first order: P K0_hat m0 - 1 must be positive");
    fo.omega = ws.bp.alpha / ws.ss.l0;
    fo.a_hat = par.p * ws.ss.m0 / fo.beta;
    fo.b_hat = -fo.a_hat * ws.ss.l0 / std::sin(ws.bp.alpha);
    fo.sigma = numerics::Profile(nn);
    fo.m = numerics::Profile(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        const double y = g.r[i];
        const double s = std::sin(fo.omega * y), c = std::cos(fo.omega * y);
        fo.sigma.v[i] = fo.a_hat * y + fo.b_hat * s;
        fo.sigma.d1[i] = fo.a_hat + fo.b_hat * fo.omega * c;
        fo.sigma.d2[i] = -fo.b_hat * fo.omega * fo.omega * s;
        const double km = ws.bp.k0_hat * ws.ss.m0;
        fo.m.v[i] = km * fo.sigma.v[i] - ws.ss.m0 * y;
        fo.m.d1[i] = km * fo.sigma.d1[i] - ws.ss.m0;
        fo.m.d2[i] = km * fo.sigma.d2[i];
    }
    fo.sigma_pp_l0 = fo.sigma.d2.back();

    // Second order: w_A from the advection/translation first integral, w_B
    // from the diffusion-slope one; both even with w'(L0) = 0 built in.
    const double k0h = ws.bp.k0_hat;
    {
        numerics::Profile w(nn);
        for (std::size_t i = 0; i < nn; ++i)
            w.d1[i] = k0h * fo.m.v[i] * fo.sigma.d1[i] - fo.m.v[i];
        w.v = numerics::cumint4(w.d1, g.h);
        for (std::size_t i = 0; i < nn; ++i)
            w.d2[i] = k0h * (fo.m.d1[i] * fo.sigma.d1[i] + fo.m.v[i] * fo.sigma.d2[i]) -
                      fo.m.d1[i];
        ws.a = detail::oned_block(g, par, ws.ss, ws.bp, fo, std::move(w));
    }
    {
        numerics::Profile w(nn);
        for (std::size_t i = 0; i < nn; ++i) {
            w.v[i] = -0.5 * fo.m.v[i] * fo.m.v[i];
            w.d1[i] = -fo.m.v[i] * fo.m.d1[i];
            w.d2[i] = -(fo.m.d1[i] * fo.m.d1[i] + fo.m.v[i] * fo.m.d2[i]);
        }
        ws.b = detail::oned_block(g, par, ws.ss, ws.bp, fo, std::move(w));
    }

    // Third-order source blocks (hatted first integrals).
    const double c_mix = cubic_mix(opt.policy);
    const double c_self = cubic_self(opt.policy);
    ws.g1.resize(nn);
    ws.g2.resize(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        const double m1 = fo.m.v[i];
        ws.g1[i] = -c_self * m1 * m1 * m1;
        ws.g2[i] = -c_mix * m1 * ws.b.m.v[i];
    }
    const auto transport = [&](const OneDSecondOrder& blk) {
        std::vector<double> t(nn), acc;
        for (std::size_t i = 0; i < nn; ++i)
            t[i] = fo.m.v[i] * blk.sigma.d1[i] + blk.m.v[i] * fo.sigma.d1[i];
        acc = numerics::cumint4(t, g.h);
        const std::vector<double> im = numerics::cumint4(blk.m.v, g.h);
        std::vector<double> out(nn);
        for (std::size_t i = 0; i < nn; ++i) out[i] = k0h * acc[i] - im[i];
        return out;
    };
    ws.g3 = transport(ws.b);
    for (std::size_t i = 0; i < nn; ++i) ws.g3[i] += -c_mix * fo.m.v[i] * ws.a.m.v[i];
    ws.g4 = transport(ws.a);

    const double d = ws.dd.d0, dp = ws.dd.d1, dpp = ws.dd.d2;
    ws.g_split.resize(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        ws.g_split[i] = dpp / (d * d * d * d) * ws.g1[i] +
                        dp * dp / (d * d * d * d * d) * ws.g2[i] +
                        dp / (d * d * d * d) * ws.g3[i] + 1.0 / (d * d * d) * ws.g4[i];
    }

    // Unsplit physical assembly for the dual-path check.
    {
        const double ca = 1.0 / (d * d), cb = dp / (d * d * d);
        std::vector<double> m1(nn), s1p(nn), mm(nn), sp(nn), trans(nn);
        for (std::size_t i = 0; i < nn; ++i) {
            m1[i] = fo.m.v[i] / d;
            s1p[i] = fo.sigma.d1[i] / d;
            mm[i] = ca * ws.a.m.v[i] + cb * ws.b.m.v[i];
            sp[i] = ca * ws.a.sigma.d1[i] + cb * ws.b.sigma.d1[i];
            trans[i] = m1[i] * sp[i] + mm[i] * s1p[i];
        }
        const std::vector<double> acc = numerics::cumint4(trans, g.h);
        const std::vector<double> im = numerics::cumint4(mm, g.h);
        ws.g_total.resize(nn);
        double scale = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < nn; ++i) {
            ws.g_total[i] = (ws.bp.k0 * acc[i] - im[i] - c_self * dpp * m1[i] * m1[i] * m1[i] -
                             c_mix * dp * m1[i] * mm[i]) /
                            d;
            scale = std::max(scale, std::abs(ws.g_split[i]));
            diff = std::max(diff, std::abs(ws.g_split[i] - ws.g_total[i]));
        }
        ws.split_mismatch = diff / std::max(1.0, scale);
    }
    return ws;
}

/// Pair the 1D workspace against U = sin(omega y)/sin(alpha).
inline OneDReport oned_pair(const OneDWorkspace& ws, const PhysParams& par,
                            const K2Options& opt = {}) {
    const numerics::Grid& g = ws.grid;
    const std::size_t n = g.size();
    const double l0 = ws.ss.l0, m0 = ws.ss.m0;
    const double d = ws.dd.d0, dp = ws.dd.d1, dpp = ws.dd.d2;
    const double alpha = ws.bp.alpha, omega = ws.fo.omega;
    const double k0h = ws.bp.k0_hat, k0 = ws.bp.k0;
    const double sin_a = std::sin(alpha), cos_a = std::cos(alpha);
    if (std::abs(sin_a) < 1e-12)
        throw degenerate_test_function_error("1D test function: sin(alpha) = 0");

    // int_0^L0 U sigma1_hat dy in closed form.
    const double int_y_sin = (sin_a - alpha * cos_a) / (omega * omega);
    const double int_sin2 = 0.5 * l0 - std::sin(2.0 * alpha) / (4.0 * omega);
    const double iusig = (ws.fo.a_hat * int_y_sin + ws.fo.b_hat * int_sin2) / sin_a;

    const double a0 = par.z / (k0h * k0h) - par.p * m0 * iusig;
    if (std::abs(a0) <= 1e-9 * (std::abs(par.z / (k0h * k0h)) + std::abs(par.p * m0 * iusig)))
        throw degenerate_denominator_error("1D pairing denominator A0 vanishes");

    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = std::sin(omega * g.r[i]) / sin_a;
    const auto pair_with = [&](const std::vector<double>& src) {
        std::vector<double> prod(n);
        for (std::size_t i = 0; i < n; ++i) prod[i] = u[i] * src[i];
        return numerics::integrate4(prod, g.h);
    };

    const double t_bnd = ws.fo.sigma_pp_l0 - (alpha / l0) * (cos_a / sin_a) / k0h;
    OneDReport rep;
    rep.a0 = a0;
    rep.a1 = par.p * pair_with(ws.g1) / a0;
    rep.a2 = par.p * pair_with(ws.g2) / a0;
    rep.a3 = (par.p * pair_with(ws.g3) - par.z * ws.b.rho * t_bnd) / a0;
    rep.a4 = (par.p * pair_with(ws.g4) - par.z * ws.a.rho * t_bnd) / a0;
    rep.k2 = rep.a1 * dpp / (d * d) + rep.a2 * dp * dp / (d * d * d) + rep.a3 * dp / (d * d) +
             rep.a4 / d;

    // Direct path on the unsplit physical source.
    rep.rho2 = ws.a.rho / (d * d) + dp * ws.b.rho / (d * d * d);
    {
        const double num = par.p * pair_with(ws.g_total) -
                           par.z * rep.rho2 *
                               (ws.fo.sigma_pp_l0 / d - (alpha / l0) * (cos_a / sin_a) / k0);
        const double den = par.z / (k0 * k0) - par.p * (m0 / d) * (iusig / d);
        if (std::abs(den) <= 1e-300)
            throw degenerate_denominator_error("1D direct-path denominator vanishes");
        rep.k2_direct = num / den;
    }

    rep.dual_path_rel_err = std::abs(rep.k2 - rep.k2_direct) / std::max(1.0, std::abs(rep.k2));
    rep.k0 = k0;
    rep.k0_hat = k0h;
    rep.alpha = alpha;
    rep.psi = ws.bp.psi;
    rep.l0 = l0;
    rep.m0 = m0;
    rep.d0 = d;
    rep.split_mismatch = ws.split_mismatch;
    rep.policy = opt.policy;
    rep.verdict = classify_k2(rep.k2);
    return rep;
}

/// Full 1D curvature pipeline.
inline OneDReport oned_k2(const PhysParams& par, const DiffusionModel& model,
                          const K2Options& opt = {}) {
    return oned_pair(build_oned_workspace(par, model, opt), par, opt);
}

// ============================================================================
// 1D finite-difference oracle
// ============================================================================

namespace detail {

inline double oned_oracle_level(const OneDWorkspace& ws, const PhysParams& par, int n_level) {
    const int stride = ws.grid.n / n_level;
    const std::vector<double> src = numerics::restrict_to(ws.g_total, stride);
    const numerics::Grid g(ws.ss.l0, n_level);
    const std::size_t n = g.size();
    const double h = g.h;
    const double d = ws.dd.d0, dp = ws.dd.d1;
    const double k0 = ws.bp.k0, beta = ws.fo.beta;
    const double rho2 = ws.a.rho / (d * d) + dp * ws.b.rho / (d * d * d);

    numerics::BandedMatrix mat(static_cast<int>(n), 2, 2);
    std::vector<double> b(n, 0.0), c(n, 0.0);
    mat.at(0, 0) = 1.0; // sigma3 is odd
    for (int i = 1; i + 1 < static_cast<int>(n); ++i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        mat.at(i, i - 1) = par.z / (h * h);
        mat.at(i, i) = -2.0 * par.z / (h * h) + beta;
        mat.at(i, i + 1) = par.z / (h * h);
        b[ui] = -par.p * src[ui];
        c[ui] = par.p * ws.ss.m0 / d * (ws.fo.sigma_at(g.r[ui]) / d);
    }
    const int last = static_cast<int>(n) - 1;
    mat.at(last, last) = 1.0;
    b[static_cast<std::size_t>(last)] = -rho2 / k0;

    const double norm_a = mat.norm_inf();
    mat.factor();
    numerics::detail::check_conditioning(mat, norm_a, "oned_oracle_level");
    const std::vector<double> x = mat.solve(b);
    const std::vector<double> y = mat.solve(c);

    const auto d_dot = [&](const std::vector<double>& v) {
        return k0 * (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    };
    const double e = 1.0 / k0;
    const double g_rhs = -k0 * rho2 * (ws.fo.sigma_pp_l0 / d);
    const double den = e - d_dot(y);
    if (std::abs(den) <= 1e-12 * std::max(1.0, std::abs(e)))
        throw transversality_error("1D oracle: kinematic closure is singular");
    return (g_rhs - d_dot(x)) / den;
}

} // namespace detail

/// 1D analogue of the radial oracle ladder.
inline OracleReport oned_oracle_k2(const PhysParams& par, const DiffusionModel& model,
                                   const K2Options& opt = {}) {
    K2Options master = opt;
    master.grid_n = opt.grid_n > 0 ? opt.grid_n : 2048;
    if (master.grid_n % 4 != 0 || master.grid_n < 64)
        throw config_error("oned_oracle_k2: master grid must be a multiple of 4, at least 64");
    const OneDWorkspace ws = build_oned_workspace(par, model, master);
    const OneDReport rep = oned_pair(ws, par, master);

    OracleReport out;
    out.k2_coarse = detail::oned_oracle_level(ws, par, master.grid_n / 4);
    out.k2_mid = detail::oned_oracle_level(ws, par, master.grid_n / 2);
    out.k2_fine = detail::oned_oracle_level(ws, par, master.grid_n);
    const double e_coarse = std::abs(out.k2_coarse - out.k2_mid);
    const double e_fine = std::abs(out.k2_mid - out.k2_fine);
    out.order = (e_fine > 0.0) ? std::log2(e_coarse / e_fine) : 2.0;
    out.k2_oracle = out.k2_fine + (out.k2_fine - out.k2_mid) / 3.0;
    out.k2_pipeline = rep.k2;
    out.rel_err = std::abs(out.k2_oracle - out.k2_pipeline) / std::max(1.0, std::abs(rep.k2));
    return out;
}

// ============================================================================
// Critical attraction strength
// ============================================================================

/// Location of the direct/inverse pitchfork transition along e_A.
struct CriticalEa {
    double ea_star = 0.0;
    double k2_at_star = 0.0;
    double k2_at_zero = 0.0;
    double k2_at_one = 0.0;
    CubicPolicy policy = CubicPolicy::taylor;
};

/**
 * @brief Find e_A in [0, 1] where the 1D K2 changes sign for the van der
 *        Waals family at fixed m_inf.
 *
 * @throws no_transition_error when K2 keeps one sign on [0, 1]
 */
inline CriticalEa critical_ea(const PhysParams& par, double m_inf, const K2Options& opt = {}) {
    const auto k2_of = [&](double ea) {
        return oned_k2(par, DiffusionModel::van_der_waals(m_inf, ea), opt).k2;
    };
    CriticalEa out;
    out.policy = opt.policy;
    out.k2_at_zero = k2_of(0.0);
    out.k2_at_one = k2_of(1.0);
    if ((out.k2_at_zero > 0.0) == (out.k2_at_one > 0.0))
        throw no_transition_error("K2 keeps one sign on e_A in [0, 1]: K2(0) = " +
                                  std::to_string(out.k2_at_zero) + ", K2(1) = " +
                                  std::to_string(out.k2_at_one));
    const auto root = numerics::find_root(k2_of, 0.0, 1.0, 1e-12);
    out.ea_star = root.x;
    out.k2_at_star = root.fx;
    return out;
}

} // namespace cellbif

#endif // CELLBIF_ONED_HPP
