#ifndef CELLBIF_ORACLE_HPP
#define CELLBIF_ORACLE_HPP

/**
 * @file oracle.hpp
 * @brief Brute-force finite-difference check of the curvature K2.
 *
 * Instead of pairing the third-order source against the homogeneous solution,
 * this path discretizes the third-order sigma problem directly and treats K2
 * as an extra unknown closed by the kinematic boundary row:
 *   Z L1[sigma3] + beta sigma3 + K2 (P m0 / D) sigma1 = -P (C1 r + phi)
 *   sigma3(0) = 0,  sigma3(R0) = -Sigma / K0,
 *   K0 sigma3'(R0) + K2 / K0 = -K0 Sigma sigma1''(R0) - rho22 / R0.
 * The arrowhead system is solved at three nested resolutions with the source
 * restricted from the finest grid; second-order convergence of the K2 values
 * validates the pairing formula independently of its derivation.
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

namespace cellbif {

/// Finite-difference oracle result across the resolution ladder.
struct OracleReport {
    double k2_oracle = 0.0;   ///< Richardson-extrapolated value
    double k2_coarse = 0.0;   ///< quarter resolution
    double k2_mid = 0.0;      ///< half resolution
    double k2_fine = 0.0;     ///< full resolution
    double order = 0.0;       ///< observed convergence order
    double k2_pipeline = 0.0; ///< Green-pairing value on the same workspace
    double rel_err = 0.0;     ///< |k2_oracle - k2_pipeline| / max(1, |k2_pipeline|)
};

namespace detail {

/// Solve the arrowhead system at one resolution.
inline double oracle_level(const K2Workspace& ws, const PhysParams& par, int n_level) {
    const int master_n = ws.grid.n;
    const int stride = master_n / n_level;
    const std::vector<double> f = numerics::restrict_to(ws.src.f_total, stride);
    const numerics::Grid g(ws.ss.r0, n_level);
    const std::size_t n = g.size();
    const double h = g.h;
    const double d = ws.dd.d0, dp = ws.dd.d1;
    const double k0 = ws.bp.k0;
    const double beta = ws.fo.beta;
    const double r0 = ws.ss.r0;

    // Physical shape data shared by the boundary rows.
    const double ca = 1.0 / (d * d), cb = dp / (d * d * d);
    const double rho20 = ca * ws.so.a.n0.rho + cb * ws.so.b.n0.rho;
    const double rho22 = ca * ws.so.a.n2.rho + cb * ws.so.b.n2.rho;
    const double big_sigma = rho20 + 0.5 * rho22;
    const double sig1_pp_r0 = ws.fo.sigma_pp_r0 / d;

    // phi and C1 from the restricted source by trapezoidal sums, matching the
    // second-order truncation of the difference stencils.
    std::vector<double> s2f(n);
    for (std::size_t i = 0; i < n; ++i) s2f[i] = g.r[i] * g.r[i] * f[i];
    const std::vector<double> cf = numerics::cumtrapz(f, h);
    const std::vector<double> cs = numerics::cumtrapz(s2f, h);
    std::vector<double> phi(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        phi[i] = (g.r[i] * (cf.back() - cf[i]) + cs[i] / g.r[i]) / (2.0 * d);
    const double c1 = cs.back() / (2.0 * d * r0 * r0);

    numerics::BandedMatrix mat(static_cast<int>(n), 2, 2);
    std::vector<double> b(n, 0.0), c(n, 0.0);
    mat.at(0, 0) = 1.0;
    for (int i = 1; i + 1 < static_cast<int>(n); ++i) {
        const double r = g.r[static_cast<std::size_t>(i)];
        mat.at(i, i - 1) = par.z * (1.0 / (h * h) - 1.0 / (2.0 * h * r));
        mat.at(i, i) = par.z * (-2.0 / (h * h) - 1.0 / (r * r)) + beta;
        mat.at(i, i + 1) = par.z * (1.0 / (h * h) + 1.0 / (2.0 * h * r));
        const std::size_t ui = static_cast<std::size_t>(i);
        b[ui] = -par.p * (c1 * r + phi[ui]);
        c[ui] = par.p * ws.ss.m0 / d * (ws.fo.sigma_at(r) / d);
    }
    const int last = static_cast<int>(n) - 1;
    mat.at(last, last) = 1.0;
    b[static_cast<std::size_t>(last)] = -big_sigma / k0;

    const double norm_a = mat.norm_inf();
    mat.factor();
    numerics::detail::check_conditioning(mat, norm_a, "oracle_level");
    const std::vector<double> x = mat.solve(b);
    const std::vector<double> y = mat.solve(c);

    // Kinematic closure: d^T sigma + e K2 = g_rhs with sigma = x - K2 y.
    const auto d_dot = [&](const std::vector<double>& v) {
        return k0 * (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    };
    const double e = 1.0 / k0;
    const double g_rhs = -k0 * big_sigma * sig1_pp_r0 - rho22 / r0;
    const double den = e - d_dot(y);
    if (std::abs(den) <= 1e-12 * std::max(1.0, std::abs(e)))
        throw transversality_error("oracle: kinematic closure is singular, |e - d.y| = " +
                                   std::to_string(std::abs(den)));
    return (g_rhs - d_dot(x)) / den;
}

} // namespace detail

/**
 * @brief Run the oracle ladder and compare with the pairing pipeline.
 *
 * The master grid (default 2048 intervals, must be divisible by 4) carries the
 * third-order source; the arrowhead system is solved at N/4, N/2 and N with
 * the source restricted by stride, and Richardson extrapolation of the two
 * finest values gives the reported oracle K2.
 */
inline OracleReport oracle_k2(const PhysParams& par, const DiffusionModel& model,
                              const K2Options& opt = {}) {
    K2Options master = opt;
    master.grid_n = opt.grid_n > 0 ? opt.grid_n : 2048;
    if (master.grid_n % 4 != 0 || master.grid_n < 64)
        throw config_error("oracle_k2: master grid must be a multiple of 4 and at least 64, got " +
                           std::to_string(master.grid_n));
    const K2Workspace ws = build_k2_workspace(par, model, master);
    const K2Report rep = pair_k2(ws, par, master);

    OracleReport out;
    out.k2_coarse = detail::oracle_level(ws, par, master.grid_n / 4);
    out.k2_mid = detail::oracle_level(ws, par, master.grid_n / 2);
    out.k2_fine = detail::oracle_level(ws, par, master.grid_n);
    const double e_coarse = std::abs(out.k2_coarse - out.k2_mid);
    const double e_fine = std::abs(out.k2_mid - out.k2_fine);
    out.order = (e_fine > 0.0) ? std::log2(e_coarse / e_fine) : 2.0;
    out.k2_oracle = out.k2_fine + (out.k2_fine - out.k2_mid) / 3.0;
    out.k2_pipeline = rep.k2;
    out.rel_err = std::abs(out.k2_oracle - out.k2_pipeline) / std::max(1.0, std::abs(rep.k2));
    return out;
}

} // namespace cellbif

#endif // CELLBIF_ORACLE_HPP
