#ifndef CELLBIF_NUMERICS_GRID_HPP
#define CELLBIF_NUMERICS_GRID_HPP

/**
 * @file grid.hpp
 * @brief Uniform radial/interval grids, profile containers, and cumulative
 *        quadrature.
 *
 * Profiles carry values and analytically propagated first and second
 * derivatives; the expansion layers never difference grid data, so profile
 * derivative accuracy is set by the formulas, not by h.
 */

#include <cstddef>
#include <cstdlib>
#include <string>
#include <vector>

#include "../errors.hpp"

namespace cellbif::numerics {

// ============================================================================
// Grid
// ============================================================================

/// Uniform grid on [0, r_max] with n intervals (n + 1 nodes).
struct Grid {
    double r_max = 1.0;
    int n = 0;          ///< number of intervals
    double h = 0.0;     ///< spacing
    std::vector<double> r;

    Grid() = default;
    Grid(double r_max_, int n_) : r_max(r_max_), n(n_) {
        if (n < 8) throw config_error("Grid: need at least 8 intervals, got " + std::to_string(n));
        h = r_max / n;
        r.resize(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) r[static_cast<std::size_t>(i)] = r_max * i / n;
    }

    std::size_t size() const { return r.size(); }
};

/// Default grid resolution; MOTILITY_BIF_GRID overrides, CLI --grid wins.
inline int default_grid_n() {
    if (const char* env = std::getenv("MOTILITY_BIF_GRID")) {
        const int v = std::atoi(env);
        if (v >= 8) return v;
    }
    return 2048;
}

// ============================================================================
// Profile
// ============================================================================

/// Radial (or interval) profile with analytic derivative channels.
struct Profile {
    std::vector<double> v;  ///< values at grid nodes
    std::vector<double> d1; ///< first derivative at grid nodes
    std::vector<double> d2; ///< second derivative at grid nodes

    Profile() = default;
    explicit Profile(std::size_t n_nodes) : v(n_nodes, 0.0), d1(n_nodes, 0.0), d2(n_nodes, 0.0) {}

    std::size_t size() const { return v.size(); }

    Profile& scale(double s) {
        for (auto& x : v) x *= s;
        for (auto& x : d1) x *= s;
        for (auto& x : d2) x *= s;
        return *this;
    }
};

// ============================================================================
// Cumulative quadrature
// ============================================================================

/**
 * @brief Fourth-order cumulative integral of nodal data on a uniform grid.
 *
 * Interior step: I_{i+1} = I_i + h/24 (-y_{i-1} + 13 y_i + 13 y_{i+1} - y_{i+2});
 * one-sided 4-point stencils close the two boundary steps.  Exact for cubics.
 *
 * @return vector I with I[0] = 0 and I[i] = int_0^{r_i} y dr
 */
inline std::vector<double> cumint4(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    if (n < 4) throw config_error("cumint4: need at least 4 nodes");
    std::vector<double> out(n, 0.0);
    out[1] = out[0] + h / 24.0 * (9.0 * y[0] + 19.0 * y[1] - 5.0 * y[2] + y[3]);
    for (std::size_t i = 1; i + 2 < n; ++i)
        out[i + 1] = out[i] + h / 24.0 * (-y[i - 1] + 13.0 * y[i] + 13.0 * y[i + 1] - y[i + 2]);
    out[n - 1] = out[n - 2] +
                 h / 24.0 * (9.0 * y[n - 1] + 19.0 * y[n - 2] - 5.0 * y[n - 3] + y[n - 4]);
    return out;
}

/// Total integral of nodal data (end value of cumint4).
inline double integrate4(const std::vector<double>& y, double h) {
    return cumint4(y, h).back();
}

/// Second-order cumulative trapezoid sums (used by the finite-difference
/// oracle so its convergence order stays uniformly two).
inline std::vector<double> cumtrapz(const std::vector<double>& y, double h) {
    std::vector<double> out(y.size(), 0.0);
    for (std::size_t i = 1; i < y.size(); ++i)
        out[i] = out[i - 1] + 0.5 * h * (y[i - 1] + y[i]);
    return out;
}

/// Restrict nodal data to a coarser grid whose interval count divides n.
inline std::vector<double> restrict_to(const std::vector<double>& y, int stride) {
    std::vector<double> out;
    out.reserve((y.size() - 1) / static_cast<std::size_t>(stride) + 1);
    for (std::size_t i = 0; i < y.size(); i += static_cast<std::size_t>(stride)) out.push_back(y[i]);
    return out;
}

} // namespace cellbif::numerics

#endif // CELLBIF_NUMERICS_GRID_HPP
