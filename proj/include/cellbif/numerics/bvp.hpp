#ifndef CELLBIF_NUMERICS_BVP_HPP
#define CELLBIF_NUMERICS_BVP_HPP

/**
 * @file bvp.hpp
 * @brief Second-order finite-difference boundary-value solver on uniform
 *        grids, backed by a banded LU with partial pivoting.
 *
 * Operators:
 *   radial    a (u'' + u'/r - n^2 u / r^2) + b u = rhs,  r in (0, r_max)
 *   cartesian a u'' + b u = rhs,                         y in (0, y_max)
 *
 * Left boundary: regularity (radial n >= 1: u(0) = 0; n = 0: u'(0) = 0) or
 * parity (cartesian even: u'(0) = 0; odd: u(0) = 0).  Right boundary:
 * Dirichlet or one-sided second-order Neumann.  Exactly one right condition
 * makes the system square; the augmented (two-condition, one free scalar)
 * variant lives in the oracle module on top of the same banded core.
 *
 * Every factorization runs a cheap inverse-iteration estimate of the smallest
 * singular value; resonant systems raise near_singularity_error instead of
 * returning garbage.
 */

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "grid.hpp"

namespace cellbif::numerics {

// ============================================================================
// Banded LU (kl = ku = 2)
// ============================================================================

/// General banded matrix with partial-pivoting LU, LAPACK-style band storage.
class BandedMatrix {
public:
    BandedMatrix(int n, int kl, int ku)
        : n_(n), kl_(kl), ku_(ku), rows_(2 * kl + ku + 1),
          a_(static_cast<std::size_t>(rows_) * n_, 0.0), ipiv_(static_cast<std::size_t>(n_), 0) {}

    /// Mutable element A(i, j); (i, j) must lie inside the band.
    double& at(int i, int j) { return a_[idx(i, j)]; }
    double get(int i, int j) const { return a_[idx(i, j)]; }

    int size() const { return n_; }

    /// Infinity norm of the assembled matrix (call before factor()).
    double norm_inf() const {
        double best = 0.0;
        for (int i = 0; i < n_; ++i) {
            double s = 0.0;
            for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
                s += std::abs(get(i, j));
            best = std::max(best, s);
        }
        return best;
    }

    /// Factor in place; throws near_singularity_error on an exact zero pivot.
    void factor() {
        for (int j = 0; j < n_; ++j) {
            const int last_row = std::min(n_ - 1, j + kl_);
            int piv = j;
            double pmax = std::abs(a_[idx(j, j)]);
            for (int i = j + 1; i <= last_row; ++i) {
                const double v = std::abs(a_[idx(i, j)]);
                if (v > pmax) {
                    pmax = v;
                    piv = i;
                }
            }
            ipiv_[static_cast<std::size_t>(j)] = piv;
            if (pmax == 0.0)
                throw near_singularity_error(
                    "banded LU: exact zero pivot at column " + std::to_string(j) +
                    " (estimated smallest singular value 0)");
            const int last_col = std::min(n_ - 1, j + kl_ + ku_);
            if (piv != j)
                for (int k = j; k <= last_col; ++k) std::swap(a_[idx(j, k)], a_[idx(piv, k)]);
            const double d = a_[idx(j, j)];
            for (int i = j + 1; i <= last_row; ++i) {
                const double l = a_[idx(i, j)] / d;
                a_[idx(i, j)] = l;
                for (int k = j + 1; k <= last_col; ++k) a_[idx(i, k)] -= l * a_[idx(j, k)];
            }
        }
        factored_ = true;
    }

    /// Solve A x = b using the stored factorization.
    std::vector<double> solve(std::vector<double> b) const {
        for (int j = 0; j < n_; ++j) {
            const int piv = ipiv_[static_cast<std::size_t>(j)];
            if (piv != j) std::swap(b[static_cast<std::size_t>(j)], b[static_cast<std::size_t>(piv)]);
            const int last_row = std::min(n_ - 1, j + kl_);
            for (int i = j + 1; i <= last_row; ++i)
                b[static_cast<std::size_t>(i)] -= a_[idx(i, j)] * b[static_cast<std::size_t>(j)];
        }
        for (int j = n_ - 1; j >= 0; --j) {
            const int last_col = std::min(n_ - 1, j + kl_ + ku_);
            double s = b[static_cast<std::size_t>(j)];
            for (int k = j + 1; k <= last_col; ++k) s -= a_[idx(j, k)] * b[static_cast<std::size_t>(k)];
            b[static_cast<std::size_t>(j)] = s / a_[idx(j, j)];
        }
        return b;
    }

    bool factored() const { return factored_; }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(kl_ + ku_ + i - j) * n_ + j; }

    int n_, kl_, ku_, rows_;
    std::vector<double> a_;
    std::vector<int> ipiv_;
    bool factored_ = false;
};

namespace detail {

/// Estimate the smallest singular value of a factored system by a few steps
/// of inverse iteration from a fixed alternating seed; raise if the estimated
/// reciprocal condition falls below threshold.
inline void check_conditioning(const BandedMatrix& lu, double norm_a, const char* what,
                               double rcond_threshold = 1e-13) {
    const int n = lu.size();
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = (i % 2 == 0) ? 1.0 : -1.0;
    double growth = 0.0;
    for (int it = 0; it < 4; ++it) {
        std::vector<double> y = lu.solve(x);
        double norm = 0.0;
        for (double v : y) norm = std::max(norm, std::abs(v));
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw near_singularity_error(std::string(what) +
                                         ": singular system (estimated smallest singular value 0)");
        for (std::size_t i = 0; i < y.size(); ++i) x[i] = y[i] / norm;
        growth = norm;
    }
    const double sigma_min_est = 1.0 / growth;
    if (sigma_min_est < rcond_threshold * norm_a)
        throw near_singularity_error(
            std::string(what) + ": near-singular system, estimated smallest singular value " +
            std::to_string(sigma_min_est) + " against matrix norm " + std::to_string(norm_a));
}

} // namespace detail

// ============================================================================
// Boundary-value problems
// ============================================================================

/// Right boundary condition kind.
enum class RightBC { dirichlet, neumann };

/// Radial problem a (u'' + u'/r - n^2 u/r^2) + b u = rhs on the grid.
struct RadialBVP {
    const Grid* grid = nullptr;
    int n_mode = 0;       ///< angular mode (0, 1, or 2)
    double a = 1.0;       ///< second-order coefficient (constant)
    double b = 0.0;       ///< zeroth-order coefficient (constant)
    std::vector<double> rhs;
    RightBC right = RightBC::dirichlet;
    double right_value = 0.0;
};

namespace detail {

inline BandedMatrix assemble_common(int n_nodes) { return BandedMatrix(n_nodes, 2, 2); }

} // namespace detail

/**
 * @brief Solve a radial BVP with second-order central differences.
 *
 * Regularity row at r = 0: u(0) = 0 for n_mode >= 1, one-sided u'(0) = 0 for
 * n_mode = 0.  Right row: Dirichlet value or one-sided second-order Neumann.
 *
 * @return nodal values of u
 * @throws near_singularity_error when the discrete operator is resonant
 */
inline std::vector<double> solve_radial_bvp(const RadialBVP& p) {
    const Grid& g = *p.grid;
    const int n = g.n;
    const double h = g.h;
    if (p.rhs.size() != g.size()) throw config_error("solve_radial_bvp: rhs size mismatch");

    BandedMatrix mat = detail::assemble_common(n + 1);
    std::vector<double> rhs(static_cast<std::size_t>(n) + 1, 0.0);

    if (p.n_mode >= 1) {
        mat.at(0, 0) = 1.0;
        rhs[0] = 0.0;
    } else {
        // u'(0) = 0, one-sided second order: (-3 u0 + 4 u1 - u2) / (2h) = 0
        mat.at(0, 0) = -3.0 / (2.0 * h);
        mat.at(0, 1) = 4.0 / (2.0 * h);
        mat.at(0, 2) = -1.0 / (2.0 * h);
        rhs[0] = 0.0;
    }
    const double nn = static_cast<double>(p.n_mode) * p.n_mode;
    for (int i = 1; i < n; ++i) {
        const double r = g.r[static_cast<std::size_t>(i)];
        mat.at(i, i - 1) = p.a * (1.0 / (h * h) - 1.0 / (2.0 * h * r));
        mat.at(i, i) = p.a * (-2.0 / (h * h) - nn / (r * r)) + p.b;
        mat.at(i, i + 1) = p.a * (1.0 / (h * h) + 1.0 / (2.0 * h * r));
        rhs[static_cast<std::size_t>(i)] = p.rhs[static_cast<std::size_t>(i)];
    }
    if (p.right == RightBC::dirichlet) {
        mat.at(n, n) = 1.0;
        rhs[static_cast<std::size_t>(n)] = p.right_value;
    } else {
        mat.at(n, n) = 3.0 / (2.0 * h);
        mat.at(n, n - 1) = -4.0 / (2.0 * h);
        mat.at(n, n - 2) = 1.0 / (2.0 * h);
        rhs[static_cast<std::size_t>(n)] = p.right_value;
    }

    const double norm_a = mat.norm_inf();
    mat.factor();
    detail::check_conditioning(mat, norm_a, "solve_radial_bvp");
    return mat.solve(std::move(rhs));
}

/// Parity of a field on the symmetric interval, fixing the left row.
enum class Parity { even, odd };

/// Cartesian problem a u'' + b u = rhs on [0, y_max].
struct IntervalBVP {
    const Grid* grid = nullptr;
    Parity parity = Parity::even;
    double a = 1.0;
    double b = 0.0;
    std::vector<double> rhs;
    RightBC right = RightBC::dirichlet;
    double right_value = 0.0;
};

/// Solve the interval problem; same discretization orders as the radial case.
inline std::vector<double> solve_interval_bvp(const IntervalBVP& p) {
    const Grid& g = *p.grid;
    const int n = g.n;
    const double h = g.h;
    if (p.rhs.size() != g.size()) throw config_error("solve_interval_bvp: rhs size mismatch");

    BandedMatrix mat = detail::assemble_common(n + 1);
    std::vector<double> rhs(static_cast<std::size_t>(n) + 1, 0.0);

    if (p.parity == Parity::odd) {
        mat.at(0, 0) = 1.0;
    } else {
        mat.at(0, 0) = -3.0 / (2.0 * h);
        mat.at(0, 1) = 4.0 / (2.0 * h);
        mat.at(0, 2) = -1.0 / (2.0 * h);
    }
    rhs[0] = 0.0;
    for (int i = 1; i < n; ++i) {
        mat.at(i, i - 1) = p.a / (h * h);
        mat.at(i, i) = -2.0 * p.a / (h * h) + p.b;
        mat.at(i, i + 1) = p.a / (h * h);
        rhs[static_cast<std::size_t>(i)] = p.rhs[static_cast<std::size_t>(i)];
    }
    if (p.right == RightBC::dirichlet) {
        mat.at(n, n) = 1.0;
        rhs[static_cast<std::size_t>(n)] = p.right_value;
    } else {
        mat.at(n, n) = 3.0 / (2.0 * h);
        mat.at(n, n - 1) = -4.0 / (2.0 * h);
        mat.at(n, n - 2) = 1.0 / (2.0 * h);
        rhs[static_cast<std::size_t>(n)] = p.right_value;
    }

    const double norm_a = mat.norm_inf();
    mat.factor();
    detail::check_conditioning(mat, norm_a, "solve_interval_bvp");
    return mat.solve(std::move(rhs));
}

} // namespace cellbif::numerics

#endif // CELLBIF_NUMERICS_BVP_HPP
