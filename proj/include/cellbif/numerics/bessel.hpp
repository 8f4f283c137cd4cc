#ifndef CELLBIF_NUMERICS_BESSEL_HPP
#define CELLBIF_NUMERICS_BESSEL_HPP

/**
 * @file bessel.hpp
 * @brief Bessel functions J0, J1, Y0, Y1 and the derivatives J1', Y1'.
 *
 * Three evaluation branches chosen for full double accuracy:
 *   - x < 9: ascending power series (J) and the log-series (Y);
 *   - 9 <= x < 17: Gauss-Legendre quadrature of the Bessel integral
 *     representations, with the exponential tail of Y via u = sinh t;
 *   - x >= 17: Hankel asymptotic expansion with the P/Q amplitude series.
 * The J and Y paths share no series data, so the Wronskian
 * J1(x) Y1'(x) - J1'(x) Y1(x) = 2 / (pi x) is a genuine cross-check; it holds
 * to 1e-12 across the working range.
 *
 * Derivatives use the exact recurrences J1' = J0 - J1/x, Y1' = Y0 - Y1/x.
 */

#include <cmath>
#include <limits>
#include <string>

#include "../errors.hpp"
#include "gauss.hpp"

namespace cellbif::numerics {

// ============================================================================
// Constants
// ============================================================================

inline constexpr double pi_const = 3.14159265358979323846;
inline constexpr double euler_gamma = 0.57721566490153286061;

/// First positive zero of J1.
inline constexpr double j1_zero1 = 3.83170597020751232;
/// First positive zero of J1'.
inline constexpr double j1p_zero1 = 1.8411837813406593;
/// Second positive zero of J1'.
inline constexpr double j1p_zero2 = 5.33144277352503264;

namespace detail {

inline constexpr double series_cut = 9.0;
inline constexpr double asymptotic_cut = 17.0;

// ----------------------------------------------------------------------------
// Branch 1: power series (x < 9).  ~30 terms at the seam; the alternating
// cancellation there loses ~2 digits absolute, which stays inside the 1e-12
// Wronskian budget.
// ----------------------------------------------------------------------------

inline double j0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}

/// J1(x)/x as a series; finite at x = 0 with value 1/2.
inline double j1_over_x_series(double x) {
    const double q = 0.25 * x * x;
    double term = 0.5, sum = 0.5;
    for (int k = 1; k < 60; ++k) {
        term *= -q / (static_cast<double>(k) * (k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}

inline double y0_series(double x) {
    const double q = 0.25 * x * x;
    // sum_{k>=1} (-1)^{k+1} H_k q^k / (k!)^2
    double fac = 1.0, hk = 0.0, sum = 0.0, sign = 1.0, qk = 1.0;
    for (int k = 1; k < 60; ++k) {
        qk *= q;
        fac *= static_cast<double>(k);
        hk += 1.0 / k;
        const double term = sign * hk * qk / (fac * fac);
        sum += term;
        sign = -sign;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return (2.0 / pi_const) * ((std::log(0.5 * x) + euler_gamma) * j0_series(x) + sum);
}

inline double y1_series(double x) {
    const double q = 0.25 * x * x;
    // sum_{k>=0} (-1)^k (H_k + H_{k+1}) q^k / (k! (k+1)!), H_0 = 0
    double sum = 1.0; // k = 0 term: (0 + 1) / (1 * 1)
    double term_base = 1.0, hk = 0.0, hk1 = 1.0, sign = -1.0;
    for (int k = 1; k < 60; ++k) {
        term_base *= q / (static_cast<double>(k) * (k + 1.0));
        hk += 1.0 / k;
        hk1 += 1.0 / (k + 1.0);
        const double term = sign * (hk + hk1) * term_base;
        sum += term;
        sign = -sign;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    const double j1 = x * j1_over_x_series(x);
    return (2.0 / pi_const) * (std::log(0.5 * x) + euler_gamma) * j1 - 2.0 / (pi_const * x)
           - (x / (2.0 * pi_const)) * sum;
}

// ----------------------------------------------------------------------------
// Branch 2: integral representations (9 <= x < 17).
//   Jn(x) = (1/pi) int_0^pi cos(x sin t - n t) dt
//   Yn(x) = (1/pi) int_0^pi sin(x sin t - n t) dt
//           - (2/pi) int_0^inf (n == 0 ? 1 : sinh t) e^{-x sinh t} dt
// The tail integral is mapped by u = sinh t onto [0, 50/x] where the
// integrand is smooth; two Gauss panels resolve it to machine accuracy.
// ----------------------------------------------------------------------------

inline const GaussRule& rule96() {
    static const GaussRule rule = gauss_legendre(96);
    return rule;
}

inline const GaussRule& rule64() {
    static const GaussRule rule = gauss_legendre(64);
    return rule;
}

inline double bessel_integral(int n, bool want_y, double x) {
    const auto osc = [&](double t) {
        const double phase = x * std::sin(t) - n * t;
        return want_y ? std::sin(phase) : std::cos(phase);
    };
    double value = gauss_integrate(osc, 0.0, pi_const, rule96()) / pi_const;
    if (want_y) {
        const double umax = 50.0 / x;
        const auto tail = [&](double u) {
            const double root = std::sqrt(1.0 + u * u);
            const double weight = (n == 0) ? 1.0 / root : u / root;
            return std::exp(-x * u) * weight;
        };
        const double split = umax / 5.0;
        const double t1 = gauss_integrate(tail, 0.0, split, rule64());
        const double t2 = gauss_integrate(tail, split, umax, rule64());
        value -= (2.0 / pi_const) * (t1 + t2);
    }
    return value;
}

// ----------------------------------------------------------------------------
// Branch 3: Hankel asymptotics (x >= 17).
//   J_nu = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - (2 nu + 1) pi/4
//   Y_nu = sqrt(2/(pi x)) (P sin chi + Q cos chi)
// with the standard amplitude series in mu = 4 nu^2.  Terms are summed until
// they stop decreasing; the truncation floor at x = 17 is ~e^{-2x}.
// ----------------------------------------------------------------------------

inline void hankel_pq(int nu, double x, double& p, double& q) {
    const double mu = 4.0 * nu * nu;
    double c = 1.0; // c_k = prod (mu - (2j-1)^2) / (k! 8^k x^k)
    p = 1.0;
    q = 0.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 0; k < 40; ++k) {
        const double odd = 2.0 * k + 1.0;
        c *= (mu - odd * odd) / (8.0 * (k + 1.0) * x);
        if (std::abs(c) >= prev) break; // asymptotic series started to diverge
        prev = std::abs(c);
        const int idx = k + 1;
        const int cycle = idx % 4;
        if (cycle == 1) q += c;
        else if (cycle == 2) p -= c;
        else if (cycle == 3) q -= c;
        else p += c;
        if (std::abs(c) < 1e-18) break;
    }
}

inline void hankel_eval(int nu, double x, double& j, double& y) {
    double p = 0.0, q = 0.0;
    hankel_pq(nu, x, p, q);
    const double chi = x - (2.0 * nu + 1.0) * pi_const / 4.0;
    const double amp = std::sqrt(2.0 / (pi_const * x));
    const double c = std::cos(chi), s = std::sin(chi);
    j = amp * (p * c - q * s);
    y = amp * (p * s + q * c);
}

} // namespace detail

// ============================================================================
// Public evaluators
// ============================================================================

/// J0(x) for x >= 0.
inline double besselj0(double x) {
    if (x < 0.0) throw domain_error("besselj0: negative argument " + std::to_string(x));
    if (x < detail::series_cut) return detail::j0_series(x);
    if (x < detail::asymptotic_cut) return detail::bessel_integral(0, false, x);
    double j = 0.0, y = 0.0;
    detail::hankel_eval(0, x, j, y);
    return j;
}

/// J1(x) for x >= 0.
inline double besselj1(double x) {
    if (x < 0.0) throw domain_error("besselj1: negative argument " + std::to_string(x));
    if (x < detail::series_cut) return x * detail::j1_over_x_series(x);
    if (x < detail::asymptotic_cut) return detail::bessel_integral(1, false, x);
    double j = 0.0, y = 0.0;
    detail::hankel_eval(1, x, j, y);
    return j;
}

/// J1(x)/x for x >= 0; finite at 0 with value 1/2.
inline double besselj1_over_x(double x) {
    if (x < 0.0) throw domain_error("besselj1_over_x: negative argument " + std::to_string(x));
    if (x < detail::series_cut) return detail::j1_over_x_series(x);
    return besselj1(x) / x;
}

/// J1'(x) = J0(x) - J1(x)/x for x >= 0; J1'(0) = 1/2.
inline double besselj1_prime(double x) {
    return besselj0(x) - besselj1_over_x(x);
}

/// J1, Y1 and their first derivatives at one point.
struct BesselPair {
    double j1;  ///< J1(x)
    double y1;  ///< Y1(x)
    double j1p; ///< J1'(x)
    double y1p; ///< Y1'(x)
};

/**
 * @brief Evaluate J1, Y1, J1', Y1' at x > 0.
 * @param x evaluation point, strictly positive (Y1 diverges at 0)
 * @return BesselPair with all four values
 * @throws domain_error for x <= 0
 */
inline BesselPair bessel_eval(double x) {
    if (!(x > 0.0))
        throw domain_error("bessel_eval: argument must be positive, got " + std::to_string(x));
    double j0v, j1v, y0v, y1v;
    if (x < detail::series_cut) {
        j0v = detail::j0_series(x);
        j1v = x * detail::j1_over_x_series(x);
        y0v = detail::y0_series(x);
        y1v = detail::y1_series(x);
    } else if (x < detail::asymptotic_cut) {
        j0v = detail::bessel_integral(0, false, x);
        j1v = detail::bessel_integral(1, false, x);
        y0v = detail::bessel_integral(0, true, x);
        y1v = detail::bessel_integral(1, true, x);
    } else {
        double yj0, yy0, yj1, yy1;
        detail::hankel_eval(0, x, yj0, yy0);
        detail::hankel_eval(1, x, yj1, yy1);
        j0v = yj0;
        y0v = yy0;
        j1v = yj1;
        y1v = yy1;
    }
    return BesselPair{j1v, y1v, j0v - j1v / x, y0v - y1v / x};
}

} // namespace cellbif::numerics

#endif // CELLBIF_NUMERICS_BESSEL_HPP
