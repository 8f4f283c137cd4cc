#ifndef CELLBIF_NUMERICS_GAUSS_HPP
#define CELLBIF_NUMERICS_GAUSS_HPP

/**
 * @file gauss.hpp
 * @brief Gauss-Legendre nodes and weights on [-1, 1], computed at runtime.
 *
 * Nodes are the roots of the Legendre polynomial P_n found by Newton
 * iteration from the Chebyshev-based initial guess; weights follow from the
 * derivative.  Double precision throughout; the iteration converges to
 * machine accuracy in < 10 steps for the orders used here.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace cellbif::numerics {

/// One Gauss-Legendre rule: nodes x[i] in (-1, 1) and weights w[i].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Build the n-point Gauss-Legendre rule on [-1, 1].
inline GaussRule gauss_legendre(int n) {
    GaussRule rule;
    rule.x.assign(static_cast<std::size_t>(n), 0.0);
    rule.w.assign(static_cast<std::size_t>(n), 0.0);
    const double pi = 3.14159265358979323846;
    // Symmetric rule: compute the upper half, mirror the rest.
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.x[static_cast<std::size_t>(i)] = -x;
        rule.x[static_cast<std::size_t>(n - 1 - i)] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.w[static_cast<std::size_t>(i)] = w;
        rule.w[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

/// Integrate f over [a, b] with a cached n-point Gauss-Legendre rule.
template <typename F>
inline double gauss_integrate(F&& f, double a, double b, const GaussRule& rule) {
    const double mid = 0.5 * (a + b);
    const double hal = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        acc += rule.w[i] * f(mid + hal * rule.x[i]);
    return acc * hal;
}

} // namespace cellbif::numerics

#endif // CELLBIF_NUMERICS_GAUSS_HPP
