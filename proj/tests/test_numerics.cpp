#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "cellbif/errors.hpp"
#include "cellbif/numerics/bessel.hpp"
#include "cellbif/numerics/bvp.hpp"
#include "cellbif/numerics/gauss.hpp"
#include "cellbif/numerics/grid.hpp"
#include "cellbif/numerics/quad.hpp"
#include "cellbif/numerics/root.hpp"

using namespace cellbif;
using namespace cellbif::numerics;

namespace {

bool close_rel(double got, double ref, double tol) {
    return std::abs(got - ref) <= tol * std::max(1.0, std::abs(ref));
}

} // namespace

TEST_CASE("bessel values across all evaluation branches") {
    // Reference values straddle the series / integral-representation / Hankel
    // branch cuts at x = 9 and x = 17.
    struct Row {
        double x, j0, j1, y0, y1, j1p, y1p;
    };
    const Row table[] = {
        {0.05, 0.999375097649468581, 0.0249921883137596991, -1.97931100081720967,
         -12.7898551711749704, 0.499531331374274598, 253.817792422682198},
        {0.5, 0.938469807240812904, 0.242268457674873886, -0.444518733506706557,
         -1.47147239267024307, 0.453932891891065131, 2.49842605183377958},
        {1.0, 0.765197686557966551, 0.440050585744933516, 0.088256964215676958,
         -0.781212821300288717, 0.325147100813033035, 0.869469785515965675},
        {3.0, -0.260051954901933438, 0.339058958525936459, 0.376850010012790382,
         0.324674424791799978, -0.373071607743912257, 0.268625201748857056},
        {8.9, -0.0652532468512443056, 0.255902371443975887, 0.259155761721710594,
         0.0798693973941368331, -0.0940063222943876637, 0.250181672126863758},
        {9.5, -0.193928747687422355, 0.161264430757529851, 0.171210626202723845,
         0.203179899387207668, -0.210903950925057077, 0.149823268372491459},
        {13.0, 0.206926102377067811, -0.0703180521217783712, -0.078207864527875911,
         -0.210081408420693506, 0.212335183309512301, -0.0620477561878225644},
        {16.9, -0.178783387891219102, -0.0807492542501422173, -0.0754315475558030979,
         0.176631443090127056, -0.174005325509553882, -0.0858831122356922728},
        {17.1, -0.159285331532265468, -0.113518848291434919, -0.108819047300429767,
         0.156173913148365023, -0.152646802392415473, -0.117952024677527136},
        {25.0, 0.0962667832759581162, -0.125350249580289905, -0.127249432268006138,
         -0.0988299647832374101, 0.101280793259169712, -0.123296233676676641},
        {50.0, 0.055812327669251815, -0.0975118281251751377, -0.098064995470077079,
         -0.0567956685620147679, 0.0577625642317553178, -0.0969290820988367837},
    };
    for (const Row& row : table) {
        CAPTURE(row.x);
        CHECK(close_rel(besselj0(row.x), row.j0, 2e-13));
        CHECK(close_rel(besselj1(row.x), row.j1, 2e-13));
        CHECK(close_rel(besselj1_prime(row.x), row.j1p, 2e-13));
        const BesselPair bp = bessel_eval(row.x);
        CHECK(close_rel(bp.j1, row.j1, 2e-13));
        CHECK(close_rel(bp.y1, row.y1, 2e-13));
        CHECK(close_rel(bp.j1p, row.j1p, 2e-13));
        CHECK(close_rel(bp.y1p, row.y1p, 2e-13));
    }
}

TEST_CASE("besselj1_over_x has the correct origin limit") {
    CHECK(besselj1_over_x(0.0) == 0.5);
    CHECK(std::abs(besselj1_over_x(1e-8) - 0.5) <= 1e-15);
    CHECK(close_rel(besselj1_over_x(1.0), 0.440050585744933516, 2e-13));
}

TEST_CASE("bessel wronskian on 200 points") {
    // J1(x) Y1'(x) - J1'(x) Y1(x) = 2 / (pi x)
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double x = 0.05 + (60.0 - 0.05) * i / 199.0;
        const BesselPair bp = bessel_eval(x);
        const double w = bp.j1 * bp.y1p - bp.j1p * bp.y1 - 2.0 / (pi_const * x);
        worst = std::max(worst, std::abs(w));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("find_root locates the first J1 zero") {
    const RootResult res = find_root([](double x) { return besselj1(x); }, 3.0, 4.5);
    CHECK(std::abs(res.x - 3.83170597020751232) <= 1e-13);
    CHECK(res.bracket_lo <= res.x);
    CHECK(res.x <= res.bracket_hi);
    CHECK(res.bracket_hi - res.bracket_lo <= 1e-6);
    CHECK(std::abs(res.fx) <= 1e-13);
}

TEST_CASE("find_root error taxonomy") {
    CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), bracket_error);
    CHECK_THROWS_AS(find_root([](double) { return std::nan(""); }, 0.0, 1.0), evaluation_error);
}

TEST_CASE("find_sign_changes skips poles by magnitude") {
    // tan has a pole at pi/2 (sign change without a root) and a root at pi.
    const auto brackets =
        find_sign_changes([](double x) { return std::tan(x); }, 0.1, 4.6, 450, 50.0);
    REQUIRE(brackets.size() == 1);
    CHECK(brackets[0].first < pi_const);
    CHECK(pi_const < brackets[0].second);
}

TEST_CASE("quad reproduces a frozen Bessel moment") {
    const double v = quad(
        [](double s) {
            const double j = besselj1(2.0 * s);
            return s * j * j;
        },
        0.0, 1.0, 1e-12);
    CHECK(std::abs(v - 0.126807609153953198) <= 1e-11);
}

TEST_CASE("quad additivity") {
    const auto f = [](double x) { return std::exp(-x) * std::cos(7.0 * x); };
    const double tol = 1e-10;
    const double whole = quad(f, 0.0, 2.0, tol);
    const double split = quad(f, 0.0, 0.37, tol) + quad(f, 0.37, 2.0, tol);
    CHECK(std::abs(whole - split) <= 3.0 * tol);
}

TEST_CASE("quad endpoint limits handle removable singularities") {
    // sin(x)/x with the limit 1 supplied at x = 0; Si(1) reference.
    const double v = quad([](double x) { return std::sin(x) / x; }, 0.0, 1.0, 1e-12, 1.0);
    CHECK(std::abs(v - 0.946083070367183015) <= 1e-12);
    CHECK_THROWS_AS(quad([](double x) { return std::sin(x) / x; }, 0.0, 1.0, 1e-12),
                    evaluation_error);
}

TEST_CASE("cumint4 integrates cubics exactly") {
    const Grid g(1.0, 64);
    std::vector<double> y(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) y[i] = g.r[i] * g.r[i] * g.r[i];
    const std::vector<double> c = cumint4(y, g.h);
    REQUIRE(c.size() == g.size());
    CHECK(c[0] == 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double exact = 0.25 * std::pow(g.r[i], 4);
        CHECK(std::abs(c[i] - exact) <= 1e-14);
    }
    CHECK(std::abs(integrate4(y, g.h) - 0.25) <= 1e-14);
}

TEST_CASE("cumtrapz is exact for linear data") {
    const Grid g(2.0, 32);
    std::vector<double> y(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) y[i] = 3.0 * g.r[i] - 1.0;
    const std::vector<double> c = cumtrapz(y, g.h);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double exact = 1.5 * g.r[i] * g.r[i] - g.r[i];
        CHECK(std::abs(c[i] - exact) <= 1e-14);
    }
}

TEST_CASE("restrict_to subsamples by stride") {
    std::vector<double> y(17);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(i * i);
    const std::vector<double> r = restrict_to(y, 4);
    REQUIRE(r.size() == 5);
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == y[4 * i]);
}

TEST_CASE("gauss rules integrate polynomials and transcendentals") {
    const GaussRule r96 = gauss_legendre(96);
    const double p5 = gauss_integrate([](double x) { return x * x * x * x * x; }, 0.0, 1.0, r96);
    CHECK(std::abs(p5 - 1.0 / 6.0) <= 1e-15);
    const double ex = gauss_integrate([](double x) { return std::exp(x); }, -1.0, 2.0, r96);
    CHECK(std::abs(ex - (std::exp(2.0) - std::exp(-1.0))) <= 1e-13);
}

TEST_CASE("banded LU agrees with dense elimination") {
    const int n = 12;
    BandedMatrix band(n, 2, 2);
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) {
            const double v = 1.0 / (1.0 + std::abs(i - j)) + (i == j ? 3.0 : 0.0) +
                             0.1 * std::sin(1.0 + i + 2 * j);
            band.at(i, j) = v;
            dense[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
        }
    double dense_norm = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += std::abs(dense[i][j]);
        dense_norm = std::max(dense_norm, s);
    }
    CHECK(std::abs(band.norm_inf() - dense_norm) <= 1e-14 * dense_norm);

    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[static_cast<std::size_t>(i)] = std::sin(i + 1.0);

    band.factor();
    const std::vector<double> x = band.solve(rhs);

    // dense Gaussian elimination with partial pivoting
    std::vector<double> b = rhs;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int i = col + 1; i < n; ++i)
            if (std::abs(dense[i][col]) > std::abs(dense[piv][col])) piv = i;
        std::swap(dense[col], dense[piv]);
        std::swap(b[col], b[piv]);
        for (int i = col + 1; i < n; ++i) {
            const double l = dense[i][col] / dense[col][col];
            for (int j = col; j < n; ++j) dense[i][j] -= l * dense[col][j];
            b[i] -= l * b[col];
        }
    }
    std::vector<double> xd(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= dense[i][j] * xd[j];
        xd[static_cast<std::size_t>(i)] = s / dense[i][i];
    }
    for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - xd[i]) <= 1e-12);
}

TEST_CASE("banded LU rejects an exactly singular matrix") {
    BandedMatrix band(5, 2, 2);
    band.at(0, 0) = 1.0;
    band.at(1, 1) = 1.0;
    // row 2 left zero
    band.at(3, 3) = 1.0;
    band.at(4, 4) = 1.0;
    CHECK_THROWS_AS(band.factor(), near_singularity_error);
}

TEST_CASE("radial BVP recovers a manufactured mode-1 solution") {
    // u* = r^2 (R - r): L1[u*] = 3R - 8r, u*(0) = 0, u*(R) = 0, u*'(R) = -R^2.
    const double R = 0.53, a = 1.25, b = -3.0;
    const Grid g(R, 2048);
    RadialBVP p;
    p.grid = &g;
    p.n_mode = 1;
    p.a = a;
    p.b = b;
    p.rhs.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.r[i];
        p.rhs[i] = a * (3.0 * R - 8.0 * r) + b * r * r * (R - r);
    }

    SECTION("dirichlet right boundary") {
        p.right = RightBC::dirichlet;
        p.right_value = 0.0;
        const std::vector<double> u = solve_radial_bvp(p);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            err = std::max(err, std::abs(u[i] - g.r[i] * g.r[i] * (R - g.r[i])));
        CHECK(err <= 1e-8);
    }
    SECTION("neumann right boundary") {
        p.right = RightBC::neumann;
        p.right_value = -R * R;
        const std::vector<double> u = solve_radial_bvp(p);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            err = std::max(err, std::abs(u[i] - g.r[i] * g.r[i] * (R - g.r[i])));
        CHECK(err <= 2e-7);
    }
}

TEST_CASE("radial BVP handles the mode-0 regularity row") {
    // u* = cos(pi r / (2 R)) has u*'(0) = 0 and u*(R) = 0.
    const double R = 0.7, a = 0.9, b = -2.0;
    const double w = pi_const / (2.0 * R);
    const Grid g(R, 2048);
    RadialBVP p;
    p.grid = &g;
    p.n_mode = 0;
    p.a = a;
    p.b = b;
    p.rhs.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.r[i];
        // L0[u*] = -w^2 cos(wr) - w sin(wr)/r, limit -2 w^2 at r = 0
        const double lap = (i == 0) ? -2.0 * w * w
                                    : -w * w * std::cos(w * r) - w * std::sin(w * r) / r;
        p.rhs[i] = a * lap + b * std::cos(w * r);
    }
    p.right = RightBC::dirichlet;
    p.right_value = 0.0;
    const std::vector<double> u = solve_radial_bvp(p);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        err = std::max(err, std::abs(u[i] - std::cos(w * g.r[i])));
    CHECK(err <= 1e-7);
}

TEST_CASE("interval BVP respects parity rows") {
    const double L = 0.45, a = 0.7, b = -1.3;
    const Grid g(L, 1024);

    SECTION("even solution with dirichlet right") {
        const double w = pi_const / (2.0 * L);
        IntervalBVP p;
        p.grid = &g;
        p.parity = Parity::even;
        p.a = a;
        p.b = b;
        p.rhs.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            p.rhs[i] = (b - a * w * w) * std::cos(w * g.r[i]);
        p.right = RightBC::dirichlet;
        p.right_value = 0.0;
        const std::vector<double> u = solve_interval_bvp(p);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            err = std::max(err, std::abs(u[i] - std::cos(w * g.r[i])));
        CHECK(err <= 5e-7);
    }
    SECTION("odd solution with dirichlet right") {
        const double w = pi_const / L;
        IntervalBVP p;
        p.grid = &g;
        p.parity = Parity::odd;
        p.a = a;
        p.b = b;
        p.rhs.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            p.rhs[i] = (b - a * w * w) * std::sin(w * g.r[i]);
        p.right = RightBC::dirichlet;
        p.right_value = 0.0;
        const std::vector<double> u = solve_interval_bvp(p);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            err = std::max(err, std::abs(u[i] - std::sin(w * g.r[i])));
        CHECK(err <= 5e-6);
    }
}

TEST_CASE("interval BVP detects an exactly resonant operator") {
    // b tuned to the exact discrete Dirichlet eigenvalue of u'' + b u.
    const Grid g(1.0, 64);
    const double b_res = (2.0 / (g.h * g.h)) * (1.0 - std::cos(pi_const * g.h));
    IntervalBVP p;
    p.grid = &g;
    p.parity = Parity::odd;
    p.a = 1.0;
    p.b = b_res;
    p.rhs.assign(g.size(), 1.0);
    p.right = RightBC::dirichlet;
    p.right_value = 0.0;
    CHECK_THROWS_AS(solve_interval_bvp(p), near_singularity_error);
}

TEST_CASE("grid construction and defaults") {
    const Grid g(2.0, 16);
    CHECK(g.size() == 17);
    CHECK(g.r[0] == 0.0);
    CHECK(g.r[16] == 2.0);
    CHECK(std::abs(g.h - 0.125) <= 1e-16);
    CHECK_THROWS_AS(Grid(1.0, 4), config_error);

    SECTION("environment override of the default grid") {
        ::setenv("MOTILITY_BIF_GRID", "512", 1);
        CHECK(default_grid_n() == 512);
        ::setenv("MOTILITY_BIF_GRID", "4", 1); // below the minimum: ignored
        CHECK(default_grid_n() == 2048);
        ::unsetenv("MOTILITY_BIF_GRID");
        CHECK(default_grid_n() == 2048);
    }
}

TEST_CASE("error hierarchy carries kinds in messages") {
    try {
        throw no_steady_state_error("demo");
    } catch (const error& e) {
        CHECK(std::string(e.kind()) == "no_steady_state_error");
        CHECK(std::string(e.what()).find("no_steady_state_error") != std::string::npos);
    }
}
