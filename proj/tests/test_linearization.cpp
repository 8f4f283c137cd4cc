#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cellbif/linearization.hpp"
#include "cellbif/numerics/bvp.hpp"

using namespace cellbif;

namespace {

bool close_rel(double got, double ref, double tol) {
    return std::abs(got - ref) <= tol * std::max(1.0, std::abs(ref));
}

struct Frozen {
    double p, z, gamma, alpha, k0_hat, transversality, s1p;
};

constexpr Frozen frozen[] = {
    {0.1, 1.25, 0.0, 1.78905751383531759, 134.56523038038069, 3.35269140413549576,
     0.131037173637216556},
    {0.1, 1.25, 0.05, 1.79610711696968767, 134.373452669471669, 3.88004028092211266,
     0.13099182898206283},
    {0.15, 0.8, 0.05, 1.77985778408415269, 57.5206393424030182, 2.84394702350237347,
     0.131088420818196908},
};

} // namespace

TEST_CASE("critical point matches frozen values") {
    for (const Frozen& f : frozen) {
        PhysParams par;
        par.p = f.p;
        par.z = f.z;
        par.gamma = f.gamma;
        CAPTURE(f.p, f.z, f.gamma);
        const SteadyState ss = solve_steady_state(par);
        const BifurcationPoint bp = solve_k0(par, ss, 1.0);
        CHECK(close_rel(bp.alpha, f.alpha, 1e-12));
        CHECK(close_rel(bp.k0_hat, f.k0_hat, 1e-12));
        CHECK(bp.k0 == bp.k0_hat); // D = 1
        CHECK(std::abs(bp.residual) <= 1e-10);
        CHECK(std::abs(bifurcation_residual(bp.k0, par, ss, 1.0)) <= 1e-10);
        CHECK(close_rel(bp.transversality, f.transversality, 1e-9));
        CHECK(close_rel(bp.s1p, f.s1p, 1e-9));
    }
}

TEST_CASE("critical Peclet number scales linearly in the diffusion constant") {
    PhysParams par;
    par.p = 0.1;
    par.z = 1.25;
    par.gamma = 0.0;
    const SteadyState ss = solve_steady_state(par);
    const BifurcationPoint ref = solve_k0(par, ss, 1.0);
    for (double c : {0.5, 2.0, 4.0}) {
        CAPTURE(c);
        const BifurcationPoint bp = solve_k0(par, ss, c);
        CHECK(close_rel(bp.k0 / c, ref.k0, 1e-10));
        CHECK(close_rel(bp.k0_hat, ref.k0_hat, 1e-13)); // hatted value is D-free
        CHECK(close_rel(bp.alpha, ref.alpha, 1e-13));
    }
}

TEST_CASE("residual changes sign across the critical point") {
    PhysParams par;
    par.p = 0.1;
    par.z = 1.25;
    par.gamma = 0.0;
    const SteadyState ss = solve_steady_state(par);
    const BifurcationPoint bp = solve_k0(par, ss, 1.0);
    const double lo = bifurcation_residual(bp.k0 * 0.999, par, ss, 1.0);
    const double hi = bifurcation_residual(bp.k0 * 1.001, par, ss, 1.0);
    CHECK(lo * hi < 0.0);
}

TEST_CASE("subcritical advection strength is rejected") {
    PhysParams par;
    par.p = 0.1;
    par.z = 1.25;
    par.gamma = 0.0;
    const SteadyState ss = solve_steady_state(par);
    // P K m0 / D <= 1 leaves no oscillatory mode
    CHECK_THROWS_AS(alpha_of(1.0, par, ss, 1.0), subcritical_k_error);
}

TEST_CASE("transversality expression rejects a degenerate alpha") {
    CHECK_THROWS_AS(transversality(numerics::j1_zero1), degenerate_denominator_error);
}

TEST_CASE("first-order profiles satisfy the closed-form identities") {
    PhysParams par;
    par.p = 0.1;
    par.z = 1.25;
    par.gamma = 0.05;
    const SteadyState ss = solve_steady_state(par);
    const BifurcationPoint bp = solve_k0(par, ss, 1.0);
    const numerics::Grid g(ss.r0, 1024);
    const FirstOrderProfiles fo = first_order_profiles(g, bp, par, ss);
    const std::size_t last = g.size() - 1;

    SECTION("boundary identities") {
        CHECK(std::abs(fo.sigma.v[last]) <= 1e-12);
        CHECK(std::abs(bp.k0_hat * fo.sigma.d1[last] - 1.0) <= 1e-10);
        CHECK(std::abs(fo.m.d1[last]) <= 1e-10);
        CHECK(std::abs(fo.m.v[last] + ss.m0 * ss.r0) <= 1e-12);
        CHECK(close_rel(fo.sigma.d2[last], fo.sigma_pp_r0, 1e-12));
    }

    SECTION("field equations hold pointwise") {
        // Z L1[sigma] = sigma - P m and m = K0h m0 sigma - m0 r, so
        // L1[m] = K0h m0 L1[sigma]; residuals from the analytic derivatives.
        double worst_sigma = 0.0, worst_m = 0.0, worst_lap = 0.0;
        for (std::size_t i = 1; i < g.size(); ++i) {
            const double r = g.r[i];
            const double lap =
                fo.sigma.d2[i] + fo.sigma.d1[i] / r - fo.sigma.v[i] / (r * r);
            worst_lap = std::max(worst_lap, std::abs(lap - fo.lap_sigma[i]));
            worst_sigma = std::max(
                worst_sigma, std::abs(par.z * lap - fo.sigma.v[i] + par.p * fo.m.v[i]));
            const double m_expect = bp.k0_hat * ss.m0 * fo.sigma.v[i] - ss.m0 * r;
            worst_m = std::max(worst_m, std::abs(fo.m.v[i] - m_expect));
        }
        CHECK(worst_lap <= 1e-8);
        CHECK(worst_sigma <= 1e-8);
        CHECK(worst_m <= 1e-12);
    }

    SECTION("finite-difference BVP reproduces the closed form") {
        // Z L1[sigma] + beta sigma = P m0 r with sigma(R0) = 0
        numerics::RadialBVP p;
        p.grid = &g;
        p.n_mode = 1;
        p.a = par.z;
        p.b = fo.beta;
        p.rhs.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) p.rhs[i] = par.p * ss.m0 * g.r[i];
        p.right = numerics::RightBC::dirichlet;
        p.right_value = 0.0;
        const std::vector<double> u = numerics::solve_radial_bvp(p);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(u[i] - fo.sigma.v[i]));
        CHECK(worst <= 1e-7);
    }
}
