// Acceptance gate: one pass/fail line per criterion, exit code = failures.
//
// Every tolerance is pinned here, next to the check it gates.  The random
// samples use a fixed seed so the gate is deterministic.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "cellbif/expansion.hpp"
#include "cellbif/linearization.hpp"
#include "cellbif/model.hpp"
#include "cellbif/numerics/bessel.hpp"
#include "cellbif/numerics/bvp.hpp"
#include "cellbif/numerics/quad.hpp"
#include "cellbif/oned.hpp"
#include "cellbif/oracle.hpp"
#include "cellbif/sweep.hpp"

using namespace cellbif;

namespace {

int g_failures = 0;

struct Criterion {
    std::string detail;
    bool ok = true;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void gate(bool pass, const std::string& what) {
        if (!pass) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) {
        detail += (detail.empty() ? "" : "; ") + what;
    }
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    void report(int index, const std::string& title, double time_limit_s = 0.0) {
        const double secs = seconds();
        if (time_limit_s > 0.0 && secs > time_limit_s) {
            ok = false;
            char buf[64];
            std::snprintf(buf, sizeof buf, "runtime %.2fs exceeds %.0fs", secs, time_limit_s);
            detail += (detail.empty() ? "" : "; ") + std::string(buf);
        }
        std::printf("criterion %d: %s — %s%s%s (%.2fs)\n", index, ok ? "PASS" : "FAIL",
                    title.c_str(), detail.empty() ? "" : ": ", detail.c_str(), secs);
        if (!ok) ++g_failures;
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Fixed-seed parameter sampler shared by criteria 4 and 5: draws
// (P, Z, gamma, m_inf, e_A) uniformly, skips tuples without a resting disc or
// with nearly degenerate diffusion at the resting density.
struct Sample {
    PhysParams par;
    DiffusionModel model = DiffusionModel::constant(1.0);
};

std::vector<Sample> draw_samples(std::size_t want, int max_tries) {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u_p(0.03, 0.22);
    std::uniform_real_distribution<double> u_z(0.3, 3.0);
    std::uniform_real_distribution<double> u_g(0.01, 0.15);
    std::uniform_real_distribution<double> u_m(5.0, 15.0);
    std::uniform_real_distribution<double> u_e(0.0, 1.0);
    std::vector<Sample> out;
    for (int tries = 0; tries < max_tries && out.size() < want; ++tries) {
        Sample s;
        s.par.p = u_p(rng);
        s.par.z = u_z(rng);
        s.par.gamma = u_g(rng);
        const double m_inf = u_m(rng);
        const double e_a = u_e(rng);
        try {
            s.model = DiffusionModel::van_der_waals(m_inf, e_a);
            const SteadyState ss = solve_steady_state(s.par);
            if (diffusion_at_steady(s.model, ss).d0 <= 0.05) continue;
        } catch (const error&) {
            continue;
        }
        out.push_back(std::move(s));
    }
    return out;
}

// --- 1: gamma = 0 steady state against the closed form ---------------------
void criterion_1() {
    Criterion c;
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
        PhysParams par;
        par.p = 0.01 + (0.24 - 0.01) * i / 24.0;
        par.gamma = 0.0;
        const SteadyState ss = solve_steady_state(par);
        const double exact =
            std::sqrt((0.5 + std::sqrt(0.25 - par.p)) / numerics::pi_const);
        worst = std::max(worst, std::abs(ss.r0 - exact));
    }
    c.gate(worst <= 1e-12, "max |R0 - closed form| = " + fmt(worst));
    c.note("25 P values, max abs err " + fmt(worst));
    c.report(1, "resting radius matches the explicit gamma=0 formula", 0.1);
}

// --- 2: K0 = D(m0) * K0_hat scaling ----------------------------------------
void criterion_2() {
    Criterion c;
    PhysParams par;
    par.p = 0.1;
    par.z = 1.25;
    par.gamma = 0.0;
    const SteadyState ss = solve_steady_state(par);
    const double ref = solve_k0(par, ss, 1.0).k0;
    double worst = 0.0;
    for (double d : {0.5, 2.0, 4.0}) {
        const BifurcationPoint bp = solve_k0(par, ss, d);
        worst = std::max(worst, std::abs(bp.k0 / d - ref) / ref);
    }
    c.gate(worst <= 1e-10, "K0(c)/c spread " + fmt(worst));
    c.note("c in {0.5,1,2,4}, rel spread " + fmt(worst));
    c.report(2, "critical Peclet number scales linearly in the diffusion", 1.0);
}

// --- 3: first-order closed form and its finite-difference reproduction -----
void criterion_3() {
    Criterion c;
    PhysParams par;
    par.p = 0.1;
    par.z = 1.25;
    par.gamma = 0.05;
    const SteadyState ss = solve_steady_state(par);
    const BifurcationPoint bp = solve_k0(par, ss, 1.0);
    const numerics::Grid grid(ss.r0, 1024);
    const FirstOrderProfiles fo = first_order_profiles(grid, bp, par, ss);
    const std::size_t n = grid.size();

    // Field equation Z L1[sigma] - sigma + P m = 0 with the analytic
    // derivatives, and the stored Laplacian agreeing with them.
    double worst_ode = 0.0, worst_lap = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = grid.r[i];
        const double lap =
            fo.sigma.d2[i] + fo.sigma.d1[i] / r - fo.sigma.v[i] / (r * r);
        worst_ode = std::max(
            worst_ode, std::abs(par.z * lap - fo.sigma.v[i] + par.p * fo.m.v[i]));
        worst_lap = std::max(worst_lap, std::abs(lap - fo.lap_sigma[i]));
    }
    c.gate(worst_ode <= 1e-8, "analytic residual " + fmt(worst_ode));
    c.gate(worst_lap <= 1e-8, "Laplacian consistency " + fmt(worst_lap));

    // Boundary values carried by the closed form.
    c.gate(std::abs(fo.sigma.v.back()) <= 1e-10, "sigma(R0) != 0");
    c.gate(std::abs(bp.k0_hat * fo.sigma.d1.back() - 1.0) <= 1e-8,
           "K0_hat sigma'(R0) != 1");

    // The banded solver reproduces the closed form from the raw data.
    numerics::RadialBVP bvp;
    bvp.grid = &grid;
    bvp.n_mode = 1;
    bvp.a = par.z;
    bvp.b = fo.beta;
    bvp.rhs.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) bvp.rhs[i] = par.p * ss.m0 * grid.r[i];
    bvp.right = numerics::RightBC::dirichlet;
    bvp.right_value = 0.0;
    const std::vector<double> u = numerics::solve_radial_bvp(bvp);
    double worst_bvp = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        worst_bvp = std::max(worst_bvp, std::abs(u[i] - fo.sigma.v[i]));
    c.gate(worst_bvp <= 1e-7, "BVP max-norm " + fmt(worst_bvp));
    c.note("ode " + fmt(worst_ode) + ", lap " + fmt(worst_lap) + ", bvp " + fmt(worst_bvp));
    c.report(3, "first-order closed form vs system and solver", 1.0);
}

// --- 4: dual-path K2 on 20 random tuples ------------------------------------
void criterion_4() {
    Criterion c;
    const std::vector<Sample> samples = draw_samples(20, 80);
    c.gate(samples.size() == 20, "sampler yielded " + std::to_string(samples.size()));
    K2Options opt;
    opt.grid_n = 1024;
    double worst = 0.0;
    for (const Sample& s : samples) {
        const K2Report rep = compute_k2(s.par, s.model, opt);
        worst = std::max(worst, rep.dual_path_rel_err);
    }
    c.gate(worst <= 1e-6, "dual-path rel err " + fmt(worst));
    c.note("20 tuples, worst rel err " + fmt(worst));
    c.report(4, "quadrature and decomposition paths agree", 10.0);
}

// --- 5: finite-difference oracle with observed order --------------------------
void criterion_5() {
    Criterion c;
    const std::vector<Sample> samples = draw_samples(10, 20);
    c.gate(samples.size() == 10, "sampler yielded " + std::to_string(samples.size()));
    K2Options opt;
    opt.grid_n = 2048;
    double worst_rel = 0.0, order_lo = 10.0, order_hi = 0.0;
    for (const Sample& s : samples) {
        const OracleReport orc = oracle_k2(s.par, s.model, opt);
        worst_rel = std::max(worst_rel, orc.rel_err);
        order_lo = std::min(order_lo, orc.order);
        order_hi = std::max(order_hi, orc.order);
        if (orc.rel_err > 1e-5) c.gate(false, "rel err " + fmt(orc.rel_err));
        if (orc.order < 1.8 || orc.order > 2.2) c.gate(false, "order " + fmt(orc.order));
    }
    c.note("10 tuples, worst rel " + fmt(worst_rel) + ", orders [" + fmt(order_lo) + ", " +
           fmt(order_hi) + "]");
    c.report(5, "independent solver reproduces K2 at second order", 30.0);
}

// --- 6: A_i are independent of the diffusion model ---------------------------
void criterion_6() {
    Criterion c;
    PhysParams par;
    par.p = 0.1;
    par.z = 1.25;
    par.gamma = 0.05;
    K2Options opt;
    opt.grid_n = 2048;
    const K2Report r1 = compute_k2(par, DiffusionModel::van_der_waals(10.0, 0.2), opt);
    const K2Report r2 = compute_k2(par, DiffusionModel::van_der_waals(7.0, 0.55), opt);
    double worst = 0.0;
    const double pairs[][2] = {
        {r1.a1, r2.a1}, {r1.a2, r2.a2}, {r1.a3, r2.a3}, {r1.a4, r2.a4}};
    for (const auto& pr : pairs)
        worst = std::max(worst, std::abs(pr[0] - pr[1]) / std::max(1.0, std::abs(pr[0])));
    c.gate(worst <= 1e-6, "A_i spread " + fmt(worst));
    c.note("vdW(10,0.2) vs vdW(7,0.55), worst rel diff " + fmt(worst));
    c.report(6, "decomposition coefficients ignore the diffusion model");
}

// --- 7: the 1D quantitative target -------------------------------------------
void criterion_7() {
    Criterion c;
    PhysParams par;
    par.p = 0.1;
    par.z = 1.25;
    K2Options opt;
    opt.grid_n = 2048;

    const OneDReport rep = oned_k2(par, DiffusionModel::van_der_waals(10.0, 0.35), opt);
    c.gate(rep.a1 > 0.0 && rep.a3 > 0.0 && rep.a4 > 0.0 && rep.a2 < 0.0,
           "A sign pattern (+,-,+,+) violated");

    // Both cubic-term bookkeeping candidates are computed and reported; the
    // default (Taylor weights 1/6 and 1) must land in the target window.
    const CriticalEa main_form = critical_ea(par, 10.0, opt);
    K2Options alt_opt = opt;
    alt_opt.policy = CubicPolicy::doubled;
    const CriticalEa alt_form = critical_ea(par, 10.0, alt_opt);
    c.note("e_A* candidates: taylor " + fmt(main_form.ea_star) + ", doubled " +
           fmt(alt_form.ea_star) + ", target 0.5990 +/- 0.01");
    if (std::abs(main_form.ea_star - 0.5990) > 0.01)
        c.gate(false, "default cubic form misses the window; both candidates above");

    const OneDReport lo = oned_k2(par, DiffusionModel::van_der_waals(10.0, 0.55), opt);
    const OneDReport hi = oned_k2(par, DiffusionModel::van_der_waals(10.0, 0.65), opt);
    c.gate(lo.verdict == PitchforkType::direct_pitchfork &&
               hi.verdict == PitchforkType::inverse_pitchfork,
           "verdicts do not flip across e_A*");
    c.report(7, "1D van der Waals transition hits the target window", 60.0);
}

// --- 8: figure analogs -------------------------------------------------------
void criterion_8() {
    Criterion c;

    // Diffusion curves: larger attraction lies strictly below for m > 0.
    const Figure fig1 = figure_dcurves(10.0, {0.0, 0.35, 0.63}, 0.0, 8.0);
    bool ordered = true;
    for (std::size_t i = 0; i < fig1.series[0].x.size(); ++i) {
        if (fig1.series[0].x[i] <= 0.0) continue;
        if (!(fig1.series[0].y[i] > fig1.series[1].y[i] &&
              fig1.series[1].y[i] > fig1.series[2].y[i]))
            ordered = false;
    }
    c.gate(ordered, "D(m) attraction ordering violated");

    // K2(e_A) tail: strictly decreasing on the 21-point grid [0.4, 1].  The
    // curve has a single interior maximum near e_A = 0.335, so the full
    // bracket is checked for exactly one sign change instead.
    SweepSpec spec;
    spec.axis = SweepAxis::e_a;
    spec.lo = 0.4;
    spec.hi = 1.0;
    spec.count = 21;
    spec.base.p = 0.1;
    spec.base.z = 1.25;
    spec.dim = 1;
    spec.m_inf = 10.0;
    spec.opt.grid_n = 1024;
    const SweepTable tail = run_sweep(spec);
    bool decreasing = true;
    for (std::size_t i = 1; i < tail.rows.size(); ++i)
        if (!(tail.rows[i].num[3] < tail.rows[i - 1].num[3])) decreasing = false;
    c.gate(decreasing, "K2(e_A) not strictly decreasing on [0.4,1]x21");

    spec.lo = 0.0;
    const SweepTable full = run_sweep(spec);
    int sign_changes = 0;
    for (std::size_t i = 1; i < full.rows.size(); ++i)
        if ((full.rows[i].num[3] > 0.0) != (full.rows[i - 1].num[3] > 0.0)) ++sign_changes;
    c.gate(sign_changes == 1,
           "K2 sign changes on [0,1]x21: " + std::to_string(sign_changes));

    // Deterministic CSV + SVG emission, with a lossless round trip on disk.
    const std::string csv = emit_csv(full);
    const std::string svg = render_svg(figure_sweep(full, "k2"));
    c.gate(csv == emit_csv(run_sweep(spec)), "CSV emission not deterministic");
    c.gate(svg == render_svg(figure_sweep(full, "k2")), "SVG emission not deterministic");
    c.gate(!svg.empty() && svg.rfind("<svg", 0) == 0, "SVG missing header");
    const std::string path = "/tmp/cellbif_acceptance_fig3.csv";
    write_text_file(path, csv);
    std::ifstream in(path, std::ios::binary);
    const std::string back((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    c.gate(emit_csv(parse_csv(back)) == csv, "CSV round trip lost information");
    std::remove(path.c_str());

    c.note("decrease gated on [0.4,1]x21 (interior max at e_A~0.335 makes the full "
           "bracket rise first), one zero crossing on [0,1]x21");
    c.report(8, "figure analogs: ordering, K2 tail, deterministic emission");
}

// --- 9: kernel properties ----------------------------------------------------
void criterion_9() {
    Criterion c;

    double worst_w = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double x = 0.05 + (60.0 - 0.05) * i / 199.0;
        const numerics::BesselPair b = numerics::bessel_eval(x);
        worst_w = std::max(worst_w,
                           std::abs(b.j1 * b.y1p - b.j1p * b.y1 -
                                    2.0 / (numerics::pi_const * x)));
    }
    c.gate(worst_w <= 1e-12, "Wronskian defect " + fmt(worst_w));

    const auto f = [](double x) { return std::exp(-x) * std::cos(7.0 * x); };
    const double tol = 1e-10;
    const double whole = numerics::quad(f, 0.0, 2.0, tol);
    const double split =
        numerics::quad(f, 0.0, 0.74, tol) + numerics::quad(f, 0.74, 2.0, tol);
    c.gate(std::abs(whole - split) <= 3.0 * tol,
           "quad additivity defect " + fmt(std::abs(whole - split)));

    // Manufactured mode-1 solution u = r^2 (R - r) on a 2048 grid.
    const double R = 0.53, a = 1.25, b = -3.0;
    const numerics::Grid grid(R, 2048);
    const std::size_t n = grid.size();
    numerics::RadialBVP bvp;
    bvp.grid = &grid;
    bvp.n_mode = 1;
    bvp.a = a;
    bvp.b = b;
    bvp.rhs.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid.r[i];
        bvp.rhs[i] = a * (3.0 * R - 8.0 * r) + b * (R * r * r - r * r * r);
    }
    bvp.right = numerics::RightBC::dirichlet;
    bvp.right_value = 0.0;
    const std::vector<double> u = numerics::solve_radial_bvp(bvp);
    double worst_bvp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid.r[i];
        worst_bvp = std::max(worst_bvp, std::abs(u[i] - r * r * (R - r)));
    }
    c.gate(worst_bvp <= 1e-8, "manufactured BVP err " + fmt(worst_bvp));
    c.note("wronskian " + fmt(worst_w) + ", bvp " + fmt(worst_bvp));
    c.report(9, "kernel identities: Wronskian, quadrature, solver recovery");
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures == 0)
        std::printf("acceptance: all 9 criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return g_failures;
}
