#ifndef CELLBIF_CLI_HPP
#define CELLBIF_CLI_HPP

/**
 * @file cli.hpp
 * @brief Command-line front end.
 *
 * Subcommands: steady, k0, k2, critical-ea, sweep, figures, selftest.
 * Reports print as "key = value" lines or as JSON with --json PATH ("-" for
 * stdout); sweeps emit CSV (--csv, default stdout) and optionally SVG.
 * Exit codes: 0 success, 1 computation error (the taxonomy kind is printed),
 * 2 usage or configuration error.
 */

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "errors.hpp"
#include "expansion.hpp"
#include "linearization.hpp"
#include "model.hpp"
#include "numerics/bessel.hpp"
#include "numerics/quad.hpp"
#include "oned.hpp"
#include "oracle.hpp"
#include "sweep.hpp"

namespace cellbif::cli {

/// Options shared by the computing subcommands.
struct CommonOpts {
    double p = 0.1, z = 1.25, gamma = 0.0;
    int dim = 2;
    std::string vdw = "10,0";
    double const_d = 1.0;
    bool use_const = false;
    double m_inf = 10.0, e_a = 0.0; ///< parsed from vdw
    int grid = 0;
    double tol_root = 1e-12, tol_quad = 1e-10;
    std::string cubic = "taylor";
    bool timing = false;
    std::string json_path;
    std::string config_path;
    double k_probe = 0.0;
    bool has_k_probe = false;
};

namespace detail {

inline void parse_vdw(CommonOpts& o) {
    double a = 0.0, b = 0.0;
    if (std::sscanf(o.vdw.c_str(), "%lf,%lf", &a, &b) != 2)
        throw config_error("--vdw expects 'm_inf,e_A', got '" + o.vdw + "'");
    o.m_inf = a;
    o.e_a = b;
}

inline DiffusionModel make_model(const CommonOpts& o) {
    if (o.use_const) return DiffusionModel::constant(o.const_d);
    return DiffusionModel::van_der_waals(o.m_inf, o.e_a);
}

inline K2Options make_opts(const CommonOpts& o) {
    K2Options opt;
    opt.grid_n = o.grid;
    opt.policy = o.cubic == "taylor" ? CubicPolicy::taylor : CubicPolicy::doubled;
    opt.tol_root = o.tol_root;
    opt.tol_quad = o.tol_quad;
    return opt;
}

/// Register the shared flags on a subcommand.
inline void add_common(CLI::App* sub, CommonOpts& o, bool with_model = true) {
    sub->add_option("--config", o.config_path,
                    "read key=value defaults from a file (flags override)");
    sub->add_option("--p", o.p, "stall pressure P");
    sub->add_option("--z", o.z, "substrate friction Z");
    sub->add_option("--gamma", o.gamma, "surface tension gamma");
    sub->add_option("--grid", o.grid, "grid intervals (0 = default / MOTILITY_BIF_GRID)");
    sub->add_option("--tol-root", o.tol_root, "root-finder tolerance");
    sub->add_option("--tol-quad", o.tol_quad, "quadrature tolerance");
    sub->add_option("--json", o.json_path, "write the report as JSON to a path or '-'");
    sub->add_flag("--timing", o.timing, "append wall-clock timing (non-deterministic)");
    if (with_model) {
        sub->add_option("--dim", o.dim, "problem dimension")->check(CLI::Range(1, 2));
        sub->add_option("--vdw", o.vdw, "van der Waals model 'm_inf,e_A'");
        sub->add_option("--const-d", o.const_d, "constant diffusion value")
            ->each([&o](const std::string&) { o.use_const = true; });
        sub->add_option("--cubic", o.cubic, "cubic-term policy")
            ->check(CLI::IsMember({"taylor", "doubled"}));
    }
}

/**
 * @brief Load flat key=value defaults from o.config_path into o.
 *
 * Keys mirror the long flags without the leading dashes; '#' starts a
 * comment.  A value is applied only when the matching flag was not given on
 * the command line, so flags always win.
 * @throws config_error on an unreadable file, junk lines, or unknown keys
 */
inline void apply_config(const CLI::App* sub, CommonOpts& o) {
    if (o.config_path.empty()) return;
    std::ifstream in(o.config_path);
    if (!in) throw config_error("cannot read config file '" + o.config_path + "'");

    const auto trim = [](const std::string& s) {
        const char* ws = " \t\r";
        const std::size_t a = s.find_first_not_of(ws);
        if (a == std::string::npos) return std::string();
        return s.substr(a, s.find_last_not_of(ws) - a + 1);
    };
    const auto flag_given = [sub](const char* name) {
        const CLI::Option* op = sub->get_option_no_throw(name);
        return op != nullptr && op->count() > 0;
    };
    const auto to_num = [](const std::string& key, const std::string& val) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(val, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (val.empty() || used != val.size())
            throw config_error("config: bad number '" + val + "' for key '" + key + "'");
        return x;
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) +
                               ": expected key=value, got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key == "p") {
            if (!flag_given("--p")) o.p = to_num(key, val);
        } else if (key == "z") {
            if (!flag_given("--z")) o.z = to_num(key, val);
        } else if (key == "gamma") {
            if (!flag_given("--gamma")) o.gamma = to_num(key, val);
        } else if (key == "grid") {
            if (!flag_given("--grid")) o.grid = static_cast<int>(to_num(key, val));
        } else if (key == "tol-root") {
            if (!flag_given("--tol-root")) o.tol_root = to_num(key, val);
        } else if (key == "tol-quad") {
            if (!flag_given("--tol-quad")) o.tol_quad = to_num(key, val);
        } else if (key == "json") {
            if (!flag_given("--json")) o.json_path = val;
        } else if (key == "timing") {
            if (!flag_given("--timing")) o.timing = to_num(key, val) != 0.0;
        } else if (key == "dim") {
            if (!flag_given("--dim")) {
                const int d = static_cast<int>(to_num(key, val));
                if (d != 1 && d != 2) throw config_error("config: dim must be 1 or 2");
                o.dim = d;
            }
        } else if (key == "vdw") {
            if (!flag_given("--vdw")) o.vdw = val;
        } else if (key == "const-d") {
            if (!flag_given("--const-d")) {
                o.const_d = to_num(key, val);
                o.use_const = true;
            }
        } else if (key == "cubic") {
            if (!flag_given("--cubic")) {
                if (val != "taylor" && val != "doubled")
                    throw config_error("config: cubic must be taylor or doubled");
                o.cubic = val;
            }
        } else {
            throw config_error("config: unknown key '" + key + "'");
        }
    }
}

/// Print a report as key = value lines or dump it as JSON.
inline void emit_report(const nlohmann::json& obj, const CommonOpts& o, double wall_ms) {
    nlohmann::json out = obj;
    if (o.timing) out["wall_ms"] = wall_ms;
    if (!o.json_path.empty()) {
        write_text_file(o.json_path, out.dump(2) + "\n");
        return;
    }
    for (const auto& [key, value] : out.items()) {
        std::cout << key << " = ";
        if (value.is_string())
            std::cout << value.get<std::string>();
        else if (value.is_number_float())
            std::cout << format_double(value.get<double>());
        else
            std::cout << value.dump();
        std::cout << "\n";
    }
}

inline nlohmann::json report_2d(const K2Report& rep) {
    return {
        {"k2", rep.k2},
        {"k2_direct", rep.k2_direct},
        {"dual_path_rel_err", rep.dual_path_rel_err},
        {"a0", rep.a0},
        {"a1", rep.a1},
        {"a2", rep.a2},
        {"a3", rep.a3},
        {"a4", rep.a4},
        {"k0", rep.k0},
        {"k0_hat", rep.k0_hat},
        {"alpha", rep.alpha},
        {"transversality", rep.transversality},
        {"s1p", rep.s1p},
        {"r0", rep.r0},
        {"m0", rep.m0},
        {"d0", rep.d0},
        {"rho20", rep.rho20},
        {"rho22", rep.rho22},
        {"split_mismatch", rep.split_mismatch},
        {"policy", to_string(rep.policy)},
        {"verdict", to_string(rep.verdict)},
    };
}

inline nlohmann::json report_1d(const OneDReport& rep) {
    return {
        {"k2", rep.k2},
        {"k2_direct", rep.k2_direct},
        {"dual_path_rel_err", rep.dual_path_rel_err},
        {"a0", rep.a0},
        {"a1", rep.a1},
        {"a2", rep.a2},
        {"a3", rep.a3},
        {"a4", rep.a4},
        {"k0", rep.k0},
        {"k0_hat", rep.k0_hat},
        {"alpha", rep.alpha},
        {"psi", rep.psi},
        {"l0", rep.l0},
        {"m0", rep.m0},
        {"d0", rep.d0},
        {"rho2", rep.rho2},
        {"split_mismatch", rep.split_mismatch},
        {"policy", to_string(rep.policy)},
        {"verdict", to_string(rep.verdict)},
    };
}

inline int selftest() {
    int failures = 0;
    const auto check = [&](const char* name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    };

    {
        PhysParams par;
        par.p = 0.1;
        par.gamma = 0.0;
        const double r0 = solve_steady_state(par).r0;
        const double closed = steady_radius_closed_form(par.p);
        check("steady closed form", std::abs(r0 - closed) <= 1e-12,
              "difference " + format_double(r0 - closed));
    }
    {
        double worst = 0.0;
        for (double x : {0.7, 5.0, 23.0}) {
            const numerics::BesselPair bp = numerics::bessel_eval(x);
            const double w = bp.j1 * bp.y1p - bp.j1p * bp.y1 - 2.0 / (numerics::pi_const * x);
            worst = std::max(worst, std::abs(w));
        }
        check("bessel wronskian", worst <= 1e-12, "worst " + format_double(worst));
    }
    {
        const double v = numerics::quad(
            [](double s) {
                const double j = numerics::besselj1(2.0 * s);
                return s * j * j;
            },
            0.0, 1.0, 1e-12);
        check("adaptive quadrature", std::abs(v - 0.126807609153953198) <= 1e-10,
              format_double(v));
    }
    {
        PhysParams par;
        par.p = 0.1;
        par.z = 1.25;
        par.gamma = 0.0;
        const SteadyState ss = solve_steady_state(par);
        const double k0 = solve_k0(par, ss, 1.0).k0;
        check("radial critical point", std::abs(k0 - 134.56523038038069) <= 1e-8,
              format_double(k0));
    }
    {
        PhysParams par;
        par.p = 0.1;
        par.z = 1.25;
        const double k0 = oned_k0(par, oned_steady(par), 1.0).k0;
        check("interval critical point", std::abs(k0 - 140.714886341793371) <= 1e-8,
              format_double(k0));
    }
    {
        PhysParams par;
        par.p = 0.1;
        par.z = 1.25;
        const OneDReport rep = oned_k2(par, DiffusionModel::van_der_waals(10.0, 0.63));
        check("1D dual-path agreement", rep.dual_path_rel_err <= 1e-6,
              "rel err " + format_double(rep.dual_path_rel_err));
        check("1D strong-attraction verdict", rep.verdict == PitchforkType::inverse_pitchfork,
              to_string(rep.verdict));
    }
    std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
    return failures == 0 ? 0 : 1;
}

} // namespace detail

/// Entry point; returns the process exit code.
inline int run(int argc, const char* const* argv) {
    CLI::App app{"bifurcation structure of a free-boundary model of cell motility"};
    app.require_subcommand(1);

    CommonOpts steady_o, k0_o, k2_o, ea_o, sweep_o, fig_o;
    double ea_m_inf = 10.0;
    SweepSpec sweep_spec;
    std::string sweep_axis = "e_a";
    std::string sweep_csv = "-";
    std::string sweep_svg;
    std::string fig_dir = ".";

    CLI::App* c_steady = app.add_subcommand("steady", "resting steady state");
    detail::add_common(c_steady, steady_o, /*with_model=*/false);

    CLI::App* c_k0 = app.add_subcommand("k0", "critical Peclet number");
    detail::add_common(c_k0, k0_o);
    c_k0->add_option("--k", k0_o.k_probe, "evaluate the bifurcation residual at this K")
        ->each([&k0_o](const std::string&) { k0_o.has_k_probe = true; });

    CLI::App* c_k2 = app.add_subcommand("k2", "bifurcation-curve curvature");
    detail::add_common(c_k2, k2_o);

    CLI::App* c_ea = app.add_subcommand("critical-ea", "pitchfork transition along e_A (1D)");
    detail::add_common(c_ea, ea_o);
    c_ea->add_option("--m-inf", ea_m_inf, "van der Waals saturation level");

    CLI::App* c_sweep = app.add_subcommand("sweep", "sweep one parameter axis");
    detail::add_common(c_sweep, sweep_o);
    c_sweep->add_option("--axis", sweep_axis, "p, z, gamma, e_a, m_inf, or k (diagnostic)");
    c_sweep->add_option("--lo", sweep_spec.lo, "axis start")->required();
    c_sweep->add_option("--hi", sweep_spec.hi, "axis end")->required();
    c_sweep->add_option("--count", sweep_spec.count, "number of samples");
    c_sweep->add_option("--csv", sweep_csv, "CSV output path or '-'");
    c_sweep->add_option("--svg", sweep_svg, "SVG output path or '-'");

    CLI::App* c_fig = app.add_subcommand("figures", "write the diffusion, schematic and sweep figures");
    detail::add_common(c_fig, fig_o);
    c_fig->add_option("--out", fig_dir, "output directory");

    CLI::App* c_self = app.add_subcommand("selftest", "quick built-in checks");
    (void)c_self;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const auto t0 = std::chrono::steady_clock::now();
        const auto wall_ms = [&t0] {
            return std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
                       std::chrono::steady_clock::now() - t0)
                .count();
        };

        if (c_steady->parsed()) detail::apply_config(c_steady, steady_o);
        if (c_k0->parsed()) detail::apply_config(c_k0, k0_o);
        if (c_k2->parsed()) detail::apply_config(c_k2, k2_o);
        if (c_ea->parsed()) detail::apply_config(c_ea, ea_o);
        if (c_sweep->parsed()) detail::apply_config(c_sweep, sweep_o);
        if (c_fig->parsed()) detail::apply_config(c_fig, fig_o);

        if (c_steady->parsed()) {
            PhysParams par{steady_o.p, steady_o.z, steady_o.gamma};
            const SteadyState ss = solve_steady_state(par);
            detail::emit_report({{"r0", ss.r0},
                                 {"area", ss.area},
                                 {"m0", ss.m0},
                                 {"sigma0", ss.sigma0}},
                                steady_o, wall_ms());
        } else if (c_k0->parsed()) {
            CommonOpts& o = k0_o;
            detail::parse_vdw(o);
            PhysParams par{o.p, o.z, o.gamma};
            const DiffusionModel model = detail::make_model(o);
            if (o.dim == 2) {
                const SteadyState ss = solve_steady_state(par);
                const double d0 = diffusion_at_steady(model, ss).d0;
                if (o.has_k_probe) {
                    detail::emit_report({{"k", o.k_probe},
                                         {"residual", bifurcation_residual(o.k_probe, par, ss, d0)},
                                         {"alpha", alpha_of(o.k_probe, par, ss, d0)}},
                                        o, wall_ms());
                } else {
                    const BifurcationPoint bp = solve_k0(par, ss, d0, o.tol_root, o.tol_quad);
                    detail::emit_report({{"k0", bp.k0},
                                         {"k0_hat", bp.k0_hat},
                                         {"alpha", bp.alpha},
                                         {"residual", bp.residual},
                                         {"transversality", bp.transversality},
                                         {"s1p", bp.s1p},
                                         {"d0", d0},
                                         {"r0", ss.r0},
                                         {"m0", ss.m0}},
                                        o, wall_ms());
                }
            } else {
                const OneDSteady ss = oned_steady(par);
                SteadyState proxy;
                proxy.m0 = ss.m0;
                const double d0 = diffusion_at_steady(model, proxy).d0;
                if (o.has_k_probe) {
                    detail::emit_report({{"k", o.k_probe},
                                         {"residual", oned_residual(o.k_probe, par, ss, d0)}},
                                        o, wall_ms());
                } else {
                    const OneDBifurcation bp = oned_k0(par, ss, d0, o.tol_root);
                    detail::emit_report({{"k0", bp.k0},
                                         {"k0_hat", bp.k0_hat},
                                         {"alpha", bp.alpha},
                                         {"residual", bp.residual},
                                         {"psi", bp.psi},
                                         {"d0", d0},
                                         {"l0", ss.l0},
                                         {"m0", ss.m0}},
                                        o, wall_ms());
                }
            }
        } else if (c_k2->parsed()) {
            CommonOpts& o = k2_o;
            detail::parse_vdw(o);
            PhysParams par{o.p, o.z, o.gamma};
            const DiffusionModel model = detail::make_model(o);
            const K2Options opt = detail::make_opts(o);
            if (o.dim == 2)
                detail::emit_report(detail::report_2d(compute_k2(par, model, opt)), o, wall_ms());
            else
                detail::emit_report(detail::report_1d(oned_k2(par, model, opt)), o, wall_ms());
        } else if (c_ea->parsed()) {
            CommonOpts& o = ea_o;
            detail::parse_vdw(o);
            PhysParams par{o.p, o.z, o.gamma};
            const CriticalEa ce = critical_ea(par, ea_m_inf, detail::make_opts(o));
            detail::emit_report({{"ea_star", ce.ea_star},
                                 {"k2_at_star", ce.k2_at_star},
                                 {"k2_at_zero", ce.k2_at_zero},
                                 {"k2_at_one", ce.k2_at_one},
                                 {"m_inf", ea_m_inf},
                                 {"policy", to_string(ce.policy)}},
                                o, wall_ms());
        } else if (c_sweep->parsed()) {
            CommonOpts& o = sweep_o;
            detail::parse_vdw(o);
            sweep_spec.axis = axis_from_string(sweep_axis);
            sweep_spec.base = PhysParams{o.p, o.z, o.gamma};
            sweep_spec.m_inf = o.m_inf;
            sweep_spec.e_a = o.e_a;
            sweep_spec.const_d = o.use_const;
            sweep_spec.const_d_value = o.const_d;
            sweep_spec.dim = o.dim;
            sweep_spec.opt = detail::make_opts(o);
            sweep_spec.timing = o.timing;
            const SweepTable table = run_sweep(sweep_spec);
            write_text_file(sweep_csv, emit_csv(table));
            if (!sweep_svg.empty()) {
                const std::string ycol = sweep_spec.axis == SweepAxis::k ? "residual" : "k2";
                write_text_file(sweep_svg, render_svg(figure_sweep(table, ycol)));
            }
        } else if (c_fig->parsed()) {
            CommonOpts& o = fig_o;
            detail::parse_vdw(o);
            const auto emit_pair = [&](const std::string& stem, const Figure& fig,
                                       const SweepTable& table) {
                const std::string svg_path = fig_dir + "/" + stem + ".svg";
                const std::string csv_path = fig_dir + "/" + stem + ".csv";
                write_text_file(svg_path, render_svg(fig));
                write_text_file(csv_path, emit_csv(table));
                std::cout << "wrote " << svg_path << "\n" << "wrote " << csv_path << "\n";
            };
            const Figure f1 = figure_dcurves(o.m_inf, {0.0, 0.35, 0.63}, 0.0, 8.0);
            emit_pair("fig1_dcurves", f1, figure_table(f1));
            const Figure f2 = figure_pitchfork_schematic();
            emit_pair("fig2_pitchfork", f2, figure_table(f2));
            SweepSpec spec;
            spec.axis = SweepAxis::e_a;
            spec.lo = 0.0;
            spec.hi = 1.0;
            spec.count = 21;
            spec.base = PhysParams{o.p, o.z, o.gamma};
            spec.m_inf = o.m_inf;
            spec.dim = 1;
            spec.opt = detail::make_opts(o);
            const SweepTable t3 = run_sweep(spec);
            emit_pair("fig3_k2_ea", figure_sweep(t3, "k2"), t3);
        } else if (c_self->parsed()) {
            return detail::selftest();
        }
    } catch (const config_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace cellbif::cli

#endif // CELLBIF_CLI_HPP
