#ifndef CELLBIF_SWEEP_HPP
#define CELLBIF_SWEEP_HPP

/**
 * @file sweep.hpp
 * @brief Parameter sweeps over the curvature pipelines with CSV and SVG
 *        emission.
 *
 * Sweeps run the 1D or radial pipeline across one parameter axis on a worker
 * pool; rows stay in axis order and failed samples carry the error kind in a
 * dedicated column instead of aborting the sweep.  The K axis is a diagnostic
 * sweep: it tabulates the bifurcation-condition residual as a function of K
 * instead of rerunning the curvature pipeline.  Output is plain CSV with
 * %.17g formatting (lossless for doubles) and a self-contained 800x600 SVG.
 */

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "expansion.hpp"
#include "model.hpp"
#include "oned.hpp"

namespace cellbif {

// ============================================================================
// Sweep definition and execution
// ============================================================================

/// Swept parameter.
enum class SweepAxis { p, z, gamma, e_a, m_inf, k };

inline const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::p: return "p";
        case SweepAxis::z: return "z";
        case SweepAxis::gamma: return "gamma";
        case SweepAxis::e_a: return "e_a";
        case SweepAxis::m_inf: return "m_inf";
        default: return "k";
    }
}

/// @throws config_error for an unknown axis name
inline SweepAxis axis_from_string(const std::string& s) {
    if (s == "p") return SweepAxis::p;
    if (s == "z") return SweepAxis::z;
    if (s == "gamma") return SweepAxis::gamma;
    if (s == "e_a") return SweepAxis::e_a;
    if (s == "m_inf") return SweepAxis::m_inf;
    if (s == "k") return SweepAxis::k;
    throw config_error("unknown sweep axis '" + s + "'");
}

/// One sweep request.
struct SweepSpec {
    SweepAxis axis = SweepAxis::e_a;
    double lo = 0.0, hi = 1.0;
    int count = 21;
    PhysParams base;
    double m_inf = 10.0; ///< van der Waals saturation level
    double e_a = 0.0;    ///< van der Waals attraction (unless swept)
    bool const_d = false;
    double const_d_value = 1.0;
    int dim = 2; ///< 1 or 2
    K2Options opt;
    bool timing = false; ///< opt-in wall-time column (non-deterministic)
};

/// One sweep sample: numeric cells follow the table header, then two strings.
struct SweepRow {
    std::vector<double> num;
    std::string verdict;
    std::string error;
};

/// Column-labelled sweep output.
struct SweepTable {
    std::vector<std::string> columns; ///< numeric columns; verdict/error implied
    std::vector<SweepRow> rows;
};

namespace detail {

inline SweepRow sweep_one(const SweepSpec& spec, double value, std::size_t n_num) {
    SweepRow row;
    row.num.assign(n_num, std::nan(""));
    row.num[0] = value;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        PhysParams par = spec.base;
        double ea = spec.e_a, minf = spec.m_inf;
        double k_diag = 0.0;
        switch (spec.axis) {
            case SweepAxis::p: par.p = value; break;
            case SweepAxis::z: par.z = value; break;
            case SweepAxis::gamma: par.gamma = value; break;
            case SweepAxis::e_a: ea = value; break;
            case SweepAxis::m_inf: minf = value; break;
            case SweepAxis::k: k_diag = value; break;
        }
        const DiffusionModel model = spec.const_d
                                         ? DiffusionModel::constant(spec.const_d_value)
                                         : DiffusionModel::van_der_waals(minf, ea);
        if (spec.axis == SweepAxis::k) {
            const SteadyState ss = solve_steady_state(par);
            const double d0 = diffusion_at_steady(model, ss).d0;
            row.num[1] = bifurcation_residual(k_diag, par, ss, d0);
        } else if (spec.dim == 1) {
            const OneDReport rep = oned_k2(par, model, spec.opt);
            row.num[1] = rep.k0;
            row.num[2] = rep.alpha;
            row.num[3] = rep.k2;
            row.num[4] = rep.a1;
            row.num[5] = rep.a2;
            row.num[6] = rep.a3;
            row.num[7] = rep.a4;
            row.verdict = to_string(rep.verdict);
        } else {
            const K2Report rep = compute_k2(par, model, spec.opt);
            row.num[1] = rep.k0;
            row.num[2] = rep.alpha;
            row.num[3] = rep.k2;
            row.num[4] = rep.a1;
            row.num[5] = rep.a2;
            row.num[6] = rep.a3;
            row.num[7] = rep.a4;
            row.verdict = to_string(rep.verdict);
        }
    } catch (const error& e) {
        row.error = e.kind();
    } catch (const std::exception&) {
        row.error = "evaluation_error";
    }
    if (spec.timing) {
        const auto t1 = std::chrono::steady_clock::now();
        row.num[n_num - 1] =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
                .count();
    }
    return row;
}

} // namespace detail

/**
 * @brief Run a sweep on a worker pool; rows come back in axis order.
 * @throws empty_sweep_error when count < 1, config_error on a bad range
 */
inline SweepTable run_sweep(const SweepSpec& spec) {
    if (spec.count < 1) throw empty_sweep_error("sweep needs at least one sample");
    if (!(spec.hi >= spec.lo)) throw config_error("sweep range is reversed");
    if (spec.dim != 1 && spec.dim != 2) throw config_error("sweep dim must be 1 or 2");

    SweepTable table;
    table.columns = {to_string(spec.axis)};
    if (spec.axis == SweepAxis::k) {
        table.columns.push_back("residual");
    } else {
        for (const char* c : {"k0", "alpha", "k2", "a1", "a2", "a3", "a4"})
            table.columns.push_back(c);
    }
    if (spec.timing) table.columns.push_back("wall_ms");
    const std::size_t n_num = table.columns.size();

    std::vector<double> values(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i)
        values[static_cast<std::size_t>(i)] =
            spec.count == 1 ? spec.lo
                            : spec.lo + (spec.hi - spec.lo) * i / (spec.count - 1);

    table.rows.resize(values.size());
    std::atomic<std::size_t> next{0};
    const unsigned n_workers = std::max(
        1u, std::min({std::thread::hardware_concurrency(), 8u,
                      static_cast<unsigned>(values.size())}));
    std::vector<std::future<void>> futures;
    futures.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next.fetch_add(1); i < values.size(); i = next.fetch_add(1))
                table.rows[i] = detail::sweep_one(spec, values[i], n_num);
        }));
    }
    for (auto& f : futures) f.get();
    return table;
}

// ============================================================================
// CSV
// ============================================================================

/// Shortest representation that round-trips a double exactly.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Serialize a table; numeric cells use %.17g, then verdict and error columns.
inline std::string emit_csv(const SweepTable& table) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out << ',';
        out << table.columns[i];
    }
    out << ",verdict,error\n";
    for (const SweepRow& row : table.rows) {
        for (std::size_t i = 0; i < row.num.size(); ++i) {
            if (i) out << ',';
            out << format_double(row.num[i]);
        }
        out << ',' << row.verdict << ',' << row.error << '\n';
    }
    return out.str();
}

/// Parse emit_csv output back into a table.
/// @throws io_error on structural mismatch
inline SweepTable parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw io_error("parse_csv: empty input");
    const auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(s);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.emplace_back();
        return cells;
    };
    SweepTable table;
    std::vector<std::string> header = split(line);
    if (header.size() < 3 || header[header.size() - 2] != "verdict" ||
        header.back() != "error")
        throw io_error("parse_csv: missing verdict/error columns");
    table.columns.assign(header.begin(), header.end() - 2);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line);
        if (cells.size() != header.size())
            throw io_error("parse_csv: row has " + std::to_string(cells.size()) +
                           " cells, expected " + std::to_string(header.size()));
        SweepRow row;
        row.num.resize(table.columns.size());
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (cells[i] == "nan") {
                row.num[i] = std::nan("");
            } else {
                std::size_t used = 0;
                try {
                    row.num[i] = std::stod(cells[i], &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (cells[i].empty() || used != cells[i].size())
                    throw io_error("parse_csv: bad number '" + cells[i] + "'");
            }
        }
        row.verdict = cells[cells.size() - 2];
        row.error = cells.back();
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ============================================================================
// Figures
// ============================================================================

/// One plotted curve.
struct Series {
    std::string label;
    std::vector<double> x, y;
};

/// Figure description rendered to SVG.
struct Figure {
    std::string title, xlabel, ylabel;
    std::vector<Series> series;
    bool zero_line = false; ///< draw a dashed y = 0 guide
};

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace detail

/**
 * @brief Render a figure as a deterministic 800x600 SVG string.
 *
 * Five ticks per axis, blue/green-first palette, optional zero guide line.
 */
inline std::string render_svg(const Figure& fig) {
    static const char* palette[] = {"#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#d62728"};
    const double width = 800.0, height = 600.0;
    const double ml = 80.0, mr = 30.0, mt = 50.0, mb = 70.0;

    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    bool first = true;
    for (const Series& s : fig.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (std::isnan(s.x[i]) || std::isnan(s.y[i])) continue;
            if (first) {
                x0 = x1 = s.x[i];
                y0 = y1 = s.y[i];
                first = false;
            } else {
                x0 = std::min(x0, s.x[i]);
                x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, s.y[i]);
                y1 = std::max(y1, s.y[i]);
            }
        }
    }
    if (x1 <= x0) x1 = x0 + 1.0;
    if (y1 <= y0) {
        y0 -= 1.0;
        y1 += 1.0;
    } else {
        const double pad = 0.05 * (y1 - y0);
        y0 -= pad;
        y1 += pad;
    }
    const auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (width - ml - mr); };
    const auto py = [&](double y) {
        return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
           "viewBox=\"0 0 800 600\">\n";
    out << "<rect width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
    out << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"18\">"
        << fig.title << "</text>\n";

    for (int t = 0; t < 5; ++t) {
        const double xv = x0 + (x1 - x0) * t / 4.0;
        const double yv = y0 + (y1 - y0) * t / 4.0;
        const std::string xp = detail::fmt2(px(xv)), yp = detail::fmt2(py(yv));
        out << "<line x1=\"" << xp << "\" y1=\"" << detail::fmt2(height - mb) << "\" x2=\"" << xp
            << "\" y2=\"" << detail::fmt2(mt) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<line x1=\"" << detail::fmt2(ml) << "\" y1=\"" << yp << "\" x2=\""
            << detail::fmt2(width - mr) << "\" y2=\"" << yp
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << xp << "\" y=\"" << detail::fmt2(height - mb + 20.0)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << detail::fmt6(xv) << "</text>\n";
        out << "<text x=\"" << detail::fmt2(ml - 8.0) << "\" y=\"" << detail::fmt2(py(yv) + 4.0)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
            << detail::fmt6(yv) << "</text>\n";
    }
    out << "<rect x=\"" << detail::fmt2(ml) << "\" y=\"" << detail::fmt2(mt) << "\" width=\""
        << detail::fmt2(width - ml - mr) << "\" height=\"" << detail::fmt2(height - mt - mb)
        << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

    if (fig.zero_line && y0 < 0.0 && y1 > 0.0) {
        out << "<line x1=\"" << detail::fmt2(ml) << "\" y1=\"" << detail::fmt2(py(0.0))
            << "\" x2=\"" << detail::fmt2(width - mr) << "\" y2=\"" << detail::fmt2(py(0.0))
            << "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n";
    }

    for (std::size_t si = 0; si < fig.series.size(); ++si) {
        const Series& s = fig.series[si];
        const char* color = palette[si % 5];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        bool started = false;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (std::isnan(s.x[i]) || std::isnan(s.y[i])) continue;
            if (started) out << ' ';
            out << detail::fmt2(px(s.x[i])) << ',' << detail::fmt2(py(s.y[i]));
            started = true;
        }
        out << "\"/>\n";
        out << "<text x=\"" << detail::fmt2(width - mr - 10.0) << "\" y=\""
            << detail::fmt2(mt + 20.0 + 18.0 * static_cast<double>(si))
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\" fill=\""
            << color << "\">" << s.label << "</text>\n";
    }

    out << "<text x=\"" << detail::fmt2(ml + (width - ml - mr) / 2.0) << "\" y=\""
        << detail::fmt2(height - 15.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << fig.xlabel
        << "</text>\n";
    out << "<text x=\"20\" y=\"" << detail::fmt2(mt + (height - mt - mb) / 2.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
           "transform=\"rotate(-90 20 "
        << detail::fmt2(mt + (height - mt - mb) / 2.0) << ")\">" << fig.ylabel << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

/// Write text to a file, or to stdout when path is "-".
/// @throws io_error when the file cannot be written
inline void write_text_file(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw io_error("failed writing '" + path + "'");
}

// ============================================================================
// Figure builders
// ============================================================================

/// Diffusion curves D(m) for several attraction strengths (saturation fixed).
inline Figure figure_dcurves(double m_inf, const std::vector<double>& e_as, double m_lo,
                             double m_hi, int n_pts = 161) {
    Figure fig;
    fig.title = "van der Waals diffusion D(m)";
    fig.xlabel = "m";
    fig.ylabel = "D(m)";
    fig.zero_line = true;
    for (double ea : e_as) {
        const DiffusionModel model = DiffusionModel::van_der_waals(m_inf, ea);
        Series s;
        s.label = "e_A = " + detail::fmt6(ea);
        for (int i = 0; i < n_pts; ++i) {
            const double m = m_lo + (m_hi - m_lo) * i / (n_pts - 1);
            s.x.push_back(m);
            s.y.push_back(model.eval(m).d0);
        }
        fig.series.push_back(std::move(s));
    }
    return fig;
}

/// Pitchfork sign schematic: branch speed against K for both curvature signs.
inline Figure figure_pitchfork_schematic() {
    Figure fig;
    fig.title = "pitchfork branches K = K0 + K2 V^2";
    fig.xlabel = "K - K0";
    fig.ylabel = "V";
    fig.zero_line = true;
    Series direct, inverse;
    direct.label = "direct (K2 > 0)";
    inverse.label = "inverse (K2 < 0)";
    for (int i = 0; i <= 100; ++i) {
        const double v = -1.0 + 2.0 * i / 100.0;
        direct.x.push_back(v * v);
        direct.y.push_back(v);
        inverse.x.push_back(-v * v);
        inverse.y.push_back(v);
    }
    fig.series.push_back(std::move(direct));
    fig.series.push_back(std::move(inverse));
    return fig;
}

/// Plot one numeric column of a sweep table against the axis column.
/// @throws config_error when the column does not exist
inline Figure figure_sweep(const SweepTable& table, const std::string& ycol) {
    std::size_t yi = table.columns.size();
    for (std::size_t i = 1; i < table.columns.size(); ++i)
        if (table.columns[i] == ycol) yi = i;
    if (yi == table.columns.size())
        throw config_error("sweep table has no column '" + ycol + "'");
    Figure fig;
    fig.title = ycol + " across the " + table.columns[0] + " sweep";
    fig.xlabel = table.columns[0];
    fig.ylabel = ycol;
    fig.zero_line = true;
    Series s;
    s.label = ycol + "(" + table.columns[0] + ")";
    for (const SweepRow& row : table.rows) {
        s.x.push_back(row.num[0]);
        s.y.push_back(row.num[yi]);
    }
    fig.series.push_back(std::move(s));
    return fig;
}

/// CSV view of a figure: label,x,y rows.
inline SweepTable figure_table(const Figure& fig) {
    SweepTable table;
    table.columns = {"series", "x", "y"};
    for (std::size_t si = 0; si < fig.series.size(); ++si) {
        const Series& s = fig.series[si];
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            SweepRow row;
            row.num = {static_cast<double>(si), s.x[i], s.y[i]};
            row.verdict = s.label;
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

} // namespace cellbif

#endif // CELLBIF_SWEEP_HPP
