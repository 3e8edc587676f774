#pragma once

// Experiment drivers: trajectories, convergence studies, mass-drift
// studies, order fitting, and CSV/SVG emission.
//
// A convergence study runs one scheme over a decreasing list of step sizes
// against a single high-accuracy oracle reference and fits the empirical
// order as the least-squares slope of log(error) vs log(tau). Mass-drift
// studies record the worst mass deviation along each trajectory instead of
// an error norm. All drivers are deterministic: records are produced and
// written in a fixed order, and floating-point values are serialized in
// shortest round-trip form.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "schemes.hpp"

namespace nlse {

struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Shortest round-trip decimal form, deterministic across runs.
inline std::string fmt_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace detail

struct RunRecord {
    Scheme scheme = Scheme::LRI;
    double tau = 0.0;       // adjusted step actually used
    int n = 0;
    std::uint64_t seed = 0;
    double gamma = 0.0;     // regularity label for the row (norm or data gamma)
    double t_final = 0.0;
    double error_norm_gamma = 0.0; // H^gamma distance to the oracle reference
    double mass_drift = 0.0;       // max over the trajectory of |M(u^n) - M0|
    double wall_time = 0.0;        // seconds
};

struct ConvergenceTable {
    Scheme scheme = Scheme::LRI;
    std::vector<RunRecord> records; // sorted by descending tau
    double fitted_order = std::numeric_limits<double>::quiet_NaN();
    double fit_residual = std::numeric_limits<double>::quiet_NaN();
};

// Least-squares slope of log(error) against log(tau). Points at or below
// `floor` are treated as roundoff and excluded; fewer than 3 surviving
// points is an error because a two-point "fit" says nothing about order.
inline std::pair<double, double> fit_order(const std::vector<std::pair<double, double>>& points,
                                           double floor = 1e-10) {
    std::vector<double> lx, ly;
    for (const auto& [tau, err] : points) {
        if (err >= floor && std::isfinite(err) && tau > 0.0) {
            lx.push_back(std::log(tau));
            ly.push_back(std::log(err));
        }
    }
    const std::size_t m = lx.size();
    if (m < 3)
        throw std::invalid_argument("fit_order: fewer than 3 usable points above the floor");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = m * sxx - sx * sx;
    const double slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / m;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ly[i] - (slope * lx[i] + intercept);
        rss += r * r;
    }
    return {slope, std::sqrt(rss / m)};
}

namespace detail {

inline bool all_finite(const SpectralField& u) {
    for (const auto& c : u.coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

} // namespace detail

// Iterate the configured stepper from u0 to t_final. The step is adjusted
// to tau' = t_final / round(t_final / tau) so the horizon is hit exactly;
// t_final = 0 returns the data unchanged. Throws blow_up_error (with the
// step index) if a non-finite value appears.
inline std::pair<SpectralField, RunRecord> run_trajectory(const SpectralField& u0,
                                                          const SchemeConfig& cfg,
                                                          double t_final,
                                                          bool record_invariants = true) {
    if (t_final < 0.0) throw std::invalid_argument("run_trajectory: t_final must be >= 0");
    RunRecord rec;
    rec.scheme = cfg.scheme;
    rec.n = u0.grid->n;
    rec.t_final = t_final;
    rec.tau = cfg.tau;

    if (t_final == 0.0) return {u0, rec};

    std::size_t steps = static_cast<std::size_t>(std::llround(t_final / cfg.tau));
    if (steps == 0) steps = 1;
    SchemeConfig adj = cfg;
    adj.tau = t_final / static_cast<double>(steps);
    rec.tau = adj.tau;

    const auto t_start = std::chrono::steady_clock::now();
    SpectralField u = u0;
    double drift = 0.0;
    for (std::size_t s = 0; s < steps; ++s) {
        u = step_once(u, adj);
        if (!detail::all_finite(u)) throw blow_up_error(s);
        if (record_invariants) drift = std::max(drift, std::abs(mass(u) - cfg.m0));
    }
    rec.mass_drift = drift;
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {std::move(u), rec};
}

namespace detail {

inline void require_tau_list(const std::vector<double>& taus) {
    if (taus.size() < 3)
        throw std::invalid_argument("need at least 3 step sizes for an order fit");
    for (std::size_t i = 0; i + 1 < taus.size(); ++i)
        if (!(taus[i] > taus[i + 1]))
            throw std::invalid_argument("step sizes must be strictly decreasing");
    if (taus.back() <= 0.0) throw std::invalid_argument("step sizes must be positive");
}

// Fit a table's (tau, value) pairs, tolerating tables whose points all sit
// at the roundoff floor (fitted order stays NaN in that case).
inline void fit_table(ConvergenceTable& table, double floor,
                      double (*value)(const RunRecord&)) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : table.records) pts.emplace_back(r.tau, value(r));
    try {
        std::tie(table.fitted_order, table.fit_residual) = fit_order(pts, floor);
    } catch (const std::invalid_argument&) {
        // leave NaN
    }
}

} // namespace detail

// Convergence study: one oracle reference per call, then every scheme at
// every step size; errors are H^gamma_norm distances at t_final. The seed
// and gamma arguments only label the emitted records.
inline std::vector<ConvergenceTable> run_convergence(const SpectralField& u0,
                                                     const std::vector<Scheme>& schemes,
                                                     const std::vector<double>& taus,
                                                     double gamma_norm, double t_final,
                                                     const SchemeConfig& cfg_base,
                                                     std::uint64_t seed_label = 0) {
    detail::require_tau_list(taus);
    if (t_final <= 0.0) throw std::invalid_argument("run_convergence: t_final must be positive");

    const double tau_min = taus.back();
    const auto substeps = static_cast<std::size_t>(std::ceil(100.0 * t_final / tau_min));
    const SpectralField reference = oracle_evolve(u0, t_final, substeps, cfg_base);

    std::vector<ConvergenceTable> tables;
    for (Scheme scheme : schemes) {
        ConvergenceTable table;
        table.scheme = scheme;
        for (double tau : taus) {
            SchemeConfig cfg = cfg_base;
            cfg.scheme = scheme;
            cfg.tau = tau;
            try {
                auto [u_final, rec] = run_trajectory(u0, cfg, t_final, true);
                rec.seed = seed_label;
                rec.gamma = gamma_norm;
                rec.error_norm_gamma = sobolev_norm(u_final - reference, gamma_norm);
                table.records.push_back(rec);
            } catch (const blow_up_error& e) {
                throw blow_up_error(std::string(scheme_name(scheme)) + " at tau=" +
                                        detail::fmt_double(tau), e);
            }
        }
        detail::fit_table(table, 1e-10, [](const RunRecord& r) { return r.error_norm_gamma; });
        tables.push_back(std::move(table));
    }
    return tables;
}

// Mass-drift study: no reference needed; the figure of merit is the worst
// |M(u^n) - M0| along each trajectory. Drift fits use a 1e-14 floor since
// the corrected scheme parks at roundoff almost immediately.
inline std::vector<ConvergenceTable> run_mass_drift(const SpectralField& u0,
                                                    const std::vector<Scheme>& schemes,
                                                    const std::vector<double>& taus,
                                                    double t_final, const SchemeConfig& cfg_base,
                                                    std::uint64_t seed_label = 0,
                                                    double gamma_label = 0.0) {
    detail::require_tau_list(taus);
    if (t_final <= 0.0) throw std::invalid_argument("run_mass_drift: t_final must be positive");

    std::vector<ConvergenceTable> tables;
    for (Scheme scheme : schemes) {
        ConvergenceTable table;
        table.scheme = scheme;
        for (double tau : taus) {
            SchemeConfig cfg = cfg_base;
            cfg.scheme = scheme;
            cfg.tau = tau;
            try {
                auto [u_final, rec] = run_trajectory(u0, cfg, t_final, true);
                rec.seed = seed_label;
                rec.gamma = gamma_label;
                table.records.push_back(rec);
            } catch (const blow_up_error& e) {
                throw blow_up_error(std::string(scheme_name(scheme)) + " at tau=" +
                                        detail::fmt_double(tau), e);
            }
        }
        detail::fit_table(table, 1e-14, [](const RunRecord& r) { return r.mass_drift; });
        tables.push_back(std::move(table));
    }
    return tables;
}

inline void emit_csv(const std::vector<ConvergenceTable>& tables, std::ostream& os) {
    os << "scheme,n,seed,gamma,tau,t_final,error,mass_drift,wall_time\n";
    std::vector<const RunRecord*> rows;
    for (const auto& t : tables)
        for (const auto& r : t.records) rows.push_back(&r);
    std::stable_sort(rows.begin(), rows.end(), [](const RunRecord* a, const RunRecord* b) {
        const int c = std::string_view(scheme_name(a->scheme)).compare(scheme_name(b->scheme));
        if (c != 0) return c < 0;
        return a->tau > b->tau;
    });
    for (const RunRecord* r : rows) {
        os << scheme_name(r->scheme) << ',' << r->n << ',' << r->seed << ','
           << detail::fmt_double(r->gamma) << ',' << detail::fmt_double(r->tau) << ','
           << detail::fmt_double(r->t_final) << ',' << detail::fmt_double(r->error_norm_gamma)
           << ',' << detail::fmt_double(r->mass_drift) << ','
           << detail::fmt_double(r->wall_time) << '\n';
    }
}

inline void emit_csv(const std::vector<ConvergenceTable>& tables, const std::string& path) {
    std::ofstream ofs(path, std::ios::binary);
    if (!ofs) throw io_error("cannot open '" + path + "' for writing");
    emit_csv(tables, ofs);
    ofs.flush();
    if (!ofs) throw io_error("write to '" + path + "' failed");
}

namespace detail {

// Linear maps from log10 data coordinates to SVG pixel coordinates.
struct LogAxis {
    double lo = 0.0, hi = 1.0; // log10 data range
    double px0 = 0.0, px1 = 1.0;
    double map(double v) const {
        const double t = (std::log10(v) - lo) / (hi - lo);
        return px0 + t * (px1 - px0);
    }
};

inline const char* series_color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    return palette[i % 6];
}

} // namespace detail

// Standalone log-log SVG plot: one polyline per table (class "series"),
// one dashed guide line per reference slope (class "guide"), legend with
// the fitted orders. Coordinates are emitted in shortest round-trip form
// so re-rendering identical tables is byte-identical.
inline void emit_svg_plot(const std::vector<ConvergenceTable>& tables, std::ostream& os,
                          const std::vector<double>& reference_slopes) {
    if (tables.empty()) throw std::invalid_argument("emit_svg_plot: no tables");
    for (const auto& t : tables)
        if (t.records.empty()) throw std::invalid_argument("emit_svg_plot: empty table");

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    auto view_value = [](const RunRecord& r) {
        return r.error_norm_gamma > 0.0 ? r.error_norm_gamma : r.mass_drift;
    };
    for (const auto& t : tables)
        for (const auto& r : t.records) {
            const double v = view_value(r);
            if (v <= 0.0) continue;
            xmin = std::min(xmin, r.tau);
            xmax = std::max(xmax, r.tau);
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (!(xmin < xmax) || !(ymin <= ymax))
        throw std::invalid_argument("emit_svg_plot: no positive data to plot");
    if (ymin == ymax) ymax = ymin * 10.0;

    const double W = 640, H = 480;
    detail::LogAxis xa{std::log10(xmin), std::log10(xmax), 70.0, W - 170.0};
    detail::LogAxis ya{std::log10(ymin), std::log10(ymax), H - 50.0, 20.0};

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << ' ' << H
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect x=\"70\" y=\"20\" width=\"" << (W - 240) << "\" height=\"" << (H - 70)
       << "\" fill=\"none\" stroke=\"#444\"/>\n";

    // Decade tick labels.
    for (int d = static_cast<int>(std::ceil(xa.lo)); d <= static_cast<int>(std::floor(xa.hi)); ++d) {
        const double px = xa.map(std::pow(10.0, d));
        os << "<line x1=\"" << detail::fmt_double(px) << "\" y1=\"" << (H - 50)
           << "\" x2=\"" << detail::fmt_double(px) << "\" y2=\"" << (H - 45)
           << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << detail::fmt_double(px) << "\" y=\"" << (H - 32)
           << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(ya.lo)); d <= static_cast<int>(std::floor(ya.hi)); ++d) {
        const double py = ya.map(std::pow(10.0, d));
        os << "<line x1=\"65\" y1=\"" << detail::fmt_double(py) << "\" x2=\"70\" y2=\""
           << detail::fmt_double(py) << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"60\" y=\"" << detail::fmt_double(py + 4)
           << "\" text-anchor=\"end\">1e" << d << "</text>\n";
    }
    os << "<text x=\"" << detail::fmt_double((70 + W - 170) / 2) << "\" y=\"" << (H - 12)
       << "\" text-anchor=\"middle\">tau</text>\n";

    // Dashed guides: anchored at the first table's largest-tau point, drawn
    // across the full tau range with the requested log-log slope.
    for (std::size_t gi = 0; gi < reference_slopes.size(); ++gi) {
        const double s = reference_slopes[gi];
        const auto& anchor = tables.front().records.front();
        const double av = view_value(anchor);
        if (av <= 0.0) continue;
        // Anchor at the first series' coarsest point, offset a factor of 2
        // below it so the guide does not overdraw the data.
        const double y0 = av * std::pow(xmin / anchor.tau, s) * 0.5;
        const double y1 = av * std::pow(xmax / anchor.tau, s) * 0.5;
        os << "<line class=\"guide\" x1=\"" << detail::fmt_double(xa.map(xmin)) << "\" y1=\""
           << detail::fmt_double(ya.map(y0)) << "\" x2=\"" << detail::fmt_double(xa.map(xmax))
           << "\" y2=\"" << detail::fmt_double(ya.map(y1))
           << "\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n";
        os << "<text x=\"" << detail::fmt_double(W - 160) << "\" y=\""
           << detail::fmt_double(40.0 + 18.0 * (tables.size() + gi))
           << "\" fill=\"#888\">slope " << detail::fmt_double(s) << "</text>\n";
    }

    // Data series and legend.
    for (std::size_t ti = 0; ti < tables.size(); ++ti) {
        const auto& t = tables[ti];
        os << "<polyline class=\"series\" fill=\"none\" stroke=\"" << detail::series_color(ti)
           << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& r : t.records) {
            const double v = view_value(r);
            if (v <= 0.0) continue;
            if (!first) os << ' ';
            os << detail::fmt_double(xa.map(r.tau)) << ',' << detail::fmt_double(ya.map(v));
            first = false;
        }
        os << "\"/>\n";
        std::string order = std::isnan(t.fitted_order) ? std::string("n/a")
                                                       : detail::fmt_double(t.fitted_order);
        os << "<line x1=\"" << detail::fmt_double(W - 160) << "\" y1=\""
           << detail::fmt_double(36.0 + 18.0 * ti) << "\" x2=\"" << detail::fmt_double(W - 140)
           << "\" y2=\"" << detail::fmt_double(36.0 + 18.0 * ti) << "\" stroke=\""
           << detail::series_color(ti) << "\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << detail::fmt_double(W - 134) << "\" y=\""
           << detail::fmt_double(40.0 + 18.0 * ti) << "\">" << scheme_name(t.scheme)
           << " (order " << order << ")</text>\n";
    }
    os << "</svg>\n";
}

inline void emit_svg_plot(const std::vector<ConvergenceTable>& tables, const std::string& path,
                          const std::vector<double>& reference_slopes) {
    std::ofstream ofs(path, std::ios::binary);
    if (!ofs) throw io_error("cannot open '" + path + "' for writing");
    emit_svg_plot(tables, ofs, reference_slopes);
    ofs.flush();
    if (!ofs) throw io_error("write to '" + path + "' failed");
}

} // namespace nlse
