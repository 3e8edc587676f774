#pragma once

// Command line front end. Four subcommands cover the whole workflow:
//
//   gen-data    draw low-regularity initial data, write it as field JSON
//   solve       integrate one trajectory, write the final field
//   converge    error vs step size against a resolved reference, as CSV
//   mass-drift  worst |M(u^n) - M(u^0)| vs step size, as CSV
//
// Step sizes accept the shorthand "2^-6" next to the usual "1e-3", and
// --taus takes either a comma list or a geometric range "start:stop:half"
// that halves from start until the next value would pass stop.
//
// Exit codes: 0 success, 1 blow-up while stepping, 2 usage error, 3 I/O
// failure. Payloads go to --out when given, otherwise to stdout with the
// one-line summary moved to stderr so pipes stay clean.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "json_io.hpp"
#include "rough_data.hpp"
#include "schemes.hpp"

namespace nlse {

struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by parse_args when --help was requested; carries the text to print.
struct help_requested {
    std::string text;
};

struct CliConfig {
    std::string subcommand;
    int n = 256;
    double tau = 0.0;           // solve only; 0 means "not set"
    std::vector<double> taus;   // converge / mass-drift
    double t_final = 1.0;
    double gamma = 2.0;         // regularity of the generated data
    double norm_gamma = 2.0;    // Sobolev exponent of the error norm
    int lambda = -1;
    std::vector<Scheme> schemes;
    std::uint64_t seed = 0;
    bool dealias = true;
    std::string in_path;        // solve: read u0 from here instead of drawing it
    std::string out_path;       // payload destination; empty means stdout
    std::string plot_path;      // optional SVG for the study subcommands
};

namespace detail {

// Plain double or "base^exponent" (so sweeps can say 2^-6 like the plots do).
inline double parse_real(const std::string& s) {
    const auto caret = s.find('^');
    if (caret != std::string::npos) {
        const double base = parse_real(s.substr(0, caret));
        const double expo = parse_real(s.substr(caret + 1));
        const double v = std::pow(base, expo);
        if (!std::isfinite(v)) throw usage_error("'" + s + "' is not a finite number");
        return v;
    }
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
        throw usage_error("cannot parse '" + s + "' as a number");
    return v;
}

inline std::vector<double> expand_taus(const std::string& s) {
    std::vector<double> taus;
    if (s.find(':') != std::string::npos) {
        const auto c1 = s.find(':');
        const auto c2 = s.find(':', c1 + 1);
        if (c2 == std::string::npos || s.find(':', c2 + 1) != std::string::npos)
            throw usage_error("tau range must look like start:stop:half");
        if (s.substr(c2 + 1) != "half")
            throw usage_error("unsupported range mode '" + s.substr(c2 + 1) + "' (only 'half')");
        const double start = parse_real(s.substr(0, c1));
        const double stop = parse_real(s.substr(c1 + 1, c2 - c1 - 1));
        if (start <= 0.0 || stop <= 0.0 || stop > start)
            throw usage_error("tau range needs 0 < stop <= start");
        // The tolerance keeps e.g. 1e-2:1.25e-3:half from dropping its last
        // point to a rounding crumb.
        for (double t = start; t >= stop * (1.0 - 1e-9); t *= 0.5) taus.push_back(t);
    } else {
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) taus.push_back(parse_real(item));
    }
    for (double t : taus)
        if (t <= 0.0) throw usage_error("step sizes must be positive");
    if (taus.empty()) throw usage_error("--taus names no step sizes");
    return taus;
}

inline std::vector<Scheme> parse_scheme_list(const std::string& s) {
    std::vector<Scheme> schemes;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            schemes.push_back(parse_scheme(item));
        } catch (const std::invalid_argument& e) {
            throw usage_error(e.what());
        }
    }
    if (schemes.empty()) throw usage_error("scheme list is empty");
    return schemes;
}

} // namespace detail

inline CliConfig parse_args(std::vector<std::string> args) {
    CliConfig cfg;
    CLI::App app{"pseudospectral benchmark for the periodic cubic Schroedinger equation"};
    app.name("nlse-bench");
    app.require_subcommand(1);

    std::string tau_str;
    std::string taus_str;
    std::string scheme_str = "lri";
    std::string schemes_str = "lri,nlri";
    double norm_gamma = 0.0;

    auto add_data_flags = [&cfg](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "grid size (power of two)")->capture_default_str();
        sub->add_option("--gamma", cfg.gamma, "data regularity exponent")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "rng seed")->capture_default_str();
    };

    CLI::App* gen = app.add_subcommand("gen-data", "draw rough initial data as field JSON");
    add_data_flags(gen);
    gen->add_option("--out", cfg.out_path, "output path (default stdout)");

    CLI::App* solve = app.add_subcommand("solve", "integrate one trajectory");
    add_data_flags(solve);
    solve->add_option("--tau", tau_str, "time step, e.g. 1e-3 or 2^-8")->required();
    solve->add_option("--t-final", cfg.t_final, "final time")->capture_default_str();
    solve->add_option("--lambda", cfg.lambda, "nonlinearity sign, -1 or +1")->capture_default_str();
    solve->add_option("--scheme", scheme_str, "lri|nlri|lie|strang|exp_euler|oracle")
        ->capture_default_str();
    solve->add_flag("--dealias,!--no-dealias", cfg.dealias,
                   "Galerkin-truncate products (default; --no-dealias folds instead)");
    solve->add_option("--in", cfg.in_path, "read initial data from field JSON");
    solve->add_option("--out", cfg.out_path, "final field path (default stdout)");

    CLI::App* conv = app.add_subcommand("converge", "error vs step size study");
    add_data_flags(conv);
    conv->add_option("--taus", taus_str, "comma list or start:stop:half")->required();
    conv->add_option("--t-final", cfg.t_final, "final time")->capture_default_str();
    conv->add_option("--norm-gamma", norm_gamma, "error norm exponent (default: --gamma)");
    conv->add_option("--lambda", cfg.lambda, "nonlinearity sign, -1 or +1")->capture_default_str();
    conv->add_option("--schemes", schemes_str, "comma list of schemes")->capture_default_str();
    conv->add_flag("--dealias,!--no-dealias", cfg.dealias,
                   "Galerkin-truncate products (default; --no-dealias folds instead)");
    conv->add_option("--out", cfg.out_path, "CSV path (default stdout)");
    conv->add_option("--plot", cfg.plot_path, "also write an SVG log-log plot");

    CLI::App* drift = app.add_subcommand("mass-drift", "mass deviation vs step size study");
    add_data_flags(drift);
    drift->add_option("--taus", taus_str, "comma list or start:stop:half")->required();
    drift->add_option("--t-final", cfg.t_final, "final time")->capture_default_str();
    drift->add_option("--lambda", cfg.lambda, "nonlinearity sign, -1 or +1")->capture_default_str();
    drift->add_option("--schemes", schemes_str, "comma list of schemes")->capture_default_str();
    drift->add_flag("--dealias,!--no-dealias", cfg.dealias,
                   "Galerkin-truncate products (default; --no-dealias folds instead)");
    drift->add_option("--out", cfg.out_path, "CSV path (default stdout)");
    drift->add_option("--plot", cfg.plot_path, "also write an SVG log-log plot");

    // CLI::App::parse consumes a reversed vector without the program name.
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        throw help_requested{subs.empty() ? app.help() : subs.front()->help()};
    } catch (const CLI::CallForAllHelp&) {
        throw help_requested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        throw usage_error(e.what());
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.subcommand = sub->get_name();

    if (cfg.n < 4 || (cfg.n & (cfg.n - 1)) != 0)
        throw usage_error("--n must be a power of two >= 4");
    if (cfg.gamma < 0.0) throw usage_error("--gamma must be >= 0");
    if (cfg.t_final < 0.0) throw usage_error("--t-final must be >= 0");
    if (cfg.lambda != -1 && cfg.lambda != 1) throw usage_error("--lambda must be -1 or +1");

    if (!tau_str.empty()) {
        cfg.tau = detail::parse_real(tau_str);
        if (cfg.tau <= 0.0) throw usage_error("--tau must be positive");
    }
    if (!taus_str.empty()) cfg.taus = detail::expand_taus(taus_str);

    if (cfg.subcommand == "solve") {
        cfg.schemes = detail::parse_scheme_list(scheme_str);
        if (cfg.schemes.size() != 1) throw usage_error("solve takes exactly one --scheme");
    } else if (cfg.subcommand == "converge" || cfg.subcommand == "mass-drift") {
        cfg.schemes = detail::parse_scheme_list(schemes_str);
    }

    cfg.norm_gamma = cfg.gamma;
    if (cfg.subcommand == "converge" && sub->count("--norm-gamma") > 0) {
        if (norm_gamma < 0.0) throw usage_error("--norm-gamma must be >= 0");
        cfg.norm_gamma = norm_gamma;
    }
    return cfg;
}

namespace detail {

// When the payload goes to stdout the summary moves to stderr.
inline std::ostream& summary_stream(bool payload_on_stdout) {
    return payload_on_stdout ? std::cerr : std::cout;
}

inline void cmd_gen_data(const CliConfig& cfg) {
    RoughDataSpec spec;
    spec.n = cfg.n;
    spec.gamma = cfg.gamma;
    spec.seed = cfg.seed;
    const SpectralField u0 = gen_rough_data(spec);
    const bool to_stdout = cfg.out_path.empty();
    if (to_stdout)
        write_field(u0, std::cout);
    else
        write_field(u0, cfg.out_path);
    summary_stream(to_stdout) << "gen-data: n=" << cfg.n << " gamma=" << cfg.gamma << " seed="
                              << cfg.seed << (to_stdout ? "" : " -> " + cfg.out_path) << "\n";
}

inline void cmd_solve(const CliConfig& cfg) {
    SpectralField u0 = [&] {
        if (!cfg.in_path.empty()) return read_field(cfg.in_path);
        RoughDataSpec spec;
        spec.n = cfg.n;
        spec.gamma = cfg.gamma;
        spec.seed = cfg.seed;
        return gen_rough_data(spec);
    }();
    const SchemeConfig sc =
        make_scheme_config(u0, cfg.tau, cfg.lambda, cfg.schemes.front(), cfg.dealias);
    auto [u_final, rec] = run_trajectory(u0, sc, cfg.t_final, true);
    const bool to_stdout = cfg.out_path.empty();
    if (to_stdout)
        write_field(u_final, std::cout);
    else
        write_field(u_final, cfg.out_path);
    summary_stream(to_stdout) << "solve: scheme=" << scheme_name(sc.scheme) << " n="
                              << u_final.grid->n << " tau=" << rec.tau << " t_final="
                              << cfg.t_final << " mass_drift=" << rec.mass_drift << " wall="
                              << rec.wall_time << "s\n";
}

inline void emit_study(const CliConfig& cfg, const std::vector<ConvergenceTable>& tables,
                       const std::vector<double>& guide_slopes, const char* slope_label) {
    const bool to_stdout = cfg.out_path.empty();
    if (to_stdout)
        emit_csv(tables, std::cout);
    else
        emit_csv(tables, cfg.out_path);
    if (!cfg.plot_path.empty()) emit_svg_plot(tables, cfg.plot_path, guide_slopes);
    auto& os = summary_stream(to_stdout);
    for (const auto& t : tables) {
        os << cfg.subcommand << ": " << scheme_name(t.scheme) << " " << slope_label << " ";
        if (std::isfinite(t.fitted_order))
            os << t.fitted_order << " (rms residual " << t.fit_residual << ")";
        else
            os << "n/a (too few points above the noise floor)";
        os << "\n";
    }
}

inline void cmd_converge(const CliConfig& cfg) {
    RoughDataSpec spec;
    spec.n = cfg.n;
    spec.gamma = cfg.gamma;
    spec.seed = cfg.seed;
    const SpectralField u0 = gen_rough_data(spec);
    const SchemeConfig base =
        make_scheme_config(u0, cfg.taus.front(), cfg.lambda, cfg.schemes.front(), cfg.dealias);
    const auto tables =
        run_convergence(u0, cfg.schemes, cfg.taus, cfg.norm_gamma, cfg.t_final, base, cfg.seed);
    emit_study(cfg, tables, {1.0}, "order");
}

inline void cmd_mass_drift(const CliConfig& cfg) {
    RoughDataSpec spec;
    spec.n = cfg.n;
    spec.gamma = cfg.gamma;
    spec.seed = cfg.seed;
    const SpectralField u0 = gen_rough_data(spec);
    const SchemeConfig base =
        make_scheme_config(u0, cfg.taus.front(), cfg.lambda, cfg.schemes.front(), cfg.dealias);
    const auto tables =
        run_mass_drift(u0, cfg.schemes, cfg.taus, cfg.t_final, base, cfg.seed, cfg.gamma);
    emit_study(cfg, tables, {5.0}, "drift slope");
}

} // namespace detail

// Parse and dispatch; maps every failure onto the documented exit codes.
inline int run_cli(const std::vector<std::string>& args) {
    CliConfig cfg;
    try {
        cfg = parse_args(args);
    } catch (const help_requested& h) {
        std::cout << h.text;
        return 0;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (cfg.subcommand == "gen-data")
            detail::cmd_gen_data(cfg);
        else if (cfg.subcommand == "solve")
            detail::cmd_solve(cfg);
        else if (cfg.subcommand == "converge")
            detail::cmd_converge(cfg);
        else
            detail::cmd_mass_drift(cfg);
        return 0;
    } catch (const blow_up_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace nlse
