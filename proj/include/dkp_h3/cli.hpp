#pragma once

// Command-line front end. `run` is separate from main() so tests can drive
// it with in-memory streams.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "errors.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "modes.hpp"
#include "specfun.hpp"
#include "verify.hpp"

namespace dkp_h3::cli {

enum ExitCode { ok = 0, tolerance_failure = 1, usage_error = 2 };

struct RunConfig {
    std::string subcommand;
    std::string family = "sigma";
    std::optional<double> eps;
    int m = 1;
    std::optional<std::string> sigma; // real or "(re,im)"
    std::optional<double> kappa;      // sigma = i kappa
    double lambda = 1.0;
    std::optional<double> mass;
    std::string radial = "J";
    std::string axial = "decaying";
    std::string phi0 = "gaussian"; // massless scalar: gaussian | bessel
    double r0 = 1.5;
    double z0 = 0.0;
    double width = 0.7;
    Grid grid;
    double h = 1.0e-3;
    int stencil = 2;
    bool no_richardson = false;
    double tol = 1.0e-6;
    std::string system = "full";
    std::string kappa_range = "0:2:41";
    std::string fn = "J";
    double order = 0.0;
    double arg = 1.0;
    std::string output;
    std::string format = "csv";
    std::string config_file;
};

namespace detail {

inline std::string num(double v) { return io::format_number(v); }

inline cplx parse_complex(const std::string &s) {
    std::istringstream in(s);
    cplx v;
    if (!s.empty() && s.front() == '(') {
        in >> v;
    } else {
        double re = 0.0;
        in >> re;
        v = re;
    }
    if (in.fail() || !(in >> std::ws).eof())
        throw std::invalid_argument("cannot parse complex number '" + s + "'");
    return v;
}

struct KappaRange {
    double a;
    double b;
    int n;
};

inline KappaRange parse_range(const std::string &s) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ':'))
        parts.push_back(item);
    if (parts.size() != 3)
        throw std::invalid_argument("range must be a:b:n, got '" + s + "'");
    KappaRange r{};
    std::size_t used = 0;
    try {
        r.a = std::stod(parts[0], &used);
        if (used != parts[0].size())
            throw std::invalid_argument("");
        r.b = std::stod(parts[1], &used);
        if (used != parts[1].size())
            throw std::invalid_argument("");
        r.n = std::stoi(parts[2], &used);
        if (used != parts[2].size())
            throw std::invalid_argument("");
    } catch (const std::exception &) {
        throw std::invalid_argument("range must be a:b:n, got '" + s + "'");
    }
    if (r.n < 2 || !(r.b > r.a))
        throw std::invalid_argument("range needs b > a and n >= 2, got '" + s + "'");
    return r;
}

/// Flat key=value file; blank lines and lines starting with '#' are skipped.
inline std::map<std::string, std::string> read_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

/// Inserts --key=value for config keys not already given on the command line
/// (flags win). Inserted right after the subcommand name.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (!path)
        return args;
    const auto kv = read_config_file(*path);
    auto given = [&](const std::string &key) {
        const std::string flag = "--" + key;
        return std::any_of(args.begin(), args.end(), [&](const std::string &a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    };
    std::vector<std::string> extra;
    for (const auto &[k, v] : kv) {
        if (k == "config" || k == "subcommand")
            continue;
        if (!given(k))
            extra.push_back("--" + k + "=" + v);
    }
    const auto pos = args.empty() ? args.begin() : args.begin() + 1;
    args.insert(pos, extra.begin(), extra.end());
    return args;
}

inline RadialKind radial_kind(const std::string &s) {
    if (s == "J")
        return RadialKind::J;
    if (s == "Y")
        return RadialKind::Y;
    throw std::invalid_argument("radial kind must be J or Y");
}

inline AxialKind axial_kind(const std::string &s) {
    if (s == "decaying")
        return AxialKind::decaying;
    if (s == "growing")
        return AxialKind::growing;
    throw std::invalid_argument("axial kind must be decaying or growing");
}

inline StencilOrder stencil_order(int s) {
    if (s == 2)
        return StencilOrder::second;
    if (s == 4)
        return StencilOrder::fourth;
    throw std::invalid_argument("stencil must be 2 or 4");
}

/// Quantum numbers with per-family defaults for anything not given.
inline QuantumNumbers quantum_numbers(const RunConfig &c) {
    QuantumNumbers qn;
    qn.m = c.m;
    qn.lambda = c.lambda;
    if (c.family == "sigma") {
        qn.eps = c.eps.value_or(std::sqrt(2.0));
        qn.mass = c.mass.value_or(1.0);
        if (c.sigma && c.kappa)
            throw std::invalid_argument("give either --sigma or --kappa, not both");
        qn.sigma = c.sigma ? parse_complex(*c.sigma) : cplx(0.0, c.kappa.value_or(1.0));
    } else if (c.family == "sigma0") {
        qn.eps = c.eps.value_or(0.5);
        qn.mass = c.mass.value_or(1.0);
        qn.sigma = 0.0;
    } else if (c.family == "massless") {
        qn.eps = c.eps.value_or(1.0);
        qn.mass = 0.0;
        qn.sigma = 0.0;
    } else {
        throw std::invalid_argument("family must be sigma, sigma0 or massless");
    }
    return qn;
}

inline ModeField build_mode(const RunConfig &c) {
    const auto qn = quantum_numbers(c);
    const auto rk = radial_kind(c.radial);
    const auto ak = axial_kind(c.axial);
    if (c.family == "sigma")
        return modes::build_mode_sigma(qn, rk, ak);
    if (c.family == "sigma0")
        return modes::build_mode_sigma0_massive(qn, rk, ak);
    if (c.phi0 == "gaussian")
        return modes::build_mode_massless_gradient(modes::gaussian_bump(c.m, c.r0, c.z0, c.width), qn.eps);
    if (c.phi0 == "bessel")
        return modes::build_mode_massless_gradient(
            modes::separated_scalar(c.m, c.lambda, qn.eps, 0.0, rk, ak), qn.eps);
    throw std::invalid_argument("phi0 must be gaussian or bessel");
}

inline io::ConfigEcho echo_common(const RunConfig &c) {
    io::ConfigEcho e{{"subcommand", c.subcommand}};
    return e;
}

inline void echo_grid(io::ConfigEcho &e, const RunConfig &c) {
    e.emplace_back("r_min", num(c.grid.r_min));
    e.emplace_back("r_max", num(c.grid.r_max));
    e.emplace_back("n_r", std::to_string(c.grid.n_r));
    e.emplace_back("z_min", num(c.grid.z_min));
    e.emplace_back("z_max", num(c.grid.z_max));
    e.emplace_back("n_z", std::to_string(c.grid.n_z));
}

inline void echo_mode(io::ConfigEcho &e, const RunConfig &c, const QuantumNumbers &qn) {
    e.emplace_back("family", c.family);
    e.emplace_back("eps", num(qn.eps));
    e.emplace_back("m", std::to_string(qn.m));
    e.emplace_back("sigma_re", num(qn.sigma.real()));
    e.emplace_back("sigma_im", num(qn.sigma.imag()));
    e.emplace_back("lambda", num(qn.lambda));
    e.emplace_back("mass", num(qn.mass));
    e.emplace_back("radial", c.radial);
    e.emplace_back("axial", c.axial);
    if (c.family == "massless") {
        e.emplace_back("phi0", c.phi0);
        if (c.phi0 == "gaussian") {
            e.emplace_back("r0", num(c.r0));
            e.emplace_back("z0", num(c.z0));
            e.emplace_back("width", num(c.width));
        }
    }
}

class Output {
public:
    Output(const std::string &path, std::ostream &fallback) : out_(&fallback) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_)
                throw std::invalid_argument("cannot open output file '" + path + "'");
            out_ = &file_;
        }
    }
    std::ostream &stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream *out_;
};

// ---- subcommands ---------------------------------------------------------

inline int geometry_check(const RunConfig &c, std::ostream &out, std::ostream &err) {
    constexpr int n_points = 100;
    constexpr unsigned seed = 20240613u;
    constexpr double tol = 1.0e-7;
    constexpr double h = 1.0e-3;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ur(0.1, 5.0);
    std::uniform_real_distribution<double> uz(-2.0, 2.0);
    std::vector<FieldPoint> pts;
    for (int i = 0; i < n_points; ++i) {
        const double r = ur(rng);
        const double z = uz(rng);
        pts.emplace_back(r, z);
    }

    double chris = 0.0;
    double cov = 0.0;
    std::array<std::array<std::array<double, 4>, 4>, 4> diff_numeric{};
    std::array<std::array<std::array<double, 4>, 4>, 4> diff_contracted{};
    std::array<std::array<std::array<double, 4>, 4>, 4> largest{};
    for (const auto &p : pts) {
        chris = std::max(chris, geometry::max_abs_difference(geometry::christoffel_at(p),
                                                             geometry::christoffel_numeric(p, h)));
        for (int a = 0; a < 4; ++a) {
            const auto closed = geometry::tetrad_covariant_derivative(a, p);
            const auto numeric = geometry::tetrad_covariant_derivative_numeric(a, p, h);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    cov = std::max(cov, std::abs(closed[i][j] - numeric[i][j]));
        }
        const auto closed = geometry::ricci_rotation(p);
        const auto numeric = geometry::ricci_rotation_numeric(p, h);
        const auto contracted = geometry::ricci_rotation_contracted(p);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int k = 0; k < 4; ++k) {
                    auto &dn = diff_numeric[a][b][k];
                    auto &dc = diff_contracted[a][b][k];
                    dn = std::max(dn, std::abs(closed(a, b, k) - numeric(a, b, k)));
                    dc = std::max(dc, std::abs(closed(a, b, k) - contracted(a, b, k)));
                    largest[a][b][k] = std::max(largest[a][b][k], std::abs(closed(a, b, k)));
                }
    }

    auto echo = echo_common(c);
    echo.emplace_back("points", std::to_string(n_points));
    echo.emplace_back("seed", std::to_string(seed));
    echo.emplace_back("h", num(h));
    echo.emplace_back("tol", num(tol));
    io::write_config_comments(out, echo);

    bool pass = true;
    auto status = [&](double d) {
        const bool ok_row = d <= tol;
        pass = pass && ok_row;
        return ok_row ? "PASS" : "FAIL";
    };
    out << "quantity,max_abs_closed,max_diff_numeric,max_diff_contracted,status\n";
    out << "christoffel,-," << num(chris) << ",-," << status(chris) << '\n';
    out << "tetrad_derivative,-," << num(cov) << ",-," << status(cov) << '\n';
    for (int a = 1; a < 4; ++a)
        for (int b = 1; b < 4; ++b)
            for (int k = 1; k < 4; ++k) {
                const double d = std::max(diff_numeric[a][b][k], diff_contracted[a][b][k]);
                out << "gamma_" << a << b << k << ',' << num(largest[a][b][k]) << ','
                    << num(diff_numeric[a][b][k]) << ',' << num(diff_contracted[a][b][k]) << ',' << status(d)
                    << '\n';
            }
    // Components with a time index vanish identically.
    double temporal = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int k = 0; k < 4; ++k)
                if (a == 0 || b == 0 || k == 0)
                    temporal = std::max({temporal, diff_numeric[a][b][k], largest[a][b][k]});
    out << "gamma_0bc,-," << num(temporal) << ",-," << status(temporal) << '\n';
    if (!pass) {
        err << "geometry-check: tolerance failure\n";
        return tolerance_failure;
    }
    return ok;
}

inline int mode_command(const RunConfig &c, std::ostream &out, std::ostream &) {
    const auto mode = build_mode(c);
    c.grid.validate();
    auto echo = echo_common(c);
    echo_mode(echo, c, mode.qn);
    echo_grid(echo, c);
    echo.emplace_back("format", c.format);
    const auto pts = io::sample_grid(mode.evaluator, c.grid);
    Output o(c.output, out);
    if (c.format == "json")
        io::write_samples_json(o.stream(), echo, pts);
    else
        io::write_samples_csv(o.stream(), echo, pts);
    return ok;
}

inline int verify_command(const RunConfig &c, std::ostream &out, std::ostream &err) {
    const auto tag = parse_system_tag(c.system);
    if (!tag)
        throw std::invalid_argument("system must be full, full7, helicity, sigma0, massless or scalar");
    const auto mode = build_mode(c);
    c.grid.validate();
    if (!(c.h > 0.0))
        throw std::invalid_argument("h must be > 0");
    if (!(c.tol > 0.0))
        throw std::invalid_argument("tol must be > 0");
    ResidualOptions opts;
    opts.stencil = stencil_order(c.stencil);

    ResidualReport rep = c.no_richardson ? verify::residual_system(mode, c.grid, c.h, *tag, opts)
                                         : verify::residual_extrapolated(mode, c.grid, c.h, *tag, opts);
    if (*tag == SystemTag::helicity && mode.family == Family::massless_gradient)
        rep.diagnostic = true;

    auto echo = echo_common(c);
    echo_mode(echo, c, mode.qn);
    echo_grid(echo, c);
    echo.emplace_back("system", to_string(*tag));
    echo.emplace_back("h", num(c.h));
    echo.emplace_back("stencil", std::to_string(c.stencil));
    echo.emplace_back("richardson", c.no_richardson ? "false" : "true");
    echo.emplace_back("tol", num(c.tol));
    echo.emplace_back("format", c.format);

    const bool failed = !rep.diagnostic && (rep.max_rel() > c.tol || !rep.flagged_points.empty());
    {
        Output o(c.output, out);
        if (c.format == "json")
            io::write_report_json(o.stream(), echo, rep);
        else
            io::write_report_csv(o.stream(), echo, rep);
    }
    if (failed) {
        err << "verify: max relative residual " << num(rep.max_rel()) << " exceeds tol " << num(c.tol);
        if (!rep.flagged_points.empty())
            err << " (" << rep.flagged_points.size() << " non-finite points)";
        err << '\n';
        io::write_report_table(err, rep);
        return tolerance_failure;
    }
    return ok;
}

/// Dispersion residual |eps^2 + sigma^2 - M^2| and the full-system residual of
/// the sigma = i kappa mode, tabulated over kappa.
inline int dispersion_command(const RunConfig &c, std::ostream &out, std::ostream &) {
    const auto range = parse_range(c.kappa_range);
    const double eps = c.eps.value_or(std::sqrt(2.0));
    const double mass = c.mass.value_or(1.0);
    if (!(mass > 0.0))
        throw std::invalid_argument("mass must be > 0");
    if (eps == 0.0)
        throw std::invalid_argument("eps must be nonzero");
    c.grid.validate();
    ResidualOptions opts;
    opts.stencil = stencil_order(c.stencil);

    auto echo = echo_common(c);
    echo.emplace_back("eps", num(eps));
    echo.emplace_back("mass", num(mass));
    echo.emplace_back("m", std::to_string(c.m));
    echo.emplace_back("lambda", num(c.lambda));
    echo.emplace_back("kappa_range", c.kappa_range);
    echo_grid(echo, c);
    echo.emplace_back("h", num(c.h));
    echo.emplace_back("stencil", std::to_string(c.stencil));

    struct Row {
        double kappa;
        double dispersion;
        double full;
    };
    std::vector<Row> rows;
    for (int i = 0; i < range.n; ++i) {
        const double kappa = range.a + (range.b - range.a) * i / (range.n - 1);
        Row row{kappa, modes::dispersion_residual(eps, cplx(0.0, kappa), mass),
                std::numeric_limits<double>::quiet_NaN()};
        if (kappa != 0.0) {
            QuantumNumbers qn{eps, c.m, cplx(0.0, kappa), c.lambda, mass};
            try {
                const auto mode = modes::build_mode_sigma(qn);
                row.full = verify::residual_system(mode, c.grid, c.h, SystemTag::full, opts).max_rel();
            } catch (const AccuracyLossError &) {
                // left as nan
            }
        }
        rows.push_back(row);
    }

    auto argmin = [&](auto key) {
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double v = key(rows[i]);
            if (std::isnan(v))
                continue;
            if (!best || v < key(rows[*best]))
                best = i;
        }
        return best;
    };
    const auto best_disp = argmin([](const Row &r) { return r.dispersion; });
    const auto best_full = argmin([](const Row &r) { return r.full; });

    Output o(c.output, out);
    auto &s = o.stream();
    if (c.format == "json") {
        nlohmann::ordered_json j;
        j["config"] = io::config_json(echo);
        auto arr = nlohmann::ordered_json::array();
        for (const auto &r : rows)
            arr.push_back({{"kappa", num(r.kappa)}, {"dispersion_residual", num(r.dispersion)},
                           {"full_residual", num(r.full)}});
        j["rows"] = std::move(arr);
        j["min_dispersion_kappa"] = best_disp ? num(rows[*best_disp].kappa) : "nan";
        j["min_full_kappa"] = best_full ? num(rows[*best_full].kappa) : "nan";
        s << j.dump(1) << '\n';
    } else {
        io::write_config_comments(s, echo);
        s << "kappa,dispersion_residual,full_residual\n";
        for (const auto &r : rows)
            s << num(r.kappa) << ',' << num(r.dispersion) << ',' << num(r.full) << '\n';
        s << "# min_dispersion_kappa=" << (best_disp ? num(rows[*best_disp].kappa) : "nan") << '\n';
        s << "# min_full_kappa=" << (best_full ? num(rows[*best_full].kappa) : "nan") << '\n';
    }
    return ok;
}

inline int specfun_command(const RunConfig &c, std::ostream &out, std::ostream &) {
    SpecialFunctionValue v;
    if (c.fn == "J")
        v = specfun::bessel_j(c.order, c.arg);
    else if (c.fn == "Y")
        v = specfun::bessel_y(c.order, c.arg);
    else if (c.fn == "I")
        v = specfun::bessel_i(c.order, c.arg);
    else if (c.fn == "K")
        v = specfun::bessel_k(c.order, c.arg);
    else if (c.fn == "Kimag")
        v = specfun::macdonald_imag_order(c.order, c.arg);
    else
        throw std::invalid_argument("fn must be J, Y, I, K or Kimag");

    auto echo = echo_common(c);
    echo.emplace_back("fn", c.fn);
    echo.emplace_back("order", num(c.order));
    echo.emplace_back("arg", num(c.arg));
    Output o(c.output, out);
    auto &s = o.stream();
    if (c.format == "json") {
        nlohmann::ordered_json j;
        j["config"] = io::config_json(echo);
        j["value"] = num(v.value.real());
        j["derivative"] = num(v.derivative.real());
        s << j.dump(1) << '\n';
    } else {
        io::write_config_comments(s, echo);
        s << "value,derivative\n" << num(v.value.real()) << ',' << num(v.derivative.real()) << '\n';
    }
    return ok;
}

inline void add_output_options(CLI::App *sub, RunConfig &c) {
    sub->add_option("--output,-o", c.output, "Output file (default: stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", c.config_file, "Flat key=value file; flags override it");
}

inline void add_grid_options(CLI::App *sub, RunConfig &c) {
    sub->add_option("--r-min", c.grid.r_min);
    sub->add_option("--r-max", c.grid.r_max);
    sub->add_option("--n-r", c.grid.n_r);
    sub->add_option("--z-min", c.grid.z_min);
    sub->add_option("--z-max", c.grid.z_max);
    sub->add_option("--n-z", c.grid.n_z);
}

inline void add_mode_options(CLI::App *sub, RunConfig &c) {
    sub->add_option("--family", c.family, "sigma, sigma0 or massless")
        ->check(CLI::IsMember({"sigma", "sigma0", "massless"}));
    sub->add_option("--eps", c.eps);
    sub->add_option("--m", c.m);
    sub->add_option("--sigma", c.sigma, "Helicity eigenvalue: real or (re,im)");
    sub->add_option("--kappa", c.kappa, "sigma = i kappa");
    sub->add_option("--lambda", c.lambda);
    sub->add_option("--mass", c.mass);
    sub->add_option("--radial", c.radial, "J or Y")->check(CLI::IsMember({"J", "Y"}));
    sub->add_option("--axial", c.axial, "decaying or growing")->check(CLI::IsMember({"decaying", "growing"}));
    sub->add_option("--phi0", c.phi0, "Massless scalar: gaussian or bessel")
        ->check(CLI::IsMember({"gaussian", "bessel"}));
    sub->add_option("--r0", c.r0);
    sub->add_option("--z0", c.z0);
    sub->add_option("--width", c.width);
}

} // namespace detail

/// Parses `args` (without the program name) and runs the subcommand.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    RunConfig c;
    CLI::App app{"Spin-1 Duffin-Kemmer modes in horospherical coordinates", "dkp_h3"};
    app.require_subcommand(1);
    // "-h" is left free: --h is the finite-difference step.
    app.set_help_flag("--help", "Print this help message and exit");

    auto *geo = app.add_subcommand("geometry-check", "Closed-form vs numeric connection coefficients");
    detail::add_output_options(geo, c);

    auto *mode = app.add_subcommand("mode", "Sample a mode on the grid");
    detail::add_output_options(mode, c);
    detail::add_grid_options(mode, c);
    detail::add_mode_options(mode, c);

    auto *ver = app.add_subcommand("verify", "Residuals of a mode against an equation system");
    detail::add_output_options(ver, c);
    detail::add_grid_options(ver, c);
    detail::add_mode_options(ver, c);
    ver->add_option("--system", c.system, "full, full7, helicity, sigma0, massless or scalar");
    ver->add_option("--h", c.h, "Finite-difference step");
    ver->add_option("--stencil", c.stencil, "2 or 4")->check(CLI::IsMember({2, 4}));
    ver->add_flag("--no-richardson", c.no_richardson, "Report the raw step-h residuals");
    ver->add_option("--tol", c.tol, "Max relative residual");

    auto *disp = app.add_subcommand("dispersion", "Scan the closure residual over kappa");
    detail::add_output_options(disp, c);
    detail::add_grid_options(disp, c);
    disp->add_option("--eps", c.eps);
    disp->add_option("--mass", c.mass);
    disp->add_option("--m", c.m);
    disp->add_option("--lambda", c.lambda);
    disp->add_option("--kappa-range", c.kappa_range, "a:b:n");
    disp->add_option("--h", c.h);
    disp->add_option("--stencil", c.stencil)->check(CLI::IsMember({2, 4}));

    auto *spec = app.add_subcommand("specfun", "Evaluate a Bessel-type function");
    detail::add_output_options(spec, c);
    spec->add_option("--fn", c.fn, "J, Y, I, K or Kimag")->check(CLI::IsMember({"J", "Y", "I", "K", "Kimag"}));
    spec->add_option("--order", c.order);
    spec->add_option("--arg", c.arg);

    try {
        auto merged = detail::merge_config(args);
        // The dispersion grid defaults to 10x10 unless overridden.
        if (!merged.empty() && merged.front() == "dispersion")
            c.grid.n_r = c.grid.n_z = 10;
        std::reverse(merged.begin(), merged.end());
        app.parse(merged);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::invalid_argument &e) {
        err << "usage error: " << e.what() << '\n';
        return usage_error;
    }

    c.subcommand = app.get_subcommands().front()->get_name();
    try {
        if (c.subcommand == "geometry-check")
            return detail::geometry_check(c, out, err);
        if (c.subcommand == "mode")
            return detail::mode_command(c, out, err);
        if (c.subcommand == "verify")
            return detail::verify_command(c, out, err);
        if (c.subcommand == "dispersion")
            return detail::dispersion_command(c, out, err);
        return detail::specfun_command(c, out, err);
    } catch (const AccuracyLossError &e) {
        err << "accuracy loss: " << e.what() << '\n';
        return tolerance_failure;
    } catch (const std::invalid_argument &e) {
        err << "usage error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::domain_error &e) {
        err << "usage error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return tolerance_failure;
    }
}

} // namespace dkp_h3::cli
