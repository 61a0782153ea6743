#pragma once

// Deterministic text/CSV/JSON output of sampled fields and residual reports.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "field.hpp"
#include "parallel.hpp"
#include "verify.hpp"

namespace dkp_h3::io {

/// 17 significant digits, "nan"/"inf"/"-inf" for non-finite values.
inline std::string format_number(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline const std::vector<std::string> &component_names() {
    static const std::vector<std::string> names{"Phi0", "Phi1", "Phi2", "Phi3", "E1",
                                                "E2",   "E3",   "H1",   "H2",   "H3"};
    return names;
}

inline std::string csv_header() {
    std::string h = "r,z";
    for (const auto &n : component_names())
        h += ",Re(" + n + "),Im(" + n + ")";
    return h;
}

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

inline void write_config_comments(std::ostream &out, const ConfigEcho &config) {
    for (const auto &[k, v] : config)
        out << "# " << k << '=' << v << '\n';
}

struct SampledPoint {
    double r;
    double z;
    TenComponent value;
};

/// Samples every grid point (row-major in r then z). Evaluation failures
/// become NaN components.
inline std::vector<SampledPoint> sample_grid(const FieldFunction &f, const Grid &grid, unsigned threads = 0) {
    grid.validate();
    std::vector<SampledPoint> out(grid.size());
    parallel_for(
        grid.size(),
        [&](std::size_t p) {
            const double r = grid.r(static_cast<int>(p / grid.n_z));
            const double z = grid.z(static_cast<int>(p % grid.n_z));
            out[p].r = r;
            out[p].z = z;
            try {
                out[p].value = f(r, z);
            } catch (const std::exception &) {
                const double nan = std::nan("");
                for (auto &c : out[p].value.c)
                    c = cplx(nan, nan);
            }
        },
        threads);
    return out;
}

inline void write_samples_csv(std::ostream &out, const ConfigEcho &config, const std::vector<SampledPoint> &pts) {
    write_config_comments(out, config);
    out << csv_header() << '\n';
    for (const auto &p : pts) {
        out << format_number(p.r) << ',' << format_number(p.z);
        for (const auto &c : p.value.c)
            out << ',' << format_number(c.real()) << ',' << format_number(c.imag());
        out << '\n';
    }
}

inline nlohmann::ordered_json config_json(const ConfigEcho &config) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto &[k, v] : config)
        j[k] = v;
    return j;
}

// Numbers go through format_number so JSON and CSV print identical digits.
inline nlohmann::ordered_json number_json(double v) { return format_number(v); }

inline void write_samples_json(std::ostream &out, const ConfigEcho &config, const std::vector<SampledPoint> &pts) {
    nlohmann::ordered_json j;
    j["config"] = config_json(config);
    auto arr = nlohmann::ordered_json::array();
    for (const auto &p : pts) {
        nlohmann::ordered_json row;
        row["r"] = number_json(p.r);
        row["z"] = number_json(p.z);
        for (std::size_t i = 0; i < 10; ++i)
            row[component_names()[i]] = {number_json(p.value.c[i].real()), number_json(p.value.c[i].imag())};
        arr.push_back(std::move(row));
    }
    j["points"] = std::move(arr);
    out << j.dump(1) << '\n';
}

inline nlohmann::ordered_json grid_json(const Grid &g) {
    nlohmann::ordered_json j;
    j["r_min"] = number_json(g.r_min);
    j["r_max"] = number_json(g.r_max);
    j["n_r"] = g.n_r;
    j["z_min"] = number_json(g.z_min);
    j["z_max"] = number_json(g.z_max);
    j["n_z"] = g.n_z;
    return j;
}

inline nlohmann::ordered_json report_json(const ResidualReport &rep, bool include_points = true) {
    nlohmann::ordered_json j;
    j["system"] = to_string(rep.system);
    j["grid"] = grid_json(rep.grid);
    j["h"] = number_json(rep.h);
    j["stencil"] = static_cast<int>(rep.stencil);
    j["extrapolated"] = rep.extrapolated;
    j["diagnostic"] = rep.diagnostic;
    auto eqs = nlohmann::ordered_json::array();
    for (const auto &e : rep.equations) {
        nlohmann::ordered_json q;
        q["label"] = e.label;
        q["max_abs"] = number_json(e.max_abs);
        q["rms_abs"] = number_json(e.rms_abs);
        q["max_rel"] = number_json(e.max_rel);
        q["rms_rel"] = number_json(e.rms_rel);
        q["order"] = e.order ? number_json(*e.order) : nlohmann::ordered_json(nullptr);
        q["nan_points"] = e.nan_points;
        eqs.push_back(std::move(q));
    }
    j["equations"] = std::move(eqs);
    j["flagged_points"] = rep.flagged_points;
    if (include_points) {
        auto res = nlohmann::ordered_json::array();
        for (std::size_t e = 0; e < rep.residual.size(); ++e) {
            auto row = nlohmann::ordered_json::array();
            for (std::size_t p = 0; p < rep.residual[e].size(); ++p)
                row.push_back({number_json(rep.residual[e][p].real()), number_json(rep.residual[e][p].imag()),
                               number_json(rep.scale[e][p])});
            res.push_back(std::move(row));
        }
        j["residual"] = std::move(res); // [equation][point] = [Re, Im, scale]
    }
    return j;
}

inline void write_report_json(std::ostream &out, const ConfigEcho &config, const ResidualReport &rep) {
    nlohmann::ordered_json j;
    j["config"] = config_json(config);
    j["report"] = report_json(rep);
    out << j.dump(1) << '\n';
}

/// One row per equation.
inline void write_report_table(std::ostream &out, const ResidualReport &rep) {
    out << "equation,max_abs,rms_abs,max_rel,rms_rel,order,nan_points\n";
    for (const auto &e : rep.equations) {
        out << e.label << ',' << format_number(e.max_abs) << ',' << format_number(e.rms_abs) << ','
            << format_number(e.max_rel) << ',' << format_number(e.rms_rel) << ','
            << (e.order ? format_number(*e.order) : std::string("-")) << ',' << e.nan_points << '\n';
    }
}

inline void write_report_csv(std::ostream &out, const ConfigEcho &config, const ResidualReport &rep) {
    write_config_comments(out, config);
    out << "# system=" << to_string(rep.system) << '\n'
        << "# h=" << format_number(rep.h) << '\n'
        << "# extrapolated=" << (rep.extrapolated ? "true" : "false") << '\n'
        << "# diagnostic=" << (rep.diagnostic ? "true" : "false") << '\n'
        << "# flagged_points=" << rep.flagged_points.size() << '\n';
    write_report_table(out, rep);
}

} // namespace dkp_h3::io
