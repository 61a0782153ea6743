#pragma once

// Finite-difference residuals of candidate fields against the first-order
// field equations, the helicity eigen-system and the reduced systems of the
// individual families, with Richardson extrapolation and convergence orders.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "finite_difference.hpp"
#include "modes.hpp"
#include "operators.hpp"
#include "parallel.hpp"

namespace dkp_h3 {

enum class SystemTag {
    full,          // compact first-order system in ladder form
    full_expanded, // the same system with the ladder operators written out
    helicity,      // Sigma Psi = sigma Psi
    sigma0,        // reduced system of the sigma = 0 massive family
    massless,      // massless reduced system
    scalar,        // master equation for Phi0 (+ separated ODEs when available)
};

inline std::string to_string(SystemTag t) {
    switch (t) {
    case SystemTag::full:
        return "full-9";
    case SystemTag::full_expanded:
        return "full-7";
    case SystemTag::helicity:
        return "helicity-12";
    case SystemTag::sigma0:
        return "sigma0-21";
    case SystemTag::massless:
        return "massless-25";
    case SystemTag::scalar:
        return "scalar-23a";
    }
    return "?";
}

/// Accepts both the short CLI names and the report tags.
inline std::optional<SystemTag> parse_system_tag(const std::string &s) {
    for (auto t : {SystemTag::full, SystemTag::full_expanded, SystemTag::helicity, SystemTag::sigma0,
                   SystemTag::massless, SystemTag::scalar})
        if (s == to_string(t))
            return t;
    if (s == "full")
        return SystemTag::full;
    if (s == "full7" || s == "expanded")
        return SystemTag::full_expanded;
    if (s == "helicity")
        return SystemTag::helicity;
    if (s == "sigma0")
        return SystemTag::sigma0;
    if (s == "massless")
        return SystemTag::massless;
    if (s == "scalar")
        return SystemTag::scalar;
    return std::nullopt;
}

/// Uniform tensor grid, row-major in r then z.
struct Grid {
    double r_min = 0.5;
    double r_max = 3.0;
    int n_r = 20;
    double z_min = -1.0;
    double z_max = 1.0;
    int n_z = 20;

    void validate() const {
        if (!(r_min > 0.0))
            throw std::domain_error("Grid: r_min must be > 0");
        if (!(r_max > r_min) || !(z_max > z_min))
            throw std::invalid_argument("Grid: empty coordinate range");
        if (n_r < 4 || n_z < 4)
            throw std::invalid_argument("Grid: n_r and n_z must be >= 4");
    }
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(n_r) * n_z; }
    [[nodiscard]] double r(int i) const { return r_min + (r_max - r_min) * i / (n_r - 1); }
    [[nodiscard]] double z(int j) const { return z_min + (z_max - z_min) * j / (n_z - 1); }

    bool operator==(const Grid &) const = default;
};

/// Denominator floor for relative residuals.
inline constexpr double relative_floor = 1.0e-30;

/// Relative residuals below this level are treated as roundoff: no
/// convergence order is attached to such equations.
inline constexpr double order_noise_floor = 1.0e-10;

struct EquationStats {
    std::string label;
    double max_abs = 0.0;
    double rms_abs = 0.0;
    double max_rel = 0.0;
    double rms_rel = 0.0;
    std::optional<double> order;
    std::size_t nan_points = 0;
};

struct ResidualReport {
    SystemTag system = SystemTag::full;
    Grid grid;
    double h = 0.0;
    StencilOrder stencil = StencilOrder::second;
    bool extrapolated = false;
    bool diagnostic = false; // reported, not asserted
    std::vector<EquationStats> equations;
    std::vector<std::vector<cplx>> residual; // [equation][point]
    std::vector<std::vector<double>> scale;  // [equation][point]
    std::vector<std::size_t> flagged_points; // points with non-finite residuals

    [[nodiscard]] double max_abs() const {
        double v = 0.0;
        for (const auto &e : equations)
            v = std::max(v, e.max_abs);
        return v;
    }
    [[nodiscard]] double max_rel() const {
        double v = 0.0;
        for (const auto &e : equations)
            v = std::max(v, e.max_rel);
        return v;
    }
};

/// One equation evaluated at a point: residual = lhs - rhs; `scale` is the
/// largest single term, `magnitude` the sum of all term magnitudes.
struct EquationValue {
    cplx residual;
    double scale = 0.0;
    double magnitude = 0.0;
};

struct ResidualOptions {
    StencilOrder stencil = StencilOrder::second;
    unsigned threads = 0; // 0: worker_count()
};

struct PointContext {
    int m = 0;
    double eps = 0.0;
    double mass = 0.0;
    cplx sigma{};
    double lambda = 0.0;
    double r = 1.0;
    double z = 0.0;
};

namespace verify {

namespace detail {

inline EquationValue balance(std::initializer_list<cplx> lhs, cplx rhs) {
    EquationValue out;
    cplx sum = 0.0;
    out.scale = std::abs(rhs);
    out.magnitude = std::abs(rhs);
    for (const auto &t : lhs) {
        sum += t;
        out.scale = std::max(out.scale, std::abs(t));
        out.magnitude += std::abs(t);
    }
    out.residual = sum - rhs;
    return out;
}

using J = Jet<TenComponent>;
constexpr cplx I{0.0, 1.0};

inline std::vector<EquationValue> full_compact(const J &f, const PointContext &c) {
    using operators::ladder;
    const double ez = std::exp(c.z);
    const double r = c.r;
    const int m = c.m;
    const double M = c.mass;
    const double eps = c.eps;
    auto v = [&](std::size_t s) { return f.value[s]; };
    auto L = [&](LadderKind k, std::size_t s) { return ladder(k, m, r, f.value[s], f.dr[s]); };
    auto dz = [&](std::size_t s) { return f.dz[s]; };
    using LK = LadderKind;
    namespace sl = slot;

    return {
        balance({-ez * L(LK::b_minus, sl::e1), -ez * L(LK::a_plus, sl::e3), -(dz(sl::e2) - 2.0 * v(sl::e2))},
                M * v(sl::phi0)),
        balance({I * ez * L(LK::a, sl::h2), I * eps * v(sl::e1), I * (dz(sl::h1) - v(sl::h1))}, M * v(sl::phi1)),
        balance({-I * ez * L(LK::b_minus, sl::h1), I * ez * L(LK::a_plus, sl::h3), I * eps * v(sl::e2)},
                M * v(sl::phi2)),
        balance({-I * ez * L(LK::b, sl::h2), I * eps * v(sl::e3), -I * (dz(sl::h3) - v(sl::h3))}, M * v(sl::phi3)),
        balance({ez * L(LK::a, sl::phi0), -I * eps * v(sl::phi1)}, M * v(sl::e1)),
        balance({-I * eps * v(sl::phi2), -dz(sl::phi0)}, M * v(sl::e2)),
        balance({ez * L(LK::b, sl::phi0), -I * eps * v(sl::phi3)}, M * v(sl::e3)),
        balance({-I * ez * L(LK::a, sl::phi2), -I * (dz(sl::phi1) - v(sl::phi1))}, M * v(sl::h1)),
        balance({I * ez * L(LK::b_minus, sl::phi1), -I * ez * L(LK::a_plus, sl::phi3)}, M * v(sl::h2)),
        balance({I * ez * L(LK::b, sl::phi2), I * (dz(sl::phi3) - v(sl::phi3))}, M * v(sl::h3)),
    };
}

inline std::vector<EquationValue> full_expanded(const J &f, const PointContext &c) {
    const double g = ladder_gamma;
    const double ez = std::exp(c.z);
    const double r = c.r;
    const double m = c.m;
    const double M = c.mass;
    const double eps = c.eps;
    auto v = [&](std::size_t s) { return f.value[s]; };
    auto dr = [&](std::size_t s) { return f.dr[s]; };
    auto dz = [&](std::size_t s) { return f.dz[s]; };
    namespace sl = slot;

    return {
        balance({g * ez * dr(sl::e1), -g * ez * dr(sl::e3), -ez * g / r * (m - 1) * v(sl::e1),
                 -ez * g / r * (m + 1) * v(sl::e3), -dz(sl::e2), 2.0 * v(sl::e2)},
                M * v(sl::phi0)),
        balance({I * eps * v(sl::e1), I * g * ez * dr(sl::h2), I * ez * g * m / r * v(sl::h2), I * dz(sl::h1),
                 -I * v(sl::h1)},
                M * v(sl::phi1)),
        balance({I * eps * v(sl::e2), I * g * ez * dr(sl::h1), I * g * ez * dr(sl::h3),
                 -ez * I * g / r * (m - 1) * v(sl::h1), ez * I * g / r * (m + 1) * v(sl::h3)},
                M * v(sl::phi2)),
        balance({I * eps * v(sl::e3), I * g * ez * dr(sl::h2), -I * ez * g * m / r * v(sl::h2), -I * dz(sl::h3),
                 I * v(sl::h3)},
                M * v(sl::phi3)),
        balance({-I * eps * v(sl::phi1), g * ez * dr(sl::phi0), ez * g * m / r * v(sl::phi0)}, M * v(sl::e1)),
        balance({-I * eps * v(sl::phi2), -dz(sl::phi0)}, M * v(sl::e2)),
        balance({-I * eps * v(sl::phi3), -g * ez * dr(sl::phi0), ez * g * m / r * v(sl::phi0)}, M * v(sl::e3)),
        balance({-I * g * ez * dr(sl::phi2), -I * ez * g * m / r * v(sl::phi2), -I * dz(sl::phi1),
                 I * v(sl::phi1)},
                M * v(sl::h1)),
        balance({-I * g * ez * dr(sl::phi1), -I * g * ez * dr(sl::phi3), I * ez * g / r * (m - 1) * v(sl::phi1),
                 -I * ez * g / r * (m + 1) * v(sl::phi3)},
                M * v(sl::h2)),
        balance({-I * g * ez * dr(sl::phi2), I * ez * g * m / r * v(sl::phi2), I * dz(sl::phi3), -I * v(sl::phi3)},
                M * v(sl::h3)),
    };
}

inline std::vector<EquationValue> helicity(const J &f, const PointContext &c) {
    std::vector<EquationValue> out(10);
    const cplx s = c.sigma;
    // Sigma never produces a Phi0 component.
    out[0] = balance({}, s * f.value[slot::phi0]);
    for (std::size_t base : {slot::phi1, slot::e1, slot::h1}) {
        const auto t = operators::helicity_triplet(f, base, c.m, c.r, c.z);
        for (std::size_t k = 0; k < 3; ++k) {
            const cplx rhs = s * f.value[base + k];
            out[base + k].residual = t[k].value - rhs;
            out[base + k].scale = std::max(t[k].scale, std::abs(rhs));
            out[base + k].magnitude = t[k].scale + std::abs(rhs);
        }
    }
    return out;
}

inline std::vector<EquationValue> sigma0_reduced(const J &f, const PointContext &c) {
    using operators::ladder;
    const double ez = std::exp(c.z);
    const double M = c.mass;
    const double eps = c.eps;
    auto v = [&](std::size_t s) { return f.value[s]; };
    auto L = [&](LadderKind k, std::size_t s) { return ladder(k, c.m, c.r, f.value[s], f.dr[s]); };
    auto dz = [&](std::size_t s) { return f.dz[s]; };
    using LK = LadderKind;
    namespace sl = slot;

    return {
        balance({-ez * L(LK::b_minus, sl::e1), -ez * L(LK::a_plus, sl::e3), -(dz(sl::e2) - 2.0 * v(sl::e2))},
                M * v(sl::phi0)),
        balance({I * eps * v(sl::e1)}, M * v(sl::phi1)),
        balance({I * eps * v(sl::e2)}, M * v(sl::phi2)),
        balance({I * eps * v(sl::e3)}, M * v(sl::phi3)),
        balance({ez * L(LK::a, sl::phi0), -I * eps * v(sl::phi1)}, M * v(sl::e1)),
        balance({-I * eps * v(sl::phi2), -dz(sl::phi0)}, M * v(sl::e2)),
        balance({ez * L(LK::b, sl::phi0), -I * eps * v(sl::phi3)}, M * v(sl::e3)),
        balance({v(sl::h1)}, 0.0),
        balance({v(sl::h2)}, 0.0),
        balance({v(sl::h3)}, 0.0),
    };
}

// H rows carry the factor i in all three components.
inline std::vector<EquationValue> massless_reduced(const J &f, const PointContext &c) {
    using operators::ladder;
    const double ez = std::exp(c.z);
    const double eps = c.eps;
    const cplx s = c.sigma;
    auto v = [&](std::size_t k) { return f.value[k]; };
    auto L = [&](LadderKind k, std::size_t q) { return ladder(k, c.m, c.r, f.value[q], f.dr[q]); };
    auto dz = [&](std::size_t q) { return f.dz[q]; };
    using LK = LadderKind;
    namespace sl = slot;

    return {
        balance({-ez * L(LK::b_minus, sl::e1), -ez * L(LK::a_plus, sl::e3), -(dz(sl::e2) - 2.0 * v(sl::e2))}, 0.0),
        balance({I * eps * v(sl::e1), I * s * v(sl::h1)}, 0.0),
        balance({I * eps * v(sl::e2), I * s * v(sl::h2)}, 0.0),
        balance({I * eps * v(sl::e3), I * s * v(sl::h3)}, 0.0),
        balance({ez * L(LK::a, sl::phi0), -I * eps * v(sl::phi1)}, v(sl::e1)),
        balance({-I * eps * v(sl::phi2), -dz(sl::phi0)}, v(sl::e2)),
        balance({ez * L(LK::b, sl::phi0), -I * eps * v(sl::phi3)}, v(sl::e3)),
        balance({-I * s * v(sl::phi1)}, v(sl::h1)),
        balance({-I * s * v(sl::phi2)}, v(sl::h2)),
        balance({-I * s * v(sl::phi3)}, v(sl::h3)),
    };
}

/// [2 Delta - d_z e^{-2z} d_z - (eps^2 - M^2) e^{-2z}] Phi0 = 0, expanded.
inline EquationValue scalar_master(cplx v, cplx dr, cplx drr, cplx dz, cplx dzz, const PointContext &c) {
    const double r = c.r;
    const double mm = static_cast<double>(c.m) * c.m;
    const double e2 = std::exp(-2.0 * c.z);
    const double gap = c.eps * c.eps - c.mass * c.mass;
    return balance({-drr, -dr / r, mm / (r * r) * v, -e2 * dzz, 2.0 * e2 * dz, -gap * e2 * v}, 0.0);
}

} // namespace detail

/// Equation labels, named after the component each row determines.
inline std::vector<std::string> equation_labels(SystemTag tag, bool separated = false) {
    switch (tag) {
    case SystemTag::full:
    case SystemTag::full_expanded:
    case SystemTag::sigma0:
    case SystemTag::massless:
        return {"Phi0", "Phi1", "Phi2", "Phi3", "E1", "E2", "E3", "H1", "H2", "H3"};
    case SystemTag::helicity:
        return {"Sigma.Phi0", "Sigma.Phi1", "Sigma.Phi2", "Sigma.Phi3", "Sigma.E1",
                "Sigma.E2",   "Sigma.E3",   "Sigma.H1",   "Sigma.H2",   "Sigma.H3"};
    case SystemTag::scalar:
        if (separated)
            return {"master", "radial", "axial"};
        return {"master"};
    }
    return {};
}

/// All equations of `tag` at one point from a precomputed jet. The scalar
/// system's separated rows are not included here (they need the factors).
inline std::vector<EquationValue> evaluate_equations(SystemTag tag, const Jet<TenComponent> &jet,
                                                     const PointContext &ctx) {
    switch (tag) {
    case SystemTag::full:
        return detail::full_compact(jet, ctx);
    case SystemTag::full_expanded:
        return detail::full_expanded(jet, ctx);
    case SystemTag::helicity:
        return detail::helicity(jet, ctx);
    case SystemTag::sigma0:
        return detail::sigma0_reduced(jet, ctx);
    case SystemTag::massless:
        return detail::massless_reduced(jet, ctx);
    case SystemTag::scalar: {
        const auto s = slot::phi0;
        return {detail::scalar_master(jet.value[s], jet.dr[s], jet.drr[s], jet.dz[s], jet.dzz[s], ctx)};
    }
    }
    return {};
}

inline PointContext context_for(const ModeField &mode, double r, double z) {
    PointContext c;
    c.m = mode.qn.m;
    c.eps = mode.qn.eps;
    c.mass = mode.qn.mass;
    c.sigma = mode.qn.sigma;
    c.lambda = mode.qn.lambda;
    c.r = r;
    c.z = z;
    return c;
}

namespace detail {

inline bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

inline void summarize(ResidualReport &rep) {
    const std::size_t n_points = rep.grid.size();
    std::vector<char> flagged(n_points, 0);
    for (std::size_t e = 0; e < rep.equations.size(); ++e) {
        auto &st = rep.equations[e];
        st.max_abs = st.rms_abs = st.max_rel = st.rms_rel = 0.0;
        st.nan_points = 0;
        std::size_t count = 0;
        double sum_abs2 = 0.0;
        double sum_rel2 = 0.0;
        for (std::size_t p = 0; p < n_points; ++p) {
            const cplx res = rep.residual[e][p];
            if (!finite(res) || !std::isfinite(rep.scale[e][p])) {
                ++st.nan_points;
                flagged[p] = 1;
                continue;
            }
            const double a = std::abs(res);
            const double rel = a / std::max(rep.scale[e][p], relative_floor);
            st.max_abs = std::max(st.max_abs, a);
            st.max_rel = std::max(st.max_rel, rel);
            sum_abs2 += a * a;
            sum_rel2 += rel * rel;
            ++count;
        }
        if (count > 0) {
            st.rms_abs = std::sqrt(sum_abs2 / count);
            st.rms_rel = std::sqrt(sum_rel2 / count);
        }
    }
    rep.flagged_points.clear();
    for (std::size_t p = 0; p < n_points; ++p)
        if (flagged[p])
            rep.flagged_points.push_back(p);
}

} // namespace detail

/// Residuals of `mode` against `tag` at every grid point, with derivatives by
/// central differences of step h. Field evaluation failures at a point are
/// recorded as NaN residuals (flagged), not dropped.
inline ResidualReport residual_system(const ModeField &mode, const Grid &grid, double h, SystemTag tag,
                                      const ResidualOptions &opts = {}) {
    grid.validate();
    if (!(h > 0.0))
        throw std::invalid_argument("residual_system: step must be > 0");
    if (!(grid.r_min - fd::reach(opts.stencil) * h > 0.0))
        throw std::domain_error("residual_system: stencil reaches r <= 0");
    if (!mode.evaluator)
        throw std::invalid_argument("residual_system: mode has no evaluator");

    const bool separated = tag == SystemTag::scalar && mode.separated.has_value();
    ResidualReport rep;
    rep.system = tag;
    rep.grid = grid;
    rep.h = h;
    rep.stencil = opts.stencil;
    for (auto &label : equation_labels(tag, separated)) {
        EquationStats st;
        st.label = label;
        rep.equations.push_back(std::move(st));
    }
    const std::size_t n_eq = rep.equations.size();
    const std::size_t n_points = grid.size();
    rep.residual.assign(n_eq, std::vector<cplx>(n_points));
    rep.scale.assign(n_eq, std::vector<double>(n_points));

    const double nan = std::numeric_limits<double>::quiet_NaN();
    parallel_for(
        n_points,
        [&](std::size_t p) {
            const int i = static_cast<int>(p / grid.n_z);
            const int j = static_cast<int>(p % grid.n_z);
            const double r = grid.r(i);
            const double z = grid.z(j);
            std::vector<EquationValue> eqs;
            try {
                const auto jet = fd::sample_jet(mode.evaluator, r, z, h, opts.stencil);
                const auto ctx = context_for(mode, r, z);
                eqs = evaluate_equations(tag, jet, ctx);
                if (separated) {
                    const auto &sep = *mode.separated;
                    const auto &R = *sep.radial_factor;
                    const auto rd = fd::derivatives_1d([&R](double x) { return R(x).value; }, r, h, opts.stencil);
                    const double mm = static_cast<double>(sep.m) * sep.m;
                    eqs.push_back(detail::balance(
                        {rd.d2, rd.d1 / r, -mm / (r * r) * rd.value, sep.lambda * rd.value}, 0.0));
                    const auto zd = fd::derivatives_1d([&sep](double x) { return sep.axial_factor(x).value; }, z,
                                                       h, opts.stencil);
                    const double gap = sep.eps * sep.eps - sep.mass * sep.mass;
                    eqs.push_back(detail::balance(
                        {zd.d2, -2.0 * zd.d1, gap * zd.value, -sep.lambda * std::exp(2.0 * z) * zd.value}, 0.0));
                }
            } catch (const std::exception &) {
                eqs.assign(n_eq, EquationValue{cplx(nan, nan), nan, nan});
            }
            for (std::size_t e = 0; e < n_eq; ++e) {
                rep.residual[e][p] = eqs[e].residual;
                rep.scale[e][p] = eqs[e].scale;
            }
        },
        opts.threads);

    detail::summarize(rep);
    return rep;
}

/// Sigma Psi = sigma Psi, componentwise. Massless gradient modes are reported
/// as diagnostics only.
inline ResidualReport residual_helicity(const ModeField &mode, const Grid &grid, double h,
                                        const ResidualOptions &opts = {}) {
    auto rep = residual_system(mode, grid, h, SystemTag::helicity, opts);
    rep.diagnostic = mode.family == Family::massless_gradient;
    return rep;
}

/// Combines reports at steps h and h/2: per point (2^p R(h/2) - R(h)) / (2^p - 1)
/// for a stencil of order p, with convergence order log2(R(h) / R(h/2)) per equation.
inline ResidualReport richardson(const ResidualReport &coarse, const ResidualReport &fine) {
    if (coarse.system != fine.system || !(coarse.grid == fine.grid) || coarse.stencil != fine.stencil ||
        coarse.equations.size() != fine.equations.size())
        throw std::invalid_argument("richardson: reports are not for the same system and grid");
    if (std::abs(fine.h - 0.5 * coarse.h) > 1.0e-12 * coarse.h)
        throw std::invalid_argument("richardson: fine report must use half the coarse step");

    const double p = static_cast<double>(static_cast<int>(coarse.stencil));
    const double factor = std::pow(2.0, p);
    ResidualReport out = fine;
    out.extrapolated = true;
    out.diagnostic = coarse.diagnostic || fine.diagnostic;
    for (std::size_t e = 0; e < out.equations.size(); ++e)
        for (std::size_t q = 0; q < out.residual[e].size(); ++q)
            out.residual[e][q] = (factor * fine.residual[e][q] - coarse.residual[e][q]) / (factor - 1.0);
    detail::summarize(out);
    for (std::size_t e = 0; e < out.equations.size(); ++e) {
        const auto &c = coarse.equations[e];
        const auto &f = fine.equations[e];
        if (c.max_rel >= order_noise_floor && f.max_abs > 0.0)
            out.equations[e].order = std::log2(c.max_abs / f.max_abs);
    }
    return out;
}

/// residual_system at h and h/2, combined by richardson().
inline ResidualReport residual_extrapolated(const ModeField &mode, const Grid &grid, double h, SystemTag tag,
                                            const ResidualOptions &opts = {}) {
    const auto coarse = residual_system(mode, grid, h, tag, opts);
    const auto fine = residual_system(mode, grid, 0.5 * h, tag, opts);
    auto out = richardson(coarse, fine);
    out.diagnostic = tag == SystemTag::helicity && mode.family == Family::massless_gradient;
    return out;
}

/// Largest |R_expanded - R_compact| relative to 10 machine epsilons times the
/// summed term magnitude of the expanded row; a value <= 1 means the two
/// transcriptions agree to roundoff at every point.
struct TranscriptionGap {
    double worst_ratio = 0.0;     // max |diff| / (eps * magnitude)
    double worst_abs = 0.0;
};

inline TranscriptionGap transcription_gap(const FieldFunction &field, int m, double eps, double mass,
                                          const Grid &grid, double h,
                                          StencilOrder stencil = StencilOrder::second) {
    grid.validate();
    TranscriptionGap gap;
    PointContext ctx;
    ctx.m = m;
    ctx.eps = eps;
    ctx.mass = mass;
    for (int i = 0; i < grid.n_r; ++i) {
        for (int j = 0; j < grid.n_z; ++j) {
            ctx.r = grid.r(i);
            ctx.z = grid.z(j);
            const auto jet = fd::sample_jet(field, ctx.r, ctx.z, h, stencil);
            const auto a = detail::full_compact(jet, ctx);
            const auto b = detail::full_expanded(jet, ctx);
            for (std::size_t e = 0; e < a.size(); ++e) {
                const double diff = std::abs(a[e].residual - b[e].residual);
                const double unit = std::numeric_limits<double>::epsilon() * std::max(b[e].magnitude, relative_floor);
                gap.worst_ratio = std::max(gap.worst_ratio, diff / unit);
                gap.worst_abs = std::max(gap.worst_abs, diff);
            }
        }
    }
    return gap;
}

} // namespace verify
} // namespace dkp_h3
