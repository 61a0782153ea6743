// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <dkp_h3/cli.hpp>
#include <dkp_h3/geometry.hpp>
#include <dkp_h3/modes.hpp>
#include <dkp_h3/operators.hpp>
#include <dkp_h3/specfun.hpp>
#include <dkp_h3/verify.hpp>

#include "oracles.hpp"

using namespace dkp_h3;

namespace {

int failures = 0;

void report(int id, const std::string &name, bool pass, const std::string &detail) {
    std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

void guarded(int id, const std::string &name, const std::function<void()> &body) {
    try {
        body();
    } catch (const std::exception &e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

void geometry_suite() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> ur(0.1, 5.0), uz(-2.0, 2.0);
    double worst_chris = 0.0, worst_ricci = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double r = ur(rng);
        const double z = uz(rng);
        const FieldPoint p(r, z);
        const double h = 1e-3 * std::min(1.0, r);
        const auto G = geometry::christoffel_at(p);
        const auto Go = oracle::christoffel(r, z, h);
        const auto g = geometry::ricci_rotation(p);
        const auto go = oracle::ricci(r, z, h);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c) {
                    worst_chris = std::max(worst_chris, std::abs(G(a, b, c) - Go[a][b][c]));
                    worst_ricci = std::max(worst_ricci, std::abs(g(a, b, c) - go[a][b][c]));
                }
    }
    report(1, "geometry", worst_chris <= 1e-7 && worst_ricci <= 1e-7,
           "max |Gamma - oracle| = " + sci(worst_chris) + ", max |gamma - oracle| = " + sci(worst_ricci) +
               " (tol 1e-7, 100 points)");
}

void operator_suite() {
    constexpr double g = ladder_gamma;
    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> uc(-2.0, 2.0), ua(0.2, 1.5), ur(0.3, 4.0);
    std::uniform_int_distribution<int> um(-3, 3);
    double worst_fact = 0.0;
    for (int i = 0; i < 20; ++i) {
        // f = (c0 + c1 r + c2 r^2) exp(-alpha r) + c3 sin(r); derivatives by hand
        const double c0 = uc(rng), c1 = uc(rng), c2 = uc(rng), c3 = uc(rng), al = ua(rng);
        const double r = ur(rng);
        const int m = um(rng);
        const double p = c0 + c1 * r + c2 * r * r, p1 = c1 + 2 * c2 * r, p2 = 2 * c2;
        const double e = std::exp(-al * r);
        const double f = p * e + c3 * std::sin(r);
        const double f1 = (p1 - al * p) * e + c3 * std::cos(r);
        const double f2 = (p2 - 2 * al * p1 + al * al * p) * e - c3 * std::sin(r);
        const double af = g * (f1 + m / r * f), daf = g * (f2 + m / r * f1 - m / (r * r) * f);
        const double bf = g * (-f1 + m / r * f), dbf = g * (-f2 + m / r * f1 - m / (r * r) * f);
        const cplx d = operators::delta(m, r, f, f1, f2);
        const double scale = std::max(1.0, std::abs(f2) + std::abs(f1 / r) + std::abs(m * m * f / (r * r)));
        worst_fact = std::max(worst_fact, std::abs(operators::ladder(LadderKind::b_minus, m, r, af, daf) - d) / scale);
        worst_fact = std::max(worst_fact, std::abs(operators::ladder(LadderKind::a_plus, m, r, bf, dbf) - d) / scale);
    }
    double worst_eig = 0.0;
    for (int m = 0; m <= 3; ++m)
        for (double lambda : {0.5, 1.0, 2.0})
            for (double r : {0.5, 1.0, 1.7, 2.9, 4.2}) {
                const auto prof = modes::radial_profile(m, lambda, RadialKind::J);
                worst_eig = std::max(worst_eig, std::abs(2.0 * operators::delta_apply(prof, r) - lambda * prof(r).value));
            }
    report(2, "operators", worst_fact <= 1e-7 && worst_eig <= 1e-7,
           "max |b_-a - Delta|, |a_+b - Delta| = " + sci(worst_fact) + ", max |2 Delta J - lambda J| = " +
               sci(worst_eig) + " (tol 1e-7)");
}

void specfun_suite() {
    using std::numbers::pi;
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> un(0.0, 3.0), ux(0.2, 20.0);
    double w = 0.0, ode = 0.0;
    auto ode_res = [](auto fn, double nu, double x, double sign) {
        const double h = 1e-2 * std::min(1.0, x);
        const auto c = fn(nu, x);
        const double d2 = oracle::derivative6([&](double t) { return fn(nu, t).derivative.real(); }, x, h);
        const double f = c.value.real(), d1 = c.derivative.real();
        const double scale = std::abs(x * x * d2) + std::abs(x * d1) + std::abs((x * x + std::abs(nu * nu)) * f);
        return std::abs(x * x * d2 + x * d1 + (sign * x * x - nu * nu) * f) / scale;
    };
    for (int i = 0; i < 50; ++i) {
        const double nu = un(rng);
        const double x = ux(rng);
        const auto j = specfun::bessel_j(nu, x), y = specfun::bessel_y(nu, x);
        const auto ii = specfun::bessel_i(nu, x), k = specfun::bessel_k(nu, x);
        const double wjy = (j.value * y.derivative - j.derivative * y.value).real();
        const double wik = (ii.value * k.derivative - ii.derivative * k.value).real();
        w = std::max({w, std::abs(wjy * pi * x / 2 - 1.0), std::abs(wik * x + 1.0)});
        ode = std::max({ode, ode_res(specfun::bessel_j, nu, x, 1.0), ode_res(specfun::bessel_y, nu, x, 1.0),
                        ode_res(specfun::bessel_i, nu, x, -1.0), ode_res(specfun::bessel_k, nu, x, -1.0)});
    }
    std::uniform_real_distribution<double> uk(0.0, 5.0), uxk(0.2, 10.0);
    double quad = 0.0;
    for (int i = 0; i < 30; ++i) {
        const double kappa = uk(rng);
        const double x = uxk(rng);
        const auto v = specfun::macdonald_imag_order(kappa, x);
        const auto ref = oracle::k_imag(kappa, x);
        const double env = std::hypot(ref.value, x * ref.derivative);
        quad = std::max(quad, std::abs(v.value.real() - ref.value) / env);
        // K_{i kappa}: x^2 f'' + x f' - (x^2 - kappa^2) f = 0
        const double h = 1e-2 * std::min(1.0, x);
        const double d2 = oracle::derivative6(
            [&](double t) { return specfun::macdonald_imag_order(kappa, t).derivative.real(); }, x, h);
        const double f = v.value.real(), d1 = v.derivative.real();
        const double scale = std::abs(x * x * d2) + std::abs(x * d1) + std::abs((x * x + kappa * kappa) * f);
        ode = std::max(ode, std::abs(x * x * d2 + x * d1 - (x * x - kappa * kappa) * f) / scale);
    }
    report(3, "special functions", w <= 1e-10 && quad <= 1e-8 && ode <= 1e-8,
           "Wronskian rel = " + sci(w) + " (tol 1e-10), K_i two-quadrature = " + sci(quad) +
               " (tol 1e-8), ODE rel = " + sci(ode) + " (tol 1e-8)");
}

void sigma_mode() {
    QuantumNumbers qn{std::sqrt(2.0), 1, cplx(0.0, 1.0), 1.0, 1.0};
    const auto mode = modes::build_mode_sigma(qn);
    const Grid grid;
    const double full = verify::residual_extrapolated(mode, grid, 1e-3, SystemTag::full).max_rel();
    const double hel = verify::residual_extrapolated(mode, grid, 1e-3, SystemTag::helicity).max_rel();
    qn.sigma = cplx(0.0, 1.1);
    const auto off = modes::build_mode_sigma(qn);
    const double pert = verify::residual_extrapolated(off, grid, 1e-3, SystemTag::full).max_rel();
    report(4, "sigma mode", full <= 1e-6 && hel <= 1e-6 && pert > 1e-3,
           "full = " + sci(full) + ", helicity = " + sci(hel) + " (tol 1e-6); kappa 1.1 = " + sci(pert) +
               " (> 1e-3)");
}

void transcription() {
    std::mt19937_64 rng(105);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    const Grid grid;
    for (int trial = 0; trial < 4; ++trial) {
        std::array<double, 40> c{};
        for (auto &v : c)
            v = u(rng);
        FieldFunction f = [c](double r, double z) {
            TenComponent t;
            for (std::size_t i = 0; i < 10; ++i)
                t[i] = cplx(c[4 * i] * std::exp(c[4 * i + 1] * r * z), c[4 * i + 2] * std::sin(r + c[4 * i + 3] * z));
            return t;
        };
        const int m = trial - 1;
        const auto gap = verify::transcription_gap(f, m, 0.5 + trial, 1.0 + 0.3 * trial, grid, 1e-3);
        worst = std::max(worst, gap.worst_ratio);
    }
    report(5, "transcription", worst <= 10.0,
           "max |R_expanded - R_compact| = " + sci(worst) + " eps * sum|terms| (tol 10)");
}

void sigma0_mode() {
    double scalar = 0.0, reduced = 0.0;
    bool h_zero = true;
    const Grid grid;
    for (auto qn : {QuantumNumbers{0.5, 1, 0.0, 1.0, 1.0}, QuantumNumbers{2.0, 1, 0.0, 1.0, 0.5}}) {
        const auto mode = modes::build_mode_sigma0_massive(qn);
        const auto s = verify::residual_extrapolated(mode, grid, 1e-3, SystemTag::scalar);
        scalar = std::max(scalar, s.equations[0].max_rel);
        reduced = std::max(reduced, verify::residual_extrapolated(mode, grid, 1e-3, SystemTag::sigma0).max_rel());
        for (int i = 0; i < grid.n_r; ++i)
            for (int j = 0; j < grid.n_z; ++j) {
                const auto psi = mode(grid.r(i), grid.z(j));
                for (int k = 1; k <= 3; ++k)
                    h_zero = h_zero && psi.h(k) == cplx(0.0);
            }
    }
    report(6, "sigma=0 mode", scalar <= 1e-7 && reduced <= 1e-6 && h_zero,
           "scalar master = " + sci(scalar) + " (tol 1e-7), reduced system = " + sci(reduced) +
               " (tol 1e-6), H == 0: " + (h_zero ? "yes" : "no"));
}

void massless_mode() {
    const Grid grid;
    const auto gauss = modes::build_mode_massless_gradient(modes::gaussian_bump(1, 1.5, 0.0, 0.7), 1.3);
    const auto bessel = modes::build_mode_massless_gradient(
        modes::separated_scalar(1, 1.0, 1.3, 0.0, RadialKind::J, AxialKind::decaying), 1.3);
    bool zero = true;
    for (const auto *mode : {&gauss, &bessel})
        for (int i = 0; i < grid.n_r; ++i)
            for (int j = 0; j < grid.n_z; ++j) {
                const auto psi = (*mode)(grid.r(i), grid.z(j));
                for (int k = 1; k <= 3; ++k)
                    zero = zero && psi.e(k) == cplx(0.0) && psi.h(k) == cplx(0.0);
            }
    const double rg = verify::residual_extrapolated(gauss, grid, 1e-3, SystemTag::massless).max_rel();
    const double rb = verify::residual_extrapolated(bessel, grid, 1e-3, SystemTag::massless).max_rel();
    report(7, "massless gradient mode", zero && rg <= 1e-6 && rb <= 1e-6,
           std::string("E == H == 0: ") + (zero ? "yes" : "no") + ", gaussian = " + sci(rg) + ", bessel = " +
               sci(rb) + " (tol 1e-6)");
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep))
        out.push_back(item);
    return out;
}

void dispersion_scan() {
    std::ostringstream out, err;
    const int code = cli::run({"dispersion", "--eps", "1.4142135", "--mass", "1", "--kappa-range", "0:2:41"}, out, err);
    double best_k = std::nan(""), best = std::numeric_limits<double>::infinity();
    double oracle_k = std::nan(""), oracle_best = std::numeric_limits<double>::infinity();
    std::istringstream in(out.str());
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (!header) {
            header = true;
            continue;
        }
        const auto c = split(line, ',');
        const double k = std::stod(c[0]);
        if (c[2] != "nan" && std::stod(c[2]) < best) {
            best = std::stod(c[2]);
            best_k = k;
        }
        const double o = oracle::closure_residual(1.4142135, cplx(0.0, k), 1.0);
        if (o < oracle_best) {
            oracle_best = o;
            oracle_k = k;
        }
    }
    const double step = 2.0 / 40;
    const bool pass = code == 0 && std::abs(best_k - 1.0) <= step && best_k == oracle_k;
    report(8, "dispersion scan", pass,
           "full-system minimum at kappa = " + sci(best_k) + ", elimination oracle at kappa = " + sci(oracle_k) +
               " (grid step " + sci(step) + ")");
}

void determinism() {
    const std::vector<std::vector<std::string>> cmds{
        {"geometry-check"},
        {"mode", "--family", "sigma"},
        {"mode", "--family", "sigma0", "--format", "json"},
        {"mode", "--family", "massless", "--phi0", "bessel"},
        {"verify", "--family", "sigma", "--system", "full", "--format", "json"},
        {"dispersion", "--kappa-range", "0:2:11"},
        {"specfun", "--fn", "Kimag", "--order", "2", "--arg", "0.5"},
    };
    int identical = 0;
    for (const auto &cmd : cmds) {
        std::ostringstream o1, e1, o2, e2;
        const int c1 = cli::run(cmd, o1, e1);
        const int c2 = cli::run(cmd, o2, e2);
        identical += (c1 == c2 && o1.str() == o2.str() && e1.str() == e2.str() && !o1.str().empty());
    }
    report(9, "determinism", identical == static_cast<int>(cmds.size()),
           std::to_string(identical) + "/" + std::to_string(cmds.size()) + " subcommand runs byte-identical");
}

} // namespace

int main() {
    guarded(1, "geometry", geometry_suite);
    guarded(2, "operators", operator_suite);
    guarded(3, "special functions", specfun_suite);
    guarded(4, "sigma mode", sigma_mode);
    guarded(5, "transcription", transcription);
    guarded(6, "sigma=0 mode", sigma0_mode);
    guarded(7, "massless gradient mode", massless_mode);
    guarded(8, "dispersion scan", dispersion_scan);
    guarded(9, "determinism", determinism);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
