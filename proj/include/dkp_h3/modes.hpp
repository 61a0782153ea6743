#pragma once

// Exact spin-1 field modes in horospherical coordinates.
//
// Three families are assembled:
//   * sigma != 0 massive: helicity eigenmodes with Phi0 = 0 and E, H proportional
//     to Phi; they solve the full system when eps^2 + sigma^2 = M^2.
//   * sigma = 0 massive: built from a scalar master field Phi0.
//   * massless gradient modes: derivatives of an arbitrary scalar Phi0, E = H = 0.

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "errors.hpp"
#include "field.hpp"
#include "operators.hpp"
#include "specfun.hpp"

namespace dkp_h3 {

enum class Family { sigma, sigma0_massive, massless_gradient };
enum class RadialKind { J, Y };
enum class AxialKind { decaying, growing };

inline std::string to_string(Family f) {
    switch (f) {
    case Family::sigma:
        return "sigma";
    case Family::sigma0_massive:
        return "sigma0";
    case Family::massless_gradient:
        return "massless";
    }
    return "?";
}
inline std::string to_string(RadialKind k) { return k == RadialKind::J ? "J" : "Y"; }
inline std::string to_string(AxialKind k) { return k == AxialKind::decaying ? "decaying" : "growing"; }

/// Mode labels. sigma is complex; the propagating branch is sigma = i kappa.
/// lambda is unused by massless modes built from a non-separated Phi0.
struct QuantumNumbers {
    double eps = 0.0;
    int m = 0;
    cplx sigma{0.0, 0.0};
    double lambda = 1.0;
    double mass = 0.0;
};

/// A z-profile with value and d/dz, solving Z'' - order^2 Z = lambda e^{2z} Z.
struct AxialSolution {
    cplx order;
    double lambda = 1.0;
    AxialKind kind = AxialKind::decaying;
    std::function<SpecialFunctionValue(double z)> eval;

    [[nodiscard]] SpecialFunctionValue operator()(double z) const { return eval(z); }
};

/// Scalar function of (r, z) with first partials.
struct ScalarJet {
    cplx value;
    cplx dr;
    cplx dz;
};

/// Separated Phi0(r, z) = R(r) F(z) with F = e^z phi0(z); kept so the
/// separated ODEs can be checked independently of the product.
struct SeparatedScalar {
    int m = 0;
    double lambda = 1.0;
    double eps = 0.0;
    double mass = 0.0;
    RadialKind radial = RadialKind::J;
    AxialKind axial = AxialKind::decaying;
    std::shared_ptr<const RadialProfile> radial_factor;
    std::function<SpecialFunctionValue(double z)> axial_factor; // F(z), F'(z)
};

struct ScalarField {
    int m = 0;
    std::function<ScalarJet(double r, double z)> eval;
    std::optional<SeparatedScalar> separated;

    [[nodiscard]] ScalarJet operator()(double r, double z) const { return eval(r, z); }
};

struct ModeField {
    Family family = Family::sigma;
    QuantumNumbers qn;
    RadialKind radial = RadialKind::J;
    AxialKind axial = AxialKind::decaying;
    bool is_solution = true; // false when the (eps, sigma, M) closure fails
    FieldFunction evaluator;
    std::optional<SeparatedScalar> separated; // Phi0 factors (sigma0 and separated massless)

    [[nodiscard]] TenComponent operator()(double r, double z) const { return evaluator(r, z); }
};

namespace modes {

/// Closure residual, relative to max(1, M^2), below which a sigma mode counts as a solution.
inline constexpr double closure_tolerance = 1.0e-12;

namespace detail {

inline void require_lambda(double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("separation constant lambda must be > 0, got " + std::to_string(lambda));
}

inline SpecialFunctionValue bessel_radial(RadialKind kind, int order, double x) {
    return kind == RadialKind::J ? specfun::bessel_j(order, x) : specfun::bessel_y(order, x);
}

} // namespace detail

/// r -> C_{m+shift}(sqrt(lambda) r), C = J or Y, tagged with azimuthal number m.
/// Second derivative from Bessel's equation.
inline RadialProfile radial_profile(int m, double lambda, RadialKind kind, int shift = 0) {
    detail::require_lambda(lambda);
    const double k = std::sqrt(lambda);
    const int order = m + shift;
    return RadialProfile(m, [k, order, kind, lambda](double r) {
        const auto v = detail::bessel_radial(kind, order, k * r);
        const cplx d1 = k * v.derivative;
        const double nn = static_cast<double>(order) * order;
        const cplx d2 = -d1 / r + (nn / (r * r) - lambda) * v.value;
        return RadialJet{v.value, d1, d2};
    });
}

/// z -> K or I of order `order` at x = sqrt(lambda) e^z. Real orders use the
/// real-order Macdonald/modified Bessel functions of |order|; purely imaginary
/// orders i kappa use K_{i kappa} (decaying only).
inline AxialSolution axial_profile(cplx order, double lambda, AxialKind kind,
                                   const specfun::MacdonaldOptions &opts = {}) {
    detail::require_lambda(lambda);
    const double k = std::sqrt(lambda);
    AxialSolution out;
    out.order = order;
    out.lambda = lambda;
    out.kind = kind;

    if (order.imag() == 0.0) {
        const double nu = std::abs(order.real());
        out.eval = [k, nu, kind](double z) {
            const double x = k * std::exp(z);
            const auto v = kind == AxialKind::decaying ? specfun::bessel_k(nu, x) : specfun::bessel_i(nu, x);
            return SpecialFunctionValue{v.value, x * v.derivative};
        };
        return out;
    }
    if (order.real() == 0.0) {
        if (kind != AxialKind::decaying)
            throw std::invalid_argument("axial_profile: only the decaying (Macdonald) branch is available "
                                        "for imaginary order");
        const double kappa = std::abs(order.imag());
        out.eval = [k, kappa, opts](double z) {
            const double x = k * std::exp(z);
            const auto v = specfun::macdonald_imag_order(kappa, x, opts);
            return SpecialFunctionValue{v.value, x * v.derivative};
        };
        return out;
    }
    throw std::invalid_argument("axial_profile: order must be real or purely imaginary");
}

/// |eps^2 + sigma^2 - M^2|: what is left of "i eps E + i sigma H = M Phi" once
/// E = -i eps Phi / M and H = -i sigma Phi / M are substituted (times M).
inline double dispersion_residual(double eps, cplx sigma, double mass) {
    if (!(mass > 0.0))
        throw std::invalid_argument("dispersion_residual: mass must be > 0");
    return std::abs(eps * eps + sigma * sigma - mass * mass);
}

/// sigma = i kappa on the propagating branch that closes the system: kappa = sqrt(eps^2 - M^2).
inline std::optional<double> closing_kappa(double eps, double mass) {
    const double k2 = eps * eps - mass * mass;
    if (k2 < 0.0)
        return std::nullopt;
    return std::sqrt(k2);
}

/// sigma != 0 massive family. phi_2 = R_m(r) Z(z),
///   phi_1 = R_{m-1}(r) (-sigma Z - Z') / (2 g k),  phi_3 = R_{m+1}(r) (sigma Z - Z') / (2 g k),
/// so that b_- phi_1 = (-sigma - d_z) phi_2 / 2 and a_+ phi_3 = (sigma - d_z) phi_2 / 2.
/// Physical components: Phi_1 = e^z phi_1, Phi_2 = e^{2z} phi_2, Phi_3 = e^z phi_3,
/// E_j = -i eps Phi_j / M, H_j = -i sigma Phi_j / M, Phi0 = 0.
inline ModeField build_mode_sigma(const QuantumNumbers &qn, RadialKind radial = RadialKind::J,
                                  AxialKind axial = AxialKind::decaying,
                                  const specfun::MacdonaldOptions &opts = {}) {
    if (qn.sigma == cplx(0.0, 0.0))
        throw std::invalid_argument("build_mode_sigma: sigma must be nonzero");
    if (!(qn.mass > 0.0))
        throw std::invalid_argument("build_mode_sigma: mass must be > 0");
    if (qn.eps == 0.0)
        throw std::invalid_argument("build_mode_sigma: eps must be nonzero");
    detail::require_lambda(qn.lambda);

    const auto zprof = axial_profile(qn.sigma, qn.lambda, axial, opts);
    const double k = std::sqrt(qn.lambda);
    const double two_gk = 2.0 * ladder_gamma * k;
    const cplx sigma = qn.sigma;
    const cplx e_factor = cplx(0.0, -qn.eps) / qn.mass;
    const cplx h_factor = cplx(0.0, -1.0) * sigma / qn.mass;
    const int m = qn.m;

    ModeField mode;
    mode.family = Family::sigma;
    mode.qn = qn;
    mode.radial = radial;
    mode.axial = axial;
    mode.is_solution = dispersion_residual(qn.eps, qn.sigma, qn.mass) <=
                       closure_tolerance * std::max(1.0, qn.mass * qn.mass);
    mode.evaluator = [=](double r, double z) {
        const double x = k * r;
        const cplx rm = detail::bessel_radial(radial, m, x).value;
        const cplx rm1 = detail::bessel_radial(radial, m - 1, x).value;
        const cplx rp1 = detail::bessel_radial(radial, m + 1, x).value;
        const auto zz = zprof(z);
        const cplx zv = zz.value;
        const cplx zd = zz.derivative;

        const cplx phi2 = rm * zv;
        const cplx phi1 = rm1 * (-sigma * zv - zd) / two_gk;
        const cplx phi3 = rp1 * (sigma * zv - zd) / two_gk;
        const double ez = std::exp(z);

        TenComponent out;
        out[slot::phi1] = ez * phi1;
        out[slot::phi2] = ez * ez * phi2;
        out[slot::phi3] = ez * phi3;
        for (int j = 1; j <= 3; ++j) {
            out.e(j) = e_factor * out.phi(j);
            out.h(j) = h_factor * out.phi(j);
        }
        return out;
    };
    return mode;
}

/// Order of phi0 in the sigma = 0 massive branch: nu^2 = 1 - eps^2 + M^2,
/// returned as a real or purely imaginary number.
inline cplx sigma0_axial_order(double eps, double mass) {
    const double nu2 = 1.0 - eps * eps + mass * mass;
    return nu2 >= 0.0 ? cplx(std::sqrt(nu2), 0.0) : cplx(0.0, std::sqrt(-nu2));
}

/// Phi0(r, z) = C_m(sqrt(lambda) r) e^z phi0(z), phi0 = K_nu or I_nu at sqrt(lambda) e^z.
/// Solves [2 Delta - d_z e^{-2z} d_z - (eps^2 - M^2) e^{-2z}] Phi0 = 0.
inline ScalarField separated_scalar(int m, double lambda, double eps, double mass, RadialKind radial,
                                    AxialKind axial, const specfun::MacdonaldOptions &opts = {}) {
    detail::require_lambda(lambda);
    const auto phi0 = axial_profile(sigma0_axial_order(eps, mass), lambda, axial, opts);
    auto rprof = std::make_shared<const RadialProfile>(radial_profile(m, lambda, radial));

    // F = e^z phi0, F' = e^z (phi0 + phi0')
    auto factor = [phi0](double z) {
        const auto v = phi0(z);
        const double ez = std::exp(z);
        return SpecialFunctionValue{ez * v.value, ez * (v.value + v.derivative)};
    };

    ScalarField s;
    s.m = m;
    s.eval = [rprof, factor](double r, double z) {
        const auto rj = (*rprof)(r);
        const auto f = factor(z);
        return ScalarJet{rj.value * f.value, rj.d1 * f.value, rj.value * f.derivative};
    };
    s.separated = SeparatedScalar{m, lambda, eps, mass, radial, axial, rprof, factor};
    return s;
}

/// sigma = 0 massive family built from the separated master field Phi0:
///   phi_2 = i eps / (eps^2 - M^2) e^{-2z} d_z Phi0,
///   phi_1 = i eps / (M^2 - eps^2) a Phi0,  phi_3 = i eps / (M^2 - eps^2) b Phi0
/// (so b_- phi_1 = a_+ phi_3 = i eps / (M^2 - eps^2) Delta Phi0),
///   E_j = M / (i eps) Phi_j,  H_j = 0.
inline ModeField build_mode_sigma0_massive(const QuantumNumbers &qn, RadialKind radial = RadialKind::J,
                                           AxialKind axial = AxialKind::decaying,
                                           const specfun::MacdonaldOptions &opts = {}) {
    if (qn.sigma != cplx(0.0, 0.0))
        throw std::invalid_argument("build_mode_sigma0_massive: sigma must be 0");
    if (!(qn.mass > 0.0))
        throw std::invalid_argument("build_mode_sigma0_massive: mass must be > 0");
    if (qn.eps == 0.0)
        throw std::invalid_argument("build_mode_sigma0_massive: eps must be nonzero");
    const double gap = qn.eps * qn.eps - qn.mass * qn.mass;
    if (std::abs(gap) <= 1.0e-12 * std::max(qn.eps * qn.eps, qn.mass * qn.mass))
        throw DegenerateFamilyError("build_mode_sigma0_massive: eps^2 = M^2 is degenerate for this family");

    const auto scalar = separated_scalar(qn.m, qn.lambda, qn.eps, qn.mass, radial, axial, opts);
    const auto &sep = *scalar.separated;
    const double k = std::sqrt(qn.lambda);
    const cplx c_bar = cplx(0.0, qn.eps) / (-gap);  // i eps / (M^2 - eps^2)
    const cplx c_two = cplx(0.0, qn.eps) / gap;     // i eps / (eps^2 - M^2)
    const cplx e_factor = qn.mass / cplx(0.0, qn.eps);
    const int m = qn.m;
    const auto factor = sep.axial_factor;

    ModeField mode;
    mode.family = Family::sigma0_massive;
    mode.qn = qn;
    mode.radial = radial;
    mode.axial = axial;
    mode.is_solution = true;
    mode.separated = sep;
    mode.evaluator = [=](double r, double z) {
        const double x = k * r;
        const cplx rm = detail::bessel_radial(radial, m, x).value;
        const cplx rm1 = detail::bessel_radial(radial, m - 1, x).value;
        const cplx rp1 = detail::bessel_radial(radial, m + 1, x).value;
        const auto f = factor(z);
        const double ez = std::exp(z);
        const double gk = ladder_gamma * k;

        TenComponent out;
        out.phi0() = rm * f.value;
        // a Phi0 = g k C_{m-1} F,  b Phi0 = g k C_{m+1} F
        out[slot::phi1] = ez * c_bar * gk * rm1 * f.value;
        out[slot::phi2] = c_two * rm * f.derivative; // e^{2z} phi_2
        out[slot::phi3] = ez * c_bar * gk * rp1 * f.value;
        for (int j = 1; j <= 3; ++j)
            out.e(j) = e_factor * out.phi(j);
        return out;
    };
    return mode;
}

/// Gaussian bump exp(-((r - r0)^2 + (z - z0)^2) / w^2) with analytic partials.
inline ScalarField gaussian_bump(int m, double r0, double z0, double width, cplx amplitude = 1.0) {
    if (!(width > 0.0))
        throw std::invalid_argument("gaussian_bump: width must be > 0");
    ScalarField s;
    s.m = m;
    s.eval = [=](double r, double z) {
        const double w2 = width * width;
        const double dr = r - r0;
        const double dz = z - z0;
        const cplx v = amplitude * std::exp(-(dr * dr + dz * dz) / w2);
        return ScalarJet{v, -2.0 * dr / w2 * v, -2.0 * dz / w2 * v};
    };
    return s;
}

/// Massless gradient family: E = H = 0 and
///   Phi_1 = e^z a Phi0 / (i eps),  Phi_2 = (i / eps) d_z Phi0,  Phi_3 = e^z b Phi0 / (i eps).
inline ModeField build_mode_massless_gradient(const ScalarField &phi0, double eps) {
    if (eps == 0.0)
        throw std::invalid_argument("build_mode_massless_gradient: eps must be nonzero");
    if (!phi0.eval)
        throw std::invalid_argument("build_mode_massless_gradient: empty scalar field");

    ModeField mode;
    mode.family = Family::massless_gradient;
    mode.qn.eps = eps;
    mode.qn.m = phi0.m;
    mode.qn.sigma = 0.0;
    mode.qn.mass = 0.0;
    mode.qn.lambda = phi0.separated ? phi0.separated->lambda : 0.0;
    if (phi0.separated) {
        mode.radial = phi0.separated->radial;
        mode.axial = phi0.separated->axial;
    }
    mode.separated = phi0.separated;
    mode.is_solution = true;

    const int m = phi0.m;
    const cplx inv_ieps = 1.0 / cplx(0.0, eps);
    const cplx i_over_eps = cplx(0.0, 1.0 / eps);
    auto scalar = phi0.eval;
    mode.evaluator = [=](double r, double z) {
        const auto s = scalar(r, z);
        const double ez = std::exp(z);
        TenComponent out;
        out.phi0() = s.value;
        out[slot::phi1] = ez * operators::ladder(LadderKind::a, m, r, s.value, s.dr) * inv_ieps;
        out[slot::phi2] = i_over_eps * s.dz;
        out[slot::phi3] = ez * operators::ladder(LadderKind::b, m, r, s.value, s.dr) * inv_ieps;
        return out;
    };
    return mode;
}

/// alpha * first + beta * second, pointwise. Both must share family and quantum numbers.
inline ModeField linear_combination(cplx alpha, const ModeField &first, cplx beta, const ModeField &second) {
    if (first.family != second.family || first.qn.m != second.qn.m || first.qn.eps != second.qn.eps ||
        first.qn.sigma != second.qn.sigma || first.qn.mass != second.qn.mass)
        throw std::invalid_argument("linear_combination: modes must share family and quantum numbers");
    ModeField out = first;
    out.is_solution = first.is_solution && second.is_solution;
    out.separated.reset();
    auto f1 = first.evaluator;
    auto f2 = second.evaluator;
    out.evaluator = [=](double r, double z) { return alpha * f1(r, z) + beta * f2(r, z); };
    return out;
}

} // namespace modes
} // namespace dkp_h3
