#pragma once

// Radial ladder operators
//     a   = g ( d/dr + m/r),     b   = g (-d/dr + m/r),
//     a_+ = g ( d/dr + (m+1)/r), b_+ = g (-d/dr + (m+1)/r),
//     a_- = g ( d/dr + (m-1)/r), b_- = g (-d/dr + (m-1)/r),     g = 1/sqrt(2),
// the transverse operator Delta = b_- a = a_+ b, and the generalized helicity
// operator Sigma acting on ten-component fields.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "field.hpp"
#include "finite_difference.hpp"
#include "geometry.hpp"

namespace dkp_h3 {

/// Coupling constant of the ladder operators.
inline constexpr double ladder_gamma = 0.70710678118654752440; // 1/sqrt(2)

enum class LadderKind { a, a_plus, a_minus, b, b_plus, b_minus };

struct RadialJet {
    cplx value;
    cplx d1;
    cplx d2;
};

/// A function of r tagged with the azimuthal number m that enters the ladder
/// operators acting on it. The evaluator need not be a Bessel function of
/// order m (e.g. J_{m-1} is acted on by b_- with the same m).
class RadialProfile {
public:
    using Evaluator = std::function<RadialJet(double)>;

    RadialProfile(int m, Evaluator eval) : m_(m), eval_(std::move(eval)) {}

    /// Generic profile: derivatives by fourth-order central differences with
    /// step 1e-4 * max(1, r).
    static RadialProfile from_function(int m, std::function<cplx(double)> f) {
        return RadialProfile(m, [f = std::move(f)](double r) {
            const double h = 1.0e-4 * std::max(1.0, r);
            const auto d = fd::derivatives_1d(f, r, h, StencilOrder::fourth);
            return RadialJet{d.value, d.d1, d.d2};
        });
    }

    [[nodiscard]] int m() const { return m_; }
    [[nodiscard]] RadialJet operator()(double r) const { return eval_(r); }

private:
    int m_;
    Evaluator eval_;
};

namespace operators {

/// +1 for the a-family, -1 for the b-family.
constexpr double derivative_sign(LadderKind k) {
    return (k == LadderKind::a || k == LadderKind::a_plus || k == LadderKind::a_minus) ? 1.0 : -1.0;
}

/// Shift added to m in the 1/r term.
constexpr int order_shift(LadderKind k) {
    switch (k) {
    case LadderKind::a_plus:
    case LadderKind::b_plus:
        return 1;
    case LadderKind::a_minus:
    case LadderKind::b_minus:
        return -1;
    default:
        return 0;
    }
}

/// Ladder operator on a sampled value and its r-derivative.
inline cplx ladder(LadderKind kind, int m, double r, cplx value, cplx d_r) {
    return ladder_gamma * (derivative_sign(kind) * d_r + (static_cast<double>(m + order_shift(kind)) / r) * value);
}

inline cplx ladder_apply(LadderKind kind, const RadialProfile &f, double r) {
    if (!(r > 0.0))
        throw std::domain_error("ladder_apply: r must be > 0, got " + std::to_string(r));
    const auto jet = f(r);
    return ladder(kind, f.m(), r, jet.value, jet.d1);
}

/// Delta f = (-f'' - f'/r + m^2 f / r^2) / 2.
inline cplx delta(int m, double r, cplx value, cplx d1, cplx d2) {
    const double mm = static_cast<double>(m) * m;
    return 0.5 * (-d2 - d1 / r + (mm / (r * r)) * value);
}

inline cplx delta_apply(const RadialProfile &f, double r) {
    if (!(r > 0.0))
        throw std::domain_error("delta_apply: r must be > 0, got " + std::to_string(r));
    const auto jet = f(r);
    return delta(f.m(), r, jet.value, jet.d1, jet.d2);
}

/// One helicity output slot together with the size of the largest term that
/// entered it (used to normalise residuals).
struct HelicitySlot {
    cplx value;
    double scale;
};

/// Sigma acting on one vector triplet (X1, X2, X3):
///     (Sigma X)_1 =  e^z a X2 + (d_z - 1) X1
///     (Sigma X)_2 = -e^z b_- X1 + e^z a_+ X3
///     (Sigma X)_3 = -e^z b X2 - (d_z - 1) X3
inline std::array<HelicitySlot, 3> helicity_triplet(const Jet<TenComponent> &jet, std::size_t base, int m,
                                                    double r, double z) {
    const double ez = std::exp(z);
    const auto v = [&](int j) { return jet.value[base + j - 1]; };
    const auto dr = [&](int j) { return jet.dr[base + j - 1]; };
    const auto dz = [&](int j) { return jet.dz[base + j - 1]; };

    const cplx t1a = ez * ladder(LadderKind::a, m, r, v(2), dr(2));
    const cplx t1b = dz(1) - v(1);
    const cplx t2a = -ez * ladder(LadderKind::b_minus, m, r, v(1), dr(1));
    const cplx t2b = ez * ladder(LadderKind::a_plus, m, r, v(3), dr(3));
    const cplx t3a = -ez * ladder(LadderKind::b, m, r, v(2), dr(2));
    const cplx t3b = -(dz(3) - v(3));

    auto mx = [](std::initializer_list<double> xs) { return std::max(xs); };
    return {{{t1a + t1b, mx({std::abs(t1a), std::abs(dz(1)), std::abs(v(1))})},
             {t2a + t2b, mx({std::abs(t2a), std::abs(t2b)})},
             {t3a + t3b, mx({std::abs(t3a), std::abs(dz(3)), std::abs(v(3))})}}};
}

/// Sigma Psi at a point from a precomputed jet. The Phi0 slot is always zero.
inline TenComponent helicity_from_jet(const Jet<TenComponent> &jet, int m, double r, double z) {
    TenComponent out;
    for (std::size_t base : {slot::phi1, slot::e1, slot::h1}) {
        const auto t = helicity_triplet(jet, base, m, r, z);
        for (std::size_t k = 0; k < 3; ++k)
            out[base + k] = t[k].value;
    }
    return out;
}

/// Sigma Psi at p, derivatives of Psi by central differences with step h.
inline TenComponent helicity_apply(const FieldFunction &psi, int m, const FieldPoint &p, double h,
                                   StencilOrder order = StencilOrder::second) {
    const auto jet = fd::sample_jet(psi, p.r, p.z, h, order);
    return helicity_from_jet(jet, m, p.r, p.z);
}

} // namespace operators
} // namespace dkp_h3
