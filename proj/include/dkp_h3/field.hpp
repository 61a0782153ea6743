#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace dkp_h3 {

using cplx = std::complex<double>;

/// The ten Duffin-Kemmer components (Phi0, Phi_1..3, E_1..3, H_1..3) at one
/// point, with the factors exp(-i eps t) exp(i m phi) stripped.
/// Vector components use the cyclic basis indices 1, 2, 3.
struct TenComponent {
    std::array<cplx, 10> c{};

    static constexpr std::size_t size() { return 10; }

    cplx &operator[](std::size_t i) { return c[i]; }
    const cplx &operator[](std::size_t i) const { return c[i]; }

    cplx &phi0() { return c[0]; }
    [[nodiscard]] const cplx &phi0() const { return c[0]; }
    cplx &phi(int j) { return c[check(j)]; }
    [[nodiscard]] const cplx &phi(int j) const { return c[check(j)]; }
    cplx &e(int j) { return c[3 + check(j)]; }
    [[nodiscard]] const cplx &e(int j) const { return c[3 + check(j)]; }
    cplx &h(int j) { return c[6 + check(j)]; }
    [[nodiscard]] const cplx &h(int j) const { return c[6 + check(j)]; }

    TenComponent &operator+=(const TenComponent &o) {
        for (std::size_t i = 0; i < 10; ++i)
            c[i] += o.c[i];
        return *this;
    }
    TenComponent &operator-=(const TenComponent &o) {
        for (std::size_t i = 0; i < 10; ++i)
            c[i] -= o.c[i];
        return *this;
    }
    TenComponent &operator*=(cplx s) {
        for (auto &v : c)
            v *= s;
        return *this;
    }

    friend TenComponent operator+(TenComponent a, const TenComponent &b) { return a += b; }
    friend TenComponent operator-(TenComponent a, const TenComponent &b) { return a -= b; }
    friend TenComponent operator*(cplx s, TenComponent a) { return a *= s; }
    friend TenComponent operator*(TenComponent a, cplx s) { return a *= s; }

    [[nodiscard]] bool all_finite() const {
        for (const auto &v : c)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                return false;
        return true;
    }

private:
    static std::size_t check(int j) {
        if (j < 1 || j > 3)
            throw std::out_of_range("TenComponent: vector index must be 1..3");
        return static_cast<std::size_t>(j);
    }
};

/// Slot indices into TenComponent::c.
namespace slot {
inline constexpr std::size_t phi0 = 0;
inline constexpr std::size_t phi1 = 1, phi2 = 2, phi3 = 3;
inline constexpr std::size_t e1 = 4, e2 = 5, e3 = 6;
inline constexpr std::size_t h1 = 7, h2 = 8, h3 = 9;
} // namespace slot

/// A ten-component field over the (r, z) half plane.
using FieldFunction = std::function<TenComponent(double r, double z)>;

} // namespace dkp_h3
