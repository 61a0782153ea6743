#pragma once

// Central-difference jets of fields sampled over (r, z).

#include <stdexcept>
#include <string>

namespace dkp_h3 {

enum class StencilOrder { second = 2, fourth = 4 };

/// Value plus first and pure second partials in r and z.
template <class V>
struct Jet {
    V value{};
    V dr{};
    V dz{};
    V drr{};
    V dzz{};
};

namespace fd {

/// Points each stencil reaches beyond the evaluation point, in units of h.
constexpr int reach(StencilOrder order) { return order == StencilOrder::second ? 1 : 2; }

namespace detail {

template <class V>
void first_and_second(const V &m2, const V &m1, const V &c, const V &p1, const V &p2, double h,
                      StencilOrder order, V &d1, V &d2) {
    if (order == StencilOrder::second) {
        d1 = (p1 - m1) * (1.0 / (2.0 * h));
        d2 = (p1 - c * 2.0 + m1) * (1.0 / (h * h));
    } else {
        d1 = (m2 - m1 * 8.0 + p1 * 8.0 - p2) * (1.0 / (12.0 * h));
        d2 = (m2 * -1.0 + m1 * 16.0 - c * 30.0 + p1 * 16.0 - p2) * (1.0 / (12.0 * h * h));
    }
}

} // namespace detail

/// Jet of `f(r, z)` from a 5-point (second order) or 9-point (fourth order) cross stencil.
template <class F>
auto sample_jet(F &&f, double r, double z, double h, StencilOrder order = StencilOrder::second) {
    using V = decltype(f(r, z));
    if (!(h > 0.0))
        throw std::invalid_argument("sample_jet: step must be > 0");
    if (!(r - reach(order) * h > 0.0))
        throw std::domain_error("sample_jet: stencil at r=" + std::to_string(r) + " crosses r = 0");

    Jet<V> jet;
    jet.value = f(r, z);
    const bool wide = order == StencilOrder::fourth;
    const V rm1 = f(r - h, z), rp1 = f(r + h, z);
    const V zm1 = f(r, z - h), zp1 = f(r, z + h);
    const V rm2 = wide ? f(r - 2.0 * h, z) : V{};
    const V rp2 = wide ? f(r + 2.0 * h, z) : V{};
    const V zm2 = wide ? f(r, z - 2.0 * h) : V{};
    const V zp2 = wide ? f(r, z + 2.0 * h) : V{};
    detail::first_and_second(rm2, rm1, jet.value, rp1, rp2, h, order, jet.dr, jet.drr);
    detail::first_and_second(zm2, zm1, jet.value, zp1, zp2, h, order, jet.dz, jet.dzz);
    return jet;
}

/// One-dimensional first and second derivative of `f(x)`.
template <class F>
auto derivatives_1d(F &&f, double x, double h, StencilOrder order = StencilOrder::second) {
    using V = decltype(f(x));
    const bool wide = order == StencilOrder::fourth;
    const V c = f(x);
    const V m1 = f(x - h), p1 = f(x + h);
    const V m2 = wide ? f(x - 2.0 * h) : V{};
    const V p2 = wide ? f(x + 2.0 * h) : V{};
    struct Out {
        V value, d1, d2;
    } out{c, V{}, V{}};
    detail::first_and_second(m2, m1, c, p1, p2, h, order, out.d1, out.d2);
    return out;
}

} // namespace fd
} // namespace dkp_h3
