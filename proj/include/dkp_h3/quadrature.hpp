#pragma once

// Adaptive Gauss-Kronrod (G7/K15) integration of vector-valued integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace dkp_h3::quadrature {

namespace detail {

// Abscissae of the 15-point Kronrod rule on [-1, 1] (positive half, descending);
// odd indices are the 7-point Gauss nodes.
inline constexpr std::array<double, 8> kronrod_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

} // namespace detail

template <std::size_t N>
struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    std::array<double, N> integral{};
    std::array<double, N> abs_integral{};
    double error = 0.0;

    bool operator<(const Segment &other) const { return error < other.error; }
};

/// One G7/K15 panel. `f(t)` returns std::array<double, N>.
template <std::size_t N, class F>
Segment<N> gk15_segment(F &&f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    std::array<double, N> kronrod{};
    std::array<double, N> gauss{};
    std::array<double, N> absolute{};

    const auto fc = f(center);
    for (std::size_t k = 0; k < N; ++k) {
        kronrod[k] = detail::kronrod_weights[7] * fc[k];
        gauss[k] = detail::gauss_weights[3] * fc[k];
        absolute[k] = detail::kronrod_weights[7] * std::abs(fc[k]);
    }
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * detail::kronrod_nodes[j];
        const auto f1 = f(center - dx);
        const auto f2 = f(center + dx);
        for (std::size_t k = 0; k < N; ++k) {
            kronrod[k] += detail::kronrod_weights[j] * (f1[k] + f2[k]);
            absolute[k] += detail::kronrod_weights[j] * (std::abs(f1[k]) + std::abs(f2[k]));
            if (j % 2 == 1)
                gauss[k] += detail::gauss_weights[j / 2] * (f1[k] + f2[k]);
        }
    }

    Segment<N> seg;
    seg.lo = lo;
    seg.hi = hi;
    for (std::size_t k = 0; k < N; ++k) {
        seg.integral[k] = kronrod[k] * half;
        seg.abs_integral[k] = absolute[k] * std::abs(half);
        seg.error = std::max(seg.error, std::abs((kronrod[k] - gauss[k]) * half));
    }
    return seg;
}

template <std::size_t N>
struct Result {
    std::array<double, N> value{};
    std::array<double, N> abs_value{}; // integral of |f|, sets the roundoff floor
    double error_estimate = 0.0;
    int segments = 0;
    bool converged = false;
};

/// Globally adaptive integration over [lo, hi], starting from `initial_panels`
/// equal panels and bisecting the worst panel until the summed error estimate
/// drops below max(abs_tol, rel_tol * max_k |I_k|).
template <std::size_t N, class F>
Result<N> integrate(F &&f, double lo, double hi, double abs_tol, double rel_tol,
                    int initial_panels = 1, int max_segments = 2000) {
    std::priority_queue<Segment<N>> work;
    const int panels = std::max(1, initial_panels);
    const double width = (hi - lo) / panels;
    for (int i = 0; i < panels; ++i) {
        const double a = lo + width * i;
        const double b = (i + 1 == panels) ? hi : lo + width * (i + 1);
        work.push(gk15_segment<N>(f, a, b));
    }

    auto totals = [&work]() {
        Result<N> out;
        auto copy = work;
        while (!copy.empty()) {
            const auto &s = copy.top();
            for (std::size_t k = 0; k < N; ++k) {
                out.value[k] += s.integral[k];
                out.abs_value[k] += s.abs_integral[k];
            }
            out.error_estimate += s.error;
            ++out.segments;
            copy.pop();
        }
        return out;
    };

    Result<N> running = totals();
    bool converged = false;
    while (true) {
        double scale = 0.0;
        for (double v : running.value)
            scale = std::max(scale, std::abs(v));
        if (running.error_estimate <= std::max(abs_tol, rel_tol * scale)) {
            converged = true;
            break;
        }
        if (static_cast<int>(work.size()) >= max_segments)
            break;

        const Segment<N> worst = work.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi))
            break; // panel cannot be split further in double precision
        work.pop();
        const auto left = gk15_segment<N>(f, worst.lo, mid);
        const auto right = gk15_segment<N>(f, mid, worst.hi);
        for (std::size_t k = 0; k < N; ++k)
            running.value[k] += left.integral[k] + right.integral[k] - worst.integral[k];
        running.error_estimate += left.error + right.error - worst.error;
        work.push(left);
        work.push(right);
    }

    // Re-sum from the panels so the result carries no drift from the running updates.
    Result<N> out = totals();
    out.converged = converged;
    return out;
}

} // namespace dkp_h3::quadrature
