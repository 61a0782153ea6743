#pragma once

// Horospherical coordinates (t, r, phi, z) on R x H3 with unit curvature radius:
//     dS^2 = dt^2 - exp(-2z) (dr^2 + r^2 dphi^2) - dz^2
// Closed-form metric, tetrad, Christoffel symbols, tetrad covariant
// derivatives and Ricci rotation coefficients, plus a finite-difference route
// to the same tables used as an independent check.

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dkp_h3 {

/// Coordinate indices. The metric depends on r and z only.
enum Coord : int { T = 0, R = 1, PHI = 2, Z = 3 };

struct FieldPoint {
    double r = 1.0;
    double z = 0.0;

    FieldPoint() = default;
    FieldPoint(double r_, double z_) : r(r_), z(z_) {
        if (!(r_ > 0.0))
            throw std::domain_error("FieldPoint: r must be > 0, got " + std::to_string(r_));
    }
};

struct MetricTensor {
    std::array<double, 4> diag{}; // g_tt, g_rr, g_phiphi, g_zz

    [[nodiscard]] double operator[](int i) const { return diag[i]; }
};

using Matrix4 = std::array<std::array<double, 4>, 4>;

/// Gamma^i_{jk}, index order [i][j][k], all four coordinates (t-components vanish).
struct ChristoffelTable {
    std::array<Matrix4, 4> g{};

    [[nodiscard]] double operator()(int i, int j, int k) const { return g[i][j][k]; }
    double &operator()(int i, int j, int k) { return g[i][j][k]; }
};

/// gamma_{abc}, tetrad indices, order [a][b][c].
struct RicciTable {
    std::array<Matrix4, 4> g{};

    [[nodiscard]] double operator()(int a, int b, int c) const { return g[a][b][c]; }
    double &operator()(int a, int b, int c) { return g[a][b][c]; }
};

namespace geometry {

inline MetricTensor metric_at(const FieldPoint &p) {
    const double e2 = std::exp(-2.0 * p.z);
    return {{1.0, -e2, -p.r * p.r * e2, -1.0}};
}

/// e_{(a)}^beta: diagonal, row a.
inline std::array<double, 4> tetrad_upper(const FieldPoint &p) {
    const double ez = std::exp(p.z);
    return {1.0, ez, ez / p.r, 1.0};
}

/// e_{(a) beta}: diagonal, row a.
inline std::array<double, 4> tetrad_lower(const FieldPoint &p) {
    const double emz = std::exp(-p.z);
    return {1.0, -emz, -p.r * emz, -1.0};
}

inline ChristoffelTable christoffel_at(const FieldPoint &p) {
    const double r = p.r;
    const double e2 = std::exp(-2.0 * p.z);
    ChristoffelTable G;
    G(R, R, Z) = G(R, Z, R) = -1.0;
    G(R, PHI, PHI) = -r;
    G(PHI, R, PHI) = G(PHI, PHI, R) = 1.0 / r;
    G(PHI, PHI, Z) = G(PHI, Z, PHI) = -1.0;
    G(Z, R, R) = e2;
    G(Z, PHI, PHI) = r * r * e2;
    return G;
}

namespace detail {

// Partial derivatives of a function of (r, z) along coordinate `dir`
// (t and phi derivatives vanish identically). Fourth-order central differences
// at steps h and h/2; if the two disagree beyond roundoff the Richardson
// combination (16 D(h/2) - D(h)) / 15 is returned.
template <class F>
auto partial(F &&f, const FieldPoint &p, int dir, double h) {
    using Value = decltype(f(p));
    if (dir == T || dir == PHI)
        return Value{};
    auto shifted = [&](double s) {
        return dir == R ? f(FieldPoint(p.r + s, p.z)) : f(FieldPoint(p.r, p.z + s));
    };
    auto d4 = [&](double step) {
        const auto fm2 = shifted(-2.0 * step), fm1 = shifted(-step);
        const auto fp1 = shifted(step), fp2 = shifted(2.0 * step);
        Value out{};
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = (fm2[i] - 8.0 * fm1[i] + 8.0 * fp1[i] - fp2[i]) / (12.0 * step);
        return out;
    };
    const Value coarse = d4(h);
    const Value fine = d4(0.5 * h);
    Value out = fine;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double tol = 1.0e-12 * std::max(1.0, std::abs(fine[i]));
        if (std::abs(fine[i] - coarse[i]) > tol)
            out[i] = (16.0 * fine[i] - coarse[i]) / 15.0;
    }
    return out;
}

} // namespace detail

/// Gamma^i_{jk} = g^{il} (-d_l g_jk + d_j g_lk + d_k g_lj) / 2 with the metric
/// derivatives taken numerically. Warnings about a step that is too small for
/// the coordinate scale (roundoff dominated) are appended to `warnings`.
inline ChristoffelTable christoffel_numeric(const FieldPoint &p, double h,
                                            std::vector<std::string> *warnings = nullptr) {
    if (!(h > 0.0))
        throw std::invalid_argument("christoffel_numeric: step must be > 0");
    if (!(p.r - 2.0 * h > 0.0))
        throw std::domain_error("christoffel_numeric: stencil crosses r = 0");
    if (warnings != nullptr) {
        const double scale = std::max({1.0, std::abs(p.r), std::abs(p.z)});
        // Roundoff in a difference quotient grows like eps / h.
        if (std::numeric_limits<double>::epsilon() * scale / h > 1.0e-9)
            warnings->push_back("christoffel_numeric: step " + std::to_string(h) +
                                " is roundoff dominated at this point");
    }

    auto metric = [](const FieldPoint &q) { return metric_at(q).diag; };
    std::array<std::array<double, 4>, 4> dg{}; // dg[l][j] = d_l g_jj
    for (int l = 0; l < 4; ++l)
        dg[l] = detail::partial(metric, p, l, h);

    const auto g = metric_at(p);
    ChristoffelTable G;
    for (int i = 0; i < 4; ++i) {
        const double ginv = 1.0 / g[i];
        for (int j = 0; j < 4; ++j) {
            for (int k = 0; k < 4; ++k) {
                // Diagonal metric: only l = i contributes.
                const double d_l_gjk = (j == k) ? dg[i][j] : 0.0;
                const double d_j_glk = (i == k) ? dg[j][i] : 0.0;
                const double d_k_glj = (i == j) ? dg[k][i] : 0.0;
                G(i, j, k) = 0.5 * ginv * (-d_l_gjk + d_j_glk + d_k_glj);
            }
        }
    }
    return G;
}

/// e_{(a) beta ; alpha} as a matrix indexed [beta][alpha].
inline Matrix4 tetrad_covariant_derivative(int a, const FieldPoint &p) {
    if (a < 0 || a > 3)
        throw std::out_of_range("tetrad_covariant_derivative: tetrad index must be 0..3");
    const double r = p.r;
    const double emz = std::exp(-p.z);
    Matrix4 m{};
    switch (a) {
    case 1:
        m[PHI][PHI] = -r * emz;
        m[Z][R] = -emz;
        break;
    case 2:
        m[R][PHI] = emz;
        m[Z][PHI] = -r * emz;
        break;
    case 3: {
        const double e2 = std::exp(-2.0 * p.z);
        m[R][R] = e2;
        m[PHI][PHI] = r * r * e2;
        break;
    }
    default:
        break;
    }
    return m;
}

/// e_{(a) beta ; alpha} = d_alpha e_{(a) beta} - Gamma^sigma_{alpha beta} e_{(a) sigma},
/// from numeric derivatives of the lower tetrad and the numeric Christoffel table.
inline Matrix4 tetrad_covariant_derivative_numeric(int a, const FieldPoint &p, double h) {
    if (a < 0 || a > 3)
        throw std::out_of_range("tetrad_covariant_derivative_numeric: tetrad index must be 0..3");
    const auto G = christoffel_numeric(p, h);
    const auto lower = tetrad_lower(p);
    auto row = [a](const FieldPoint &q) {
        std::array<double, 4> e{};
        e[a] = tetrad_lower(q)[a];
        return e;
    };
    Matrix4 m{};
    for (int alpha = 0; alpha < 4; ++alpha) {
        const auto d = detail::partial(row, p, alpha, h);
        for (int beta = 0; beta < 4; ++beta)
            m[beta][alpha] = d[beta] - G(a, alpha, beta) * lower[a];
    }
    return m;
}

/// Closed form: gamma_311 = -1, gamma_232 = 1, gamma_122 = e^z / r and the
/// (a,b)-antisymmetric partners; everything else zero.
inline RicciTable ricci_rotation(const FieldPoint &p) {
    RicciTable g;
    const double c = std::exp(p.z) / p.r;
    g(3, 1, 1) = -1.0;
    g(1, 3, 1) = 1.0;
    g(2, 3, 2) = 1.0;
    g(3, 2, 2) = -1.0;
    g(1, 2, 2) = c;
    g(2, 1, 2) = -c;
    return g;
}

/// gamma_{abc} = e_{(a)}^beta e_{(b) beta; alpha} e_{(c)}^alpha for a given set
/// of tetrad covariant derivative matrices.
inline RicciTable ricci_contract(const FieldPoint &p, const std::array<Matrix4, 4> &cov) {
    const auto up = tetrad_upper(p);
    RicciTable g;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                g(a, b, c) = up[a] * cov[b][a][c] * up[c];
    return g;
}

/// Contraction route using the closed-form tetrad covariant derivatives.
inline RicciTable ricci_rotation_contracted(const FieldPoint &p) {
    std::array<Matrix4, 4> cov{};
    for (int b = 0; b < 4; ++b)
        cov[b] = tetrad_covariant_derivative(b, p);
    return ricci_contract(p, cov);
}

/// Contraction route with every derivative taken numerically.
inline RicciTable ricci_rotation_numeric(const FieldPoint &p, double h) {
    std::array<Matrix4, 4> cov{};
    for (int b = 0; b < 4; ++b)
        cov[b] = tetrad_covariant_derivative_numeric(b, p, h);
    return ricci_contract(p, cov);
}

template <class Table>
double max_abs_difference(const Table &x, const Table &y) {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                worst = std::max(worst, std::abs(x(i, j, k) - y(i, j, k)));
    return worst;
}

} // namespace geometry
} // namespace dkp_h3
