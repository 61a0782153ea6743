#pragma once

// Bessel-family special functions used by the radial and axial mode profiles.
//
// Real order J, Y, I, K follow the Temme / Steed scheme: continued fraction CF1
// for the ratio f'/f at the requested order, downward recurrence to a reduced
// order mu in [-1/2, 1/2], then either Temme's series (x < 2) or Steed's complex
// continued fraction CF2 (x >= 2) for the second solution, and finally the
// Wronskian to fix the normalisation. Negative orders go through the standard
// reflection formulas.
//
// The imaginary-order Macdonald function K_{i kappa}(x) is evaluated from
//     K_{i kappa}(x) = int_0^inf exp(-x cosh t) cos(kappa t) dt.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "errors.hpp"
#include "quadrature.hpp"

namespace dkp_h3 {

struct SpecialFunctionValue {
    std::complex<double> value;
    std::complex<double> derivative; // d/dx
};

namespace specfun {

namespace detail {

inline constexpr double eps = 1.0e-16;
inline constexpr double fpmin = 1.0e-300;
inline constexpr int max_iterations = 100000;
inline constexpr double series_crossover = 2.0;

struct Pair {
    double first = 0.0;        // J or I
    double first_deriv = 0.0;
    double second = 0.0;       // Y or K
    double second_deriv = 0.0;
};

// gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2
struct TemmeGammas {
    double gam1, gam2, gampl, gammi;
};

inline TemmeGammas temme_gammas(double mu) {
    TemmeGammas g{};
    g.gampl = 1.0 / std::tgamma(1.0 + mu);
    g.gammi = 1.0 / std::tgamma(1.0 - mu);
    g.gam2 = 0.5 * (g.gammi + g.gampl);
    if (std::abs(mu) < 1.0e-7) {
        g.gam1 = -std::numbers::egamma;
    } else {
        const double log_ratio = std::lgamma(1.0 + mu) - std::lgamma(1.0 - mu);
        g.gam1 = g.gampl * std::expm1(log_ratio) / (2.0 * mu);
    }
    return g;
}

inline bool is_integer(double nu) { return nu == std::nearbyint(nu); }

// sin(pi x) and cos(pi x) exact at integers and half-integers.
inline double sin_pi(double x) {
    const double r = std::remainder(x, 2.0);
    if (r == 0.0 || std::abs(r) == 1.0)
        return 0.0;
    if (r == 0.5)
        return 1.0;
    if (r == -0.5)
        return -1.0;
    return std::sin(std::numbers::pi * r);
}

inline double cos_pi(double x) { return sin_pi(x + 0.5); }

/// J_nu, J'_nu, Y_nu, Y'_nu for nu >= 0, x > 0.
inline Pair bessel_jy(double nu, double x) {
    constexpr double pi = std::numbers::pi;
    const int nl = (x < series_crossover) ? static_cast<int>(nu + 0.5)
                                          : std::max(0, static_cast<int>(nu - x + 1.5));
    const double mu = nu - nl;
    const double mu2 = mu * mu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    const double w = xi2 / pi;

    // CF1: J'_nu / J_nu by the modified Lentz method.
    int isign = 1;
    double h = nu * xi;
    if (h < fpmin)
        h = fpmin;
    double b = xi2 * nu;
    double d = 0.0;
    double c = h;
    int i = 1;
    for (; i <= max_iterations; ++i) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < fpmin)
            d = fpmin;
        c = b - 1.0 / c;
        if (std::abs(c) < fpmin)
            c = fpmin;
        d = 1.0 / d;
        const double del = c * d;
        h *= del;
        if (d < 0.0)
            isign = -isign;
        if (std::abs(del - 1.0) < eps)
            break;
    }
    if (i > max_iterations)
        throw AccuracyLossError("bessel_jy: CF1 did not converge (argument too large)", 1.0);

    // Downward recurrence from nu to mu on unnormalised values.
    double rjl = isign * 1.0e-30;
    double rjpl = h * rjl;
    const double rjl1 = rjl;
    const double rjp1 = rjpl;
    double fact = nu * xi;
    for (int l = nl; l >= 1; --l) {
        const double rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if (rjl == 0.0)
        rjl = eps;
    const double f = rjpl / rjl;

    double rjmu = 0.0;
    double rymu = 0.0;
    double rymup = 0.0;
    double ry1 = 0.0;
    if (x < series_crossover) {
        // Temme's series for Y_mu, Y_{mu+1}.
        const double x2 = 0.5 * x;
        const double pimu = pi * mu;
        const double fct = (std::abs(pimu) < eps) ? 1.0 : pimu / std::sin(pimu);
        double dd = -std::log(x2);
        double e = mu * dd;
        const double fct2 = (std::abs(e) < eps) ? 1.0 : std::sinh(e) / e;
        const auto g = temme_gammas(mu);
        double ff = 2.0 / pi * fct * (g.gam1 * std::cosh(e) + g.gam2 * fct2 * dd);
        e = std::exp(e);
        double p = e / (g.gampl * pi);
        double q = 1.0 / (e * pi * g.gammi);
        const double pimu2 = 0.5 * pimu;
        const double fct3 = (std::abs(pimu2) < eps) ? 1.0 : std::sin(pimu2) / pimu2;
        const double r = pi * pimu2 * fct3 * fct3;
        double cc = 1.0;
        dd = -x2 * x2;
        double sum = ff + r * q;
        double sum1 = p;
        int k = 1;
        for (; k <= max_iterations; ++k) {
            ff = (k * ff + p + q) / (k * k - mu2);
            cc *= dd / k;
            p /= (k - mu);
            q /= (k + mu);
            const double del = cc * (ff + r * q);
            sum += del;
            const double del1 = cc * p - k * del;
            sum1 += del1;
            if (std::abs(del) < (1.0 + std::abs(sum)) * eps)
                break;
        }
        if (k > max_iterations)
            throw AccuracyLossError("bessel_jy: Temme series did not converge", 1.0);
        rymu = -sum;
        ry1 = -sum1 * xi2;
        rymup = mu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        // Steed's CF2 for p + iq = (J'_mu + iY'_mu) / (J_mu + iY_mu).
        double a = 0.25 - mu2;
        double p = -0.5 * xi;
        double q = 1.0;
        const double br = 2.0 * x;
        double bi = 2.0;
        double fct = a * xi / (p * p + q * q);
        double cr = br + q * fct;
        double ci = bi + p * fct;
        double den = br * br + bi * bi;
        double dr = br / den;
        double di = -bi / den;
        double dlr = cr * dr - ci * di;
        double dli = cr * di + ci * dr;
        double temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        int k = 2;
        for (; k <= max_iterations; ++k) {
            a += 2 * (k - 1);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if (std::abs(dr) + std::abs(di) < fpmin)
                dr = fpmin;
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if (std::abs(cr) + std::abs(ci) < fpmin)
                cr = fpmin;
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (std::abs(dlr - 1.0) + std::abs(dli) < eps)
                break;
        }
        if (k > max_iterations)
            throw AccuracyLossError("bessel_jy: CF2 did not converge", 1.0);
        const double gam = (p - f) / q;
        rjmu = std::sqrt(w / ((p - f) * gam + q));
        rjmu = std::copysign(rjmu, rjl);
        rymu = rjmu * gam;
        rymup = rymu * (p + q / gam);
        ry1 = mu * xi * rymu - rymup;
    }

    const double scale = rjmu / rjl;
    Pair out;
    out.first = rjl1 * scale;
    out.first_deriv = rjp1 * scale;
    // Upward recurrence is stable for Y.
    for (int l = 1; l <= nl; ++l) {
        const double rytemp = (mu + l) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    out.second = rymu;
    out.second_deriv = nu * xi * rymu - ry1;
    return out;
}

/// I_nu, I'_nu, K_nu, K'_nu for nu >= 0, x > 0.
inline Pair bessel_ik(double nu, double x) {
    constexpr double pi = std::numbers::pi;
    const int nl = static_cast<int>(nu + 0.5);
    const double mu = nu - nl;
    const double mu2 = mu * mu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;

    double h = nu * xi;
    if (h < fpmin)
        h = fpmin;
    double b = xi2 * nu;
    double d = 0.0;
    double c = h;
    int i = 1;
    for (; i <= max_iterations; ++i) {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < eps)
            break;
    }
    if (i > max_iterations)
        throw AccuracyLossError("bessel_ik: CF1 did not converge (argument too large)", 1.0);

    double ril = 1.0e-30;
    double ripl = h * ril;
    const double ril1 = ril;
    const double rip1 = ripl;
    double fact = nu * xi;
    for (int l = nl; l >= 1; --l) {
        const double ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
    }
    const double f = ripl / ril;

    double rkmu = 0.0;
    double rk1 = 0.0;
    if (x < series_crossover) {
        const double x2 = 0.5 * x;
        const double pimu = pi * mu;
        const double fct = (std::abs(pimu) < eps) ? 1.0 : pimu / std::sin(pimu);
        double dd = -std::log(x2);
        double e = mu * dd;
        const double fct2 = (std::abs(e) < eps) ? 1.0 : std::sinh(e) / e;
        const auto g = temme_gammas(mu);
        double ff = fct * (g.gam1 * std::cosh(e) + g.gam2 * fct2 * dd);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / g.gampl;
        double q = 0.5 / (e * g.gammi);
        double cc = 1.0;
        dd = x2 * x2;
        double sum1 = p;
        int k = 1;
        for (; k <= max_iterations; ++k) {
            ff = (k * ff + p + q) / (k * k - mu2);
            cc *= dd / k;
            p /= (k - mu);
            q /= (k + mu);
            const double del = cc * ff;
            sum += del;
            const double del1 = cc * (p - k * ff);
            sum1 += del1;
            if (std::abs(del) < std::abs(sum) * eps)
                break;
        }
        if (k > max_iterations)
            throw AccuracyLossError("bessel_ik: Temme series did not converge", 1.0);
        rkmu = sum;
        rk1 = sum1 * xi2;
    } else {
        // Steed/Temme CF2 for K_mu, K_{mu+1}.
        b = 2.0 * (1.0 + x);
        d = 1.0 / b;
        double hh = d;
        double delh = d;
        double q1 = 0.0;
        double q2 = 1.0;
        const double a1 = 0.25 - mu2;
        double q = a1;
        double cc = a1;
        double a = -a1;
        double s = 1.0 + q * delh;
        int k = 2;
        for (; k <= max_iterations; ++k) {
            a -= 2 * (k - 1);
            cc = -a * cc / k;
            const double qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += cc * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            hh += delh;
            const double dels = q * delh;
            s += dels;
            if (std::abs(dels / s) < eps)
                break;
        }
        if (k > max_iterations)
            throw AccuracyLossError("bessel_ik: CF2 did not converge", 1.0);
        hh = a1 * hh;
        rkmu = std::sqrt(pi / (2.0 * x)) * std::exp(-x) / s;
        rk1 = rkmu * (mu + x + 0.5 - hh) * xi;
    }

    const double rkmup = mu * xi * rkmu - rk1;
    const double rimu = xi / (f * rkmu - rkmup);
    Pair out;
    out.first = (rimu * ril1) / ril;
    out.first_deriv = (rimu * rip1) / ril;
    for (int l = 1; l <= nl; ++l) {
        const double rktemp = (mu + l) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    out.second = rkmu;
    out.second_deriv = nu * xi * rkmu - rk1;
    return out;
}

// Value and derivative of x^nu-type behaviour at the origin for J and I.
inline SpecialFunctionValue regular_at_origin(double nu) {
    if (nu == 0.0)
        return {1.0, 0.0};
    if (nu == 1.0)
        return {0.0, 0.5};
    if (nu > 1.0)
        return {0.0, 0.0};
    if (nu > 0.0)
        return {0.0, std::numeric_limits<double>::infinity()};
    if (is_integer(nu)) {
        // J_{-n} = (-1)^n J_n, I_{-n} = I_n: handled by callers.
        return {0.0, 0.0};
    }
    return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

inline SpecialFunctionValue real_value(double v, double dv) { return {v, dv}; }

} // namespace detail

/// Bessel function of the first kind J_nu(x) and its derivative, x >= 0.
inline SpecialFunctionValue bessel_j(double nu, double x) {
    if (!(x >= 0.0))
        throw std::domain_error("bessel_j: argument must be >= 0, got " + std::to_string(x));
    if (nu < 0.0 && detail::is_integer(nu)) {
        const auto pos = bessel_j(-nu, x);
        const double s = (static_cast<long long>(-nu) % 2 == 0) ? 1.0 : -1.0;
        return {s * pos.value, s * pos.derivative};
    }
    if (x == 0.0)
        return detail::regular_at_origin(nu);
    if (nu >= 0.0) {
        const auto p = detail::bessel_jy(nu, x);
        return detail::real_value(p.first, p.first_deriv);
    }
    // J_{-v} = cos(v pi) J_v - sin(v pi) Y_v
    const double v = -nu;
    const auto p = detail::bessel_jy(v, x);
    const double c = detail::cos_pi(v);
    const double s = detail::sin_pi(v);
    return detail::real_value(c * p.first - s * p.second, c * p.first_deriv - s * p.second_deriv);
}

/// Bessel function of the second kind Y_nu(x) and its derivative, x > 0.
inline SpecialFunctionValue bessel_y(double nu, double x) {
    if (!(x > 0.0))
        throw std::domain_error("bessel_y: argument must be > 0, got " + std::to_string(x));
    if (nu < 0.0 && detail::is_integer(nu)) {
        const auto pos = bessel_y(-nu, x);
        const double s = (static_cast<long long>(-nu) % 2 == 0) ? 1.0 : -1.0;
        return {s * pos.value, s * pos.derivative};
    }
    if (nu >= 0.0) {
        const auto p = detail::bessel_jy(nu, x);
        return detail::real_value(p.second, p.second_deriv);
    }
    // Y_{-v} = sin(v pi) J_v + cos(v pi) Y_v
    const double v = -nu;
    const auto p = detail::bessel_jy(v, x);
    const double c = detail::cos_pi(v);
    const double s = detail::sin_pi(v);
    return detail::real_value(s * p.first + c * p.second, s * p.first_deriv + c * p.second_deriv);
}

/// Modified Bessel function I_nu(x) and its derivative, x >= 0.
inline SpecialFunctionValue bessel_i(double nu, double x) {
    if (!(x >= 0.0))
        throw std::domain_error("bessel_i: argument must be >= 0, got " + std::to_string(x));
    if (nu < 0.0 && detail::is_integer(nu))
        return bessel_i(-nu, x);
    if (x == 0.0)
        return detail::regular_at_origin(nu);
    if (nu >= 0.0) {
        const auto p = detail::bessel_ik(nu, x);
        return detail::real_value(p.first, p.first_deriv);
    }
    // I_{-v} = I_v + (2/pi) sin(v pi) K_v
    const double v = -nu;
    const auto p = detail::bessel_ik(v, x);
    const double s = 2.0 / std::numbers::pi * detail::sin_pi(v);
    return detail::real_value(p.first + s * p.second, p.first_deriv + s * p.second_deriv);
}

/// Macdonald function K_nu(x) (real order) and its derivative, x > 0.
inline SpecialFunctionValue bessel_k(double nu, double x) {
    if (!(x > 0.0))
        throw std::domain_error("bessel_k: argument must be > 0, got " + std::to_string(x));
    const auto p = detail::bessel_ik(std::abs(nu), x);
    return detail::real_value(p.second, p.second_deriv);
}

/// Controls for the imaginary-order quadrature.
struct MacdonaldOptions {
    double rel_tol = 1.0e-14;   // target for the adaptive rule
    double max_loss = 1.0e-10;  // achieved error (relative to the local envelope) that is still acceptable
};

/// Achieved-accuracy bookkeeping for K_{i kappa}; exposed for diagnostics.
struct MacdonaldEvaluation {
    SpecialFunctionValue result;
    double achieved_tolerance = 0.0; // absolute error bound / envelope
    int panels = 0;
};

/// Truncation point of the integral: exp(-x (cosh t - 1)) < 1e-18, so the
/// neglected tail is below 1e-18 relative to exp(-x).
inline double macdonald_cutoff(double x) {
    constexpr double log_tail = 41.446531673892822; // 18 ln 10
    return std::acosh(1.0 + log_tail / x);
}

/// K_{i kappa}(x) with full accuracy bookkeeping. Throws AccuracyLossError
/// when the achieved tolerance exceeds `opts.max_loss`.
inline MacdonaldEvaluation macdonald_imag_order_eval(double kappa, double x,
                                                     const MacdonaldOptions &opts = {}) {
    if (!(kappa >= 0.0))
        throw std::domain_error("macdonald_imag_order: kappa must be >= 0");
    if (!(x > 0.0))
        throw std::domain_error("macdonald_imag_order: argument must be > 0");

    const double t_max = macdonald_cutoff(x);
    // Integrand scaled by exp(x): exp(-x (cosh t - 1)) = exp(-2 x sinh^2(t/2)).
    auto integrand = [kappa, x](double t) {
        const double sh = std::sinh(0.5 * t);
        const double envelope = std::exp(-2.0 * x * sh * sh);
        const double c = std::cos(kappa * t);
        return std::array<double, 2>{envelope * c, -std::cosh(t) * envelope * c};
    };
    const int panels = 4 + static_cast<int>(std::ceil(kappa * t_max / std::numbers::pi));
    const auto res = quadrature::integrate<2>(integrand, 0.0, t_max, 0.0, opts.rel_tol, panels);

    const double scale = std::exp(-x);
    const double value = res.value[0] * scale;
    const double deriv = res.value[1] * scale;

    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() *
                            std::max(res.abs_value[0], x * res.abs_value[1]);
    const double abs_err = res.error_estimate + roundoff;
    const double envelope = std::hypot(res.value[0], x * res.value[1]);
    const double achieved = envelope > 0.0 ? abs_err / envelope : std::numeric_limits<double>::infinity();

    MacdonaldEvaluation out{{value, deriv}, achieved, res.segments};
    if (!res.converged || achieved > opts.max_loss) {
        throw AccuracyLossError("macdonald_imag_order: accuracy lost for kappa=" + std::to_string(kappa) +
                                    ", x=" + std::to_string(x) +
                                    " (achieved relative tolerance " + std::to_string(achieved) + ")",
                                achieved);
    }
    return out;
}

/// Macdonald function of imaginary order K_{i kappa}(x) (real valued) and its derivative.
inline SpecialFunctionValue macdonald_imag_order(double kappa, double x,
                                                 const MacdonaldOptions &opts = {}) {
    return macdonald_imag_order_eval(kappa, x, opts).result;
}

} // namespace specfun
} // namespace dkp_h3
