#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <dkp_h3/modes.hpp>
#include <dkp_h3/operators.hpp>

using namespace dkp_h3;

namespace {

// f(r) = sum_k c_k r^k exp(-alpha r), with exact first three derivatives.
struct Profile {
    std::array<double, 4> c{};
    double alpha = 1.0;

    [[nodiscard]] std::array<double, 4> jet(double r) const {
        // p = polynomial, e = exp(-alpha r); f = p e
        double p = 0, p1 = 0, p2 = 0, p3 = 0;
        for (int k = 0; k < 4; ++k) {
            p += c[k] * std::pow(r, k);
            if (k >= 1)
                p1 += k * c[k] * std::pow(r, k - 1);
            if (k >= 2)
                p2 += k * (k - 1) * c[k] * std::pow(r, k - 2);
            if (k >= 3)
                p3 += k * (k - 1) * (k - 2) * c[k] * std::pow(r, k - 3);
        }
        const double a = alpha;
        const double e = std::exp(-a * r);
        return {p * e, (p1 - a * p) * e, (p2 - 2 * a * p1 + a * a * p) * e,
                (p3 - 3 * a * p2 + 3 * a * a * p1 - a * a * a * p) * e};
    }
};

std::vector<Profile> random_profiles(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uc(-2.0, 2.0), ua(0.2, 1.5);
    std::vector<Profile> out(n);
    for (auto &p : out) {
        for (auto &c : p.c)
            c = uc(rng);
        p.alpha = ua(rng);
    }
    return out;
}

constexpr double g = ladder_gamma;

} // namespace

TEST_CASE("ladder operators on a sampled value", "[operators]") {
    const double r = 1.3;
    const cplx v = 2.0, d = -0.5;
    CHECK(operators::ladder(LadderKind::a, 2, r, v, d) == g * (d + 2.0 / r * v));
    CHECK(operators::ladder(LadderKind::a_plus, 2, r, v, d) == g * (d + 3.0 / r * v));
    CHECK(operators::ladder(LadderKind::a_minus, 2, r, v, d) == g * (d + 1.0 / r * v));
    CHECK(operators::ladder(LadderKind::b, 2, r, v, d) == g * (-d + 2.0 / r * v));
    CHECK(operators::ladder(LadderKind::b_plus, 2, r, v, d) == g * (-d + 3.0 / r * v));
    CHECK(operators::ladder(LadderKind::b_minus, 2, r, v, d) == g * (-d + 1.0 / r * v));
}

TEST_CASE("b_- a = a_+ b = Delta on random smooth profiles", "[operators]") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ur(0.3, 4.0);
    std::uniform_int_distribution<int> um(-3, 3);
    for (const auto &prof : random_profiles(20, 32)) {
        const double r = ur(rng);
        const int m = um(rng);
        const auto f = prof.jet(r);
        // (a f) and its derivative, by hand
        const double af = g * (f[1] + m / r * f[0]);
        const double daf = g * (f[2] + m / r * f[1] - m / (r * r) * f[0]);
        const double bf = g * (-f[1] + m / r * f[0]);
        const double dbf = g * (-f[2] + m / r * f[1] - m / (r * r) * f[0]);
        const cplx lhs1 = operators::ladder(LadderKind::b_minus, m, r, af, daf);
        const cplx lhs2 = operators::ladder(LadderKind::a_plus, m, r, bf, dbf);
        const cplx rhs = operators::delta(m, r, f[0], f[1], f[2]);
        const double scale = std::abs(f[2]) + std::abs(f[1] / r) + std::abs(m * m * f[0] / (r * r)) + 1e-300;
        CHECK(std::abs(lhs1 - rhs) <= 1e-7 * scale);
        CHECK(std::abs(lhs2 - rhs) <= 1e-7 * scale);

        // Same composition through generic finite-difference profiles.
        auto fa = RadialProfile::from_function(m, [&prof, m](double x) {
            const auto j = prof.jet(x);
            return cplx(g * (j[1] + m / x * j[0]));
        });
        const cplx via_fd = operators::ladder(LadderKind::b_minus, m, r, fa(r).value, fa(r).d1);
        CHECK(std::abs(via_fd - rhs) <= 1e-7 * scale);
    }
}

TEST_CASE("2 Delta J_m(sqrt(lambda) r) = lambda J_m", "[operators]") {
    for (int m = 0; m <= 3; ++m)
        for (double lambda : {0.5, 1.0, 2.0})
            for (double r : {0.5, 1.1, 2.3, 4.0}) {
                const auto prof = modes::radial_profile(m, lambda, RadialKind::J);
                const cplx lhs = 2.0 * operators::delta_apply(prof, r);
                const cplx rhs = lambda * prof(r).value;
                CHECK(std::abs(lhs - rhs) <= 1e-7);

                // independent: second derivative by differences of the value only
                auto fd = RadialProfile::from_function(
                    m, [k = std::sqrt(lambda), m](double x) { return specfun::bessel_j(m, k * x).value; });
                CHECK(std::abs(2.0 * operators::delta_apply(fd, r) - rhs) <= 1e-7);
            }
}

TEST_CASE("ladder operators shift Bessel orders", "[operators]") {
    for (int m = -2; m <= 3; ++m)
        for (double lambda : {0.5, 2.0})
            for (double r : {0.7, 1.9}) {
                const double k = std::sqrt(lambda);
                auto J = [&](int n) { return specfun::bessel_j(n, k * r).value; };
                const auto jm = modes::radial_profile(m, lambda, RadialKind::J);
                CHECK(std::abs(operators::ladder_apply(LadderKind::a, jm, r) - g * k * J(m - 1)) <= 1e-12);
                CHECK(std::abs(operators::ladder_apply(LadderKind::b, jm, r) - g * k * J(m + 1)) <= 1e-12);
                const auto jlow = modes::radial_profile(m, lambda, RadialKind::J, -1);
                CHECK(std::abs(operators::ladder_apply(LadderKind::b_minus, jlow, r) - g * k * J(m)) <= 1e-12);
                const auto jhigh = modes::radial_profile(m, lambda, RadialKind::J, 1);
                CHECK(std::abs(operators::ladder_apply(LadderKind::a_plus, jhigh, r) - g * k * J(m)) <= 1e-12);
            }
}

TEST_CASE("ladder operators reject r <= 0", "[operators]") {
    const auto p = modes::radial_profile(1, 1.0, RadialKind::J);
    CHECK_THROWS_AS(operators::ladder_apply(LadderKind::a, p, 0.0), std::domain_error);
    CHECK_THROWS_AS(operators::delta_apply(p, -1.0), std::domain_error);
}

TEST_CASE("helicity operator has sigma modes as eigenvectors", "[operators]") {
    QuantumNumbers qn{std::sqrt(2.0), 1, cplx(0.0, 1.0), 1.0, 1.0};
    const auto mode = modes::build_mode_sigma(qn);
    for (double r : {0.8, 1.6, 2.5})
        for (double z : {-0.7, 0.0, 0.6}) {
            const FieldPoint p(r, z);
            const auto psi = mode(r, z);
            const auto s1 = operators::helicity_apply(mode.evaluator, qn.m, p, 1e-3, StencilOrder::fourth);
            CHECK(s1.phi0() == cplx(0.0));
            for (std::size_t i = 1; i < 10; ++i)
                CHECK(std::abs(s1[i] - qn.sigma * psi[i]) <= 1e-8 * std::max(1.0, std::abs(psi[i])));
        }
}

TEST_CASE("helicity operator annihilates a pure Phi0 field", "[operators]") {
    FieldFunction f = [](double r, double z) {
        TenComponent t;
        t.phi0() = std::exp(-r * r - z * z);
        return t;
    };
    const auto s = operators::helicity_apply(f, 2, FieldPoint(1.0, 0.3), 1e-3);
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(s[i] == cplx(0.0));
}
