#include "lz/core/quadrature.hpp"
#include "lz/core/special.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using lz::cplx;
using lz::kPi;

TEST(Gamma, RealAxisMatchesStd) {
    for (double x : {0.1, 0.5, 1.0, 1.5, 2.5, 7.3, 20.0, -0.5, -1.5, -3.7}) {
        const double ref = std::tgamma(x);
        EXPECT_NEAR(lz::gamma(x).real(), ref, 1e-13 * std::abs(ref)) << x;
        EXPECT_NEAR(lz::gamma(x).imag(), 0.0, 1e-13 * std::abs(ref));
    }
}

TEST(Gamma, ImaginaryAxisModulus) {
    for (double y : {0.3, 1.0, 2.5, 6.0}) {
        const double g2 = std::norm(lz::gamma(cplx(0.0, y)));
        EXPECT_NEAR(g2, kPi / (y * std::sinh(kPi * y)), 1e-13 * g2);
        const double h2 = std::norm(lz::gamma(cplx(0.5, y)));
        EXPECT_NEAR(h2, kPi / std::cosh(kPi * y), 1e-13 * h2);
    }
}

TEST(Gamma, PolesAndReciprocal) {
    EXPECT_THROW(lz::gamma(0.0), lz::PoleError);
    EXPECT_THROW(lz::gamma(-3.0), lz::PoleError);
    EXPECT_EQ(lz::rgamma(-2.0), cplx(0.0));
    const cplx z(0.3, -1.2);
    EXPECT_NEAR(std::abs(lz::rgamma(z) * lz::gamma(z) - 1.0), 0.0, 1e-14);
    // (s)_p = Gamma(s+p)/Gamma(s)
    EXPECT_NEAR(std::abs(lz::pochhammer(z, 4) - lz::gamma(z + 4.0) / lz::gamma(z)), 0.0,
                1e-12 * std::abs(lz::pochhammer(z, 4)));
}

TEST(Zeta, KnownValues) {
    EXPECT_NEAR(lz::riemann_zeta(2.0).real(), kPi * kPi / 6.0, 1e-14);
    EXPECT_NEAR(lz::riemann_zeta(4.0).real(), std::pow(kPi, 4) / 90.0, 1e-14);
    EXPECT_NEAR(std::abs(lz::riemann_zeta(-2.0)), 0.0, 1e-12);
    EXPECT_NEAR(lz::riemann_zeta(0.0).real(), -0.5, 1e-14);
    EXPECT_NEAR(lz::riemann_zeta(-1.0).real(), -1.0 / 12.0, 1e-14);
    EXPECT_NEAR(lz::riemann_zeta(0.5).real(), -1.4603545088095868, 1e-13);
    EXPECT_THROW(lz::riemann_zeta(1.0), lz::PoleError);
    // zeta(s, a) - zeta(s, a + 1) = a^{-s}
    const cplx s(0.7, 3.0);
    EXPECT_NEAR(std::abs(lz::hurwitz_zeta(s, 2.5) - lz::hurwitz_zeta(s, 3.5) - std::pow(2.5, -s)),
                0.0, 1e-13);
}

TEST(UpperGamma, MatchesQuadrature) {
    for (double a : {0.5, 1.7, -0.3}) {
        for (double x : {0.5, 2.0, 10.0}) {
            lz::QuadOptions opt;
            opt.abs_tol = 0.0;
            opt.rel_tol = 1e-14;
            auto r = lz::integrate_to_infinity(
                [&](double t) { return std::pow(t, a - 1.0) * std::exp(-t); }, x, opt);
            const double v = lz::upper_gamma(a, x).real();
            EXPECT_NEAR(v, r.value, 1e-11 * std::abs(r.value)) << a << " " << x;
        }
    }
    EXPECT_NEAR(lz::upper_gamma(1.0, 3.0).real(), std::exp(-3.0), 1e-15);
}

TEST(Epstein, MatchesDirectLatticeSum) {
    // sigma = 3: sum over nonzero k of |k|^{-6}, truncated box plus an
    // integral estimate of the remainder.
    const int B = 60;
    double direct = 0.0;
    for (int i = -B; i <= B; ++i)
        for (int j = -B; j <= B; ++j)
            for (int k = -B; k <= B; ++k) {
                const int q = i * i + j * j + k * k;
                if (q) direct += std::pow(q, -3.0);
            }
    const double tail = 4.0 * kPi / (3.0 * std::pow(B + 0.5, 3));
    EXPECT_NEAR(lz::epstein_z3(3.0).real(), 8.40192397482754, 1e-9);
    EXPECT_NEAR(lz::epstein_z3(3.0).real(), direct, 2.0 * tail);
    EXPECT_NEAR(lz::epstein_z3(0.0).real(), -1.0, 1e-12);
    EXPECT_THROW(lz::epstein_z3(1.5), lz::PoleError);
}

} // namespace
