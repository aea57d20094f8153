#include "lz/minkmodel/contour.hpp"
#include "lz/minkmodel/power.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using namespace lz;

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

TEST(BranchedPower, BoundaryValuesFromAbove) {
    const auto P = BranchedPower::principal();
    const double alpha = 0.7;
    for (double w : {2.0, -2.0}) {
        const cplx limit = std::pow(std::abs(w), -alpha) * (w < 0 ? std::exp(kI * kPi * alpha) : cplx(1.0));
        EXPECT_LT(rel(P(cplx(w, -1e-9), -alpha), limit), 1e-8);
    }
    const auto U = BranchedPower::cut_up();
    EXPECT_NEAR(U.arg(cplx(-1.0, 1e-3)), -kPi - 1e-3, 1e-6);
    EXPECT_NEAR(U.arg(cplx(1.0, -1.0)), -kPi / 4, 1e-15);
}

TEST(ClosedForms, GatePasses) {
    const auto& r = ClosedFormGate::report();
    EXPECT_TRUE(r.passed) << r.detail;
}

TEST(EuclidPower, DirectAndClosedAgree) {
    auto d = euclid_power_integral_direct(4, 3.0, -1.0);
    EXPECT_LT(rel(d.value, euclid_power_integral(4, 3.0, -1.0)), 1e-8);
    EXPECT_NEAR(std::abs(euclid_power_integral(4, 3.0, -1.0) - kPi * kPi / 2.0), 0.0, 1e-12);
    EXPECT_THROW(euclid_power_integral(4, 1.0, kI), PoleError);
}

TEST(EuclidPower, ResiduesMatchGammaFormula) {
    for (int k : {1, 2})
        for (cplx z : {kI, cplx(-1.0, 0.5)}) {
            const cplx num = circle_integral([&](cplx a) { return euclid_power_integral(4, a, z); }, double(k), 0.05);
            EXPECT_LT(rel(num, euclid_residue(4, k, z)), 1e-6) << k << " " << z;
            const cplx lnum = circle_integral([&](cplx a) { return lorentz_power_integral(4, a, z); }, double(k), 0.05);
            EXPECT_LT(std::abs(lnum / num - kI), 1e-6);
        }
    EXPECT_LT(rel(euclid_residue(4, 1, kI), kI * kPi * kPi), 1e-15);
}

TEST(LorentzPower, RegulatedQuadratureMatchesClosedForm) {
    auto d = lorentz_power_integral_direct(4, 3.5, cplx(0.0, 2.0));
    const cplx c = lorentz_power_integral(4, 3.5, cplx(0.0, 2.0));
    EXPECT_LT(rel(d.value, c), 1e-5);
    EXPECT_NEAR(c.real(), -0.65797363, 1e-7);
    EXPECT_NEAR(c.imag(), -0.65797363, 1e-7);
    // boundary-value continuity at z = -1 + i eps
    const cplx a = lorentz_power_integral(4, 3.5, cplx(-1.0, 1e-3));
    const cplx b = lorentz_power_integral(4, 3.5, cplx(-1.0, 1e-6));
    EXPECT_LE(std::abs(a - b), 1e-2 * std::abs(b));
}

// Closed form against quadrature on a grid with Re alpha > n/2 + 1.
TEST(ModelProperty, ClosedFormsOnGrid) {
    const double alphas[] = {3.2, 3.7, 4.5, 5.1};
    const cplx zs[] = {cplx(0.0, 1.0), cplx(-1.0, 0.5), cplx(2.0, 1.0), cplx(0.5, 3.0), cplx(-2.0, 0.2)};
    for (double a : alphas)
        for (cplx z : zs) {
            auto e = euclid_power_integral_direct(4, a, z);
            EXPECT_LT(rel(e.value, euclid_power_integral(4, a, z)), 1e-5) << a << " " << z;
            {
                auto l = lorentz_power_integral_direct(4, a, z);
                EXPECT_LT(rel(l.value, lorentz_power_integral(4, a, z)), 1e-5) << a << " " << z;
            }
        }
}

TEST(FDiagonal, ResiduesAndHomogeneity) {
    const double n4 = std::pow(4 * kPi, -2.0);
    for (cplx z : {kI, cplx(-1.0, 0.5), cplx(0.0, 0.01)}) {
        const cplx r1 = circle_integral([&](cplx a) { return F_diagonal(4, a, z); }, 1.0, 0.05);
        EXPECT_LT(rel(r1, kI * n4), 1e-8);
        const cplx r0 = circle_integral([&](cplx a) { return F_diagonal(4, a, z); }, 0.0, 0.05);
        EXPECT_LT(rel(r0, F_residue(4, 1, z)), 1e-8);
        EXPECT_LT(rel(r0, -kI * n4 * (-z)), 1e-12);
    }
    const cplx a(2.3, 0.7), z(0.4, 1.3);
    const double lam = 2.0;
    const cplx lhs = F_diagonal(4, a, lam * lam * z);
    const cplx rhs = std::pow(lam, 4.0 - 2.0 * a - 2.0) * F_diagonal(4, a, z);
    EXPECT_LT(rel(lhs, rhs), 1e-9);
    EXPECT_LT(rel(F_diagonal_via_integral(4, a, z), F_diagonal(4, a, z)), 1e-12);
    EXPECT_THROW(F_diagonal(4, 1.0, kI), PoleError);
    EXPECT_THROW(F_diagonal(4, 0.5, 0.0), DomainError);
}

TEST(ModelProperty, NoPolesOffTheLattice) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int t = 0; t < 10; ++t) {
        const cplx c(U(rng), U(rng));
        if (std::abs(c.imag()) < 0.2 && std::abs(c.real() - std::round(c.real())) < 0.2) continue;
        const cplx r = circle_integral([&](cplx a) { return F_diagonal(4, a, kI); }, c, 0.1);
        EXPECT_LT(std::abs(r), 1e-8) << c;
    }
    for (int p : {2, 3}) {  // lattice points beyond n/2 - 1 are regular
        const cplx r = circle_integral([&](cplx a) { return F_diagonal(4, a, kI); }, double(p), 0.1);
        EXPECT_LT(std::abs(r), 1e-8);
    }
}

TEST(Contour, ResolventAndBranchedPowers) {
    ContourGamma g1(0.1);
    auto r = contour_power_scalar(1.0, 1.0, g1);
    EXPECT_LT(std::abs(r.value - 1.0 / cplx(1.0, -0.1)), 1e-8);
    EXPECT_LE(std::abs(r.value - 1.0 / cplx(1.0, -0.1)), r.error);

    ContourGamma g2(0.05);
    auto s = contour_power_scalar(-3.0, 1.7, g2);
    const cplx want = BranchedPower::principal()(cplx(-3.0, -0.05), -1.7);
    EXPECT_LT(std::abs(s.value - want), 1e-7);
    EXPECT_LE(std::abs(s.value - want), s.error);

    for (double w : {-2.0, 0.3, 4.0}) {
        const cplx a = contour_power_scalar(w, 0.6, g1).value;
        const cplx b = contour_power_scalar(w, 0.9, g1).value;
        const cplx c = contour_power_scalar(w, 1.5, g1).value;
        EXPECT_LT(std::abs(a * b - c), 1e-6);
    }
}

TEST(Contour, ErrorDecaysWithTruncation) {
    const double w = 0.5;
    const double alpha = 0.8;
    const cplx want = BranchedPower::principal()(cplx(w, -0.1), -alpha);
    double last = 1e300;
    for (double R : {1e2, 1e4, 1e6, 1e8, 1e10}) {
        ContourGamma g(0.1, kPi / 4, R);
        auto r = contour_power_scalar(w, alpha, g);
        const double err = std::abs(r.value - want);
        EXPECT_LT(err, last);
        EXPECT_LE(err, r.error);
        last = err;
    }
}

TEST(ContourProperty, GridErrorBoundHolds) {
    ContourGamma g(0.1);
    const auto P = BranchedPower::principal();
    for (double w : {-3.0, -1.0, 0.2, 1.0, 5.0})
        for (double a : {0.5, 1.0, 1.7, 2.5, 3.3}) {
            auto r = contour_power_scalar(w, a, g);
            const double err = std::abs(r.value - P(cplx(w, -0.1), -a));
            EXPECT_LT(err, 1e-7) << w << " " << a;
            EXPECT_LE(err, r.error) << w << " " << a;
        }
}

} // namespace
