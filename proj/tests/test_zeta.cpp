#include "lz/geometry/benchmarks.hpp"
#include "lz/zeta/density.hpp"
#include "lz/zeta/spectral_action.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using namespace lz;
namespace bm = lz::benchmarks;

cplx circle_mean(const std::function<cplx(cplx)>& f, cplx c, double r, int m = 64) {
    cplx s = 0.0;
    for (int j = 0; j < m; ++j) s += f(c + std::polar(r, 2 * kPi * (j + 0.5) / m));
    return s / static_cast<double>(m);
}

TEST(SeriesCoefficient, BothFormsAgree) {
    const cplx a(1.4, 0.2);
    EXPECT_LT(std::abs(series_coefficient(a, 0) - rgamma(a)), 1e-15);
    EXPECT_LT(std::abs(series_coefficient(a, 3) - series_coefficient_ratio(a, 3)), 1e-12);
    // stable form survives where Gamma(1 - alpha) has a pole
    EXPECT_LT(std::abs(series_coefficient(2.0, 4) - 1.0), 1e-14);
    EXPECT_THROW(series_coefficient_ratio(2.0, 4), PoleError);
}

TEST(SeriesCoefficientProperty, EqualsReciprocalGamma) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int t = 0; t < 50; ++t) {
        const cplx a(U(rng), U(rng));
        double lo = 1e300, hi = -1e300;
        for (int m = 0; m <= 8; ++m) {
            const cplx c = series_coefficient(a, m);
            EXPECT_LT(std::abs(c - rgamma(a)), 1e-11 * std::max(1.0, std::abs(rgamma(a)))) << a << " m=" << m;
            lo = std::min(lo, std::abs(c));
            hi = std::max(hi, std::abs(c));
        }
        EXPECT_LE(hi - lo, 1e-11 * std::max(1.0, hi));
    }
}

TEST(ZetaDensity, MinkowskiKeepsOnlyTheLeadingTerm) {
    MeromorphicDensity d(4, {0, 0, 0, 0}, 0.1, {1.0, 0.0, 0.0});
    const cplx a(2.7, 0.4);
    const auto v = d.evaluate(a);
    EXPECT_LT(std::abs(v.value - rgamma(a) * F_diagonal(4, a - 1.0, cplx(0.0, 0.1))), 1e-15);
    EXPECT_EQ(v.terms[1], cplx(0.0));
    EXPECT_EQ(v.terms[2], cplx(0.0));
}

TEST(ZetaDensity, PoleSetAndHolomorphy) {
    auto b = bm::lorentzian_suite()[0];  // Einstein static universe
    const auto h = transport_solve(b.metric, b.point, 2);
    MeromorphicDensity d = MeromorphicDensity::from_hadamard(h, 4, 0.1);
    EXPECT_EQ(d.pole_locations(), (std::vector<double>{2.0, 1.0}));
    auto f = [&](cplx a) { return d.evaluate(a).value; };
    for (double p : {2.0, 1.0}) EXPECT_GT(std::abs(circle_integral(f, p, 0.05)), 1e-4);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> U(-2.5, 3.5), V(-1.0, 1.0);
    int tested = 0;
    while (tested < 10) {
        const cplx c(U(rng), V(rng));
        if (std::abs(c.imag()) < 0.2 && std::abs(c.real() - std::round(c.real())) < 0.2) continue;
        ++tested;
        EXPECT_LT(std::abs(circle_integral(f, c, 0.05)), 1e-8) << c;
        EXPECT_LT(std::abs(circle_mean(f, c, 0.05) - f(c)), 1e-7 * std::max(1.0, std::abs(f(c)))) << c;
    }
    // 1/Gamma(alpha) removes the lattice points alpha = 0, -1
    for (double p : {0.0, -1.0}) EXPECT_LT(std::abs(circle_integral(f, p, 0.05)), 1e-8);
}

TEST(ZetaResidue, AnalyticAndNumericPathsAgree) {
    for (const auto& b : bm::lorentzian_suite()) {
        const auto h = transport_solve(b.metric, b.point, 1);
        for (double eps : {0.1, 1e-3}) {
            MeromorphicDensity d = MeromorphicDensity::from_hadamard(h, 4, eps);
            for (double a0 : {2.0, 1.0}) {
                const auto r = d.residue_at(a0);
                EXPECT_LT(r.disagreement, 1e-6 * std::max(1e-3, std::abs(r.analytic))) << b.name;
            }
        }
    }
}

TEST(ZetaResidue, TermStructure) {
    MeromorphicDensity d(4, {0, 1, 1, 0}, 0.05, {1.0, 0.7});
    const double n4 = 1.0 / (16 * kPi * kPi);
    // alpha = 2: m = 0 only, eps independent
    const auto r2 = d.residue_at(2.0);
    EXPECT_LT(std::abs(r2.analytic - kI * n4), 1e-15);
    EXPECT_EQ(r2.terms[1], cplx(0.0));
    EXPECT_LT(std::abs(d.with_epsilon(1e-3).residue_at(2.0).analytic - r2.analytic), 1e-16);
    // alpha = 1: m = 0 carries (-z) = -i eps, m = 1 is eps independent
    const auto r1 = d.residue_at(1.0);
    EXPECT_LT(std::abs(r1.terms[0] - (-0.05 * n4)), 1e-15);
    EXPECT_LT(std::abs(r1.terms[1] - 0.7 * kI * n4), 1e-15);
}

TEST(ZetaResidue, EinsteinUniverseScalarCurvature) {
    auto b = bm::lorentzian_suite()[0];
    const double R = curvature(b.metric, b.point).scalar;
    const auto h = transport_solve(b.metric, b.point, 1);
    const auto base = MeromorphicDensity::from_hadamard(h, 4, 0.1);
    const auto ladder = extrapolate_epsilon([&](double e) { return base.with_epsilon(e).residue_at(1.0).analytic; });
    const cplx want = curvature_residue_prediction(4, R);
    EXPECT_LT(std::abs(want - (-kI * R / (96 * kPi * kPi))), 1e-16);
    EXPECT_LT(std::abs(ladder.extrapolated - want) / std::abs(want), 1e-3);
    EXPECT_GE(ladder.affine_r2, 0.999);
    // Minkowski
    MeromorphicDensity flat(4, {0, 0, 0, 0}, 0.1, {1.0, 0.0});
    const auto l0 = extrapolate_epsilon([&](double e) { return flat.with_epsilon(e).residue_at(1.0).analytic; });
    EXPECT_LT(std::abs(l0.extrapolated), 1e-15);
}

TEST(ZetaDensity, RejectsPolesAndBadInput) {
    MeromorphicDensity d(4, {0, 0, 0, 0}, 0.1, {1.0});
    EXPECT_THROW(d.evaluate(1.0), PoleError);
    EXPECT_THROW(d.residue_at(1.5), ValidationError);
    EXPECT_THROW(MeromorphicDensity(4, {}, 0.0, {1.0}), ValidationError);
    EXPECT_THROW(MeromorphicDensity(4, {}, 0.1, {}), ValidationError);
}

TEST(CCCoefficients, PhaseIdentitiesAndScaling) {
    const auto f = TestFunction::bump();
    const double m1 = f.moment(1.0), m0 = f.moment(0.0);
    const auto c0 = cc_coefficients(f, 4, 0);
    const auto c1 = cc_coefficients(f, 4, 1, -6.0);
    EXPECT_LT(std::abs(c0.C - kI * m1), 1e-15);
    EXPECT_LT(std::abs(c1.C - m0), 1e-15);
    EXPECT_DOUBLE_EQ(c0.a, 1.0 / (16 * kPi * kPi));
    EXPECT_DOUBLE_EQ(c1.a, 1.0 / (16 * kPi * kPi));
    const auto c0s = cc_coefficients(f.rescaled(2.0), 4, 0);
    EXPECT_LT(std::abs(c0s.C - 4.0 * c0.C) / std::abs(c0.C), 1e-10);
    EXPECT_THROW(TestFunction("t", 0.0, 1.0), ValidationError);
}

TEST(CCFit, RecoversSyntheticCoefficients) {
    std::vector<double> L, err;
    std::vector<cplx> v;
    const cplx c0(0.3, -1.2), c1(-0.7, 0.4), c2(0.05, 0.0);
    for (double x = 4.0; x <= 8.0; x += 0.5) {
        L.push_back(x);
        v.push_back(c0 * std::pow(x, 4) + c1 * x * x + c2);
        err.push_back(1e-12);
    }
    const auto f = cc_fit(L, v, err, 4, 4);
    EXPECT_LT(std::abs(f.fitted[0] - c0), 1e-10);
    EXPECT_LT(std::abs(f.fitted[1] - c1), 1e-8);
    EXPECT_LT(std::abs(f.fitted[0] - c0), f.fitted_error[0] + 1e-12);
    EXPECT_THROW(cc_fit({1, 2, 3}, {1.0, 1.0, 1.0}, {0, 0, 0}, 4, 4), ValidationError);
}

} // namespace
