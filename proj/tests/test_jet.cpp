#include "lz/core/jet.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using lz::Jet;
using lz::JetSpace;

TEST(JetSpace, GradedOrderIsPrefixAcrossDegrees) {
    const auto& small = JetSpace::get(3, 2);
    const auto& big = JetSpace::get(3, 5);
    ASSERT_EQ(small.size(), 10u);
    ASSERT_EQ(big.size(), 56u);
    for (std::size_t k = 0; k < small.size(); ++k) {
        auto a = small.exponent(k);
        auto b = big.exponent(k);
        EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
    }
    EXPECT_EQ(big.unit(0), 1u);
    EXPECT_EQ(big.exponent(big.unit(2))[2], 1);
}

TEST(Jet, PolynomialArithmeticIsExact) {
    const auto& sp = JetSpace::get(2, 4);
    Jet x = Jet::variable(sp, 0, 0.5);
    Jet y = Jet::variable(sp, 1, -1.0);
    // f = x^2 y + 3 x y^2 at (0.5, -1)
    Jet f = x * x * y + 3.0 * x * y * y;
    EXPECT_DOUBLE_EQ(f.value(), 0.25 * -1.0 + 3.0 * 0.5);
    EXPECT_DOUBLE_EQ(f.d(0), 2 * 0.5 * -1.0 + 3.0);          // 2xy + 3y^2
    EXPECT_DOUBLE_EQ(f.d(1), 0.25 + 6.0 * 0.5 * -1.0);       // x^2 + 6xy
    EXPECT_DOUBLE_EQ(f.d(0, 0), -2.0);                        // 2y
    EXPECT_DOUBLE_EQ(f.d(0, 1), 2 * 0.5 + 6.0 * -1.0);        // 2x + 6y
    EXPECT_DOUBLE_EQ(f.d(1, 1), 3.0);                         // 6x
    const int third[] = {2, 1};
    EXPECT_DOUBLE_EQ(f.partial(third), 2.0);
}

TEST(Jet, TranscendentalsMatchClosedFormDerivatives) {
    const auto& sp = JetSpace::get(2, 4);
    const double a = 0.3, b = 0.7;
    Jet x = Jet::variable(sp, 0, a);
    Jet y = Jet::variable(sp, 1, b);
    Jet f = exp(x * y);
    const double e = std::exp(a * b);
    EXPECT_NEAR(f.d(0), b * e, 1e-14);
    EXPECT_NEAR(f.d(0, 1), (1 + a * b) * e, 1e-14);
    const int a40[] = {4, 0};
    EXPECT_NEAR(f.partial(a40), std::pow(b, 4) * e, 1e-13);

    Jet s = sin(x) * cos(y);
    EXPECT_NEAR(s.d(0, 1), -std::cos(a) * std::sin(b), 1e-14);
    const int a31[] = {3, 1};
    EXPECT_NEAR(s.partial(a31), std::cos(a) * std::sin(b), 1e-13);

    Jet l = log(x + y * y);
    EXPECT_NEAR(l.d(1, 1), (2 * (a + b * b) - 4 * b * b) / std::pow(a + b * b, 2), 1e-13);

    Jet r = sqrt(x);
    EXPECT_NEAR((r * r - x).norm(), 0.0, 1e-14);
    Jet p = pow(x, -0.25);
    EXPECT_NEAR(p.d(0, 0), (-0.25) * (-1.25) * std::pow(a, -2.25), 1e-12);
    Jet h = cosh(x) * cosh(x) - sinh(x) * sinh(x);
    EXPECT_NEAR((h - 1.0).norm(), 0.0, 1e-13);
}

TEST(Jet, DerivativeAndScaling) {
    const auto& sp = JetSpace::get(2, 3);
    Jet x = Jet::variable(sp, 0, 1.0);
    Jet y = Jet::variable(sp, 1, 2.0);
    Jet f = x * x * x * y;
    Jet fx = f.derivative(0);
    EXPECT_EQ(fx.degree(), 2);
    EXPECT_DOUBLE_EQ(fx.value(), 3.0 * 2.0);
    EXPECT_DOUBLE_EQ(fx.d(0), 6.0 * 2.0);
    EXPECT_DOUBLE_EQ(fx.d(1), 3.0);

    // g(delta) = f(p + 2 delta): first derivatives double.
    Jet g = f.scaled_arguments(2.0);
    EXPECT_DOUBLE_EQ(g.d(0), 2.0 * f.d(0));
    EXPECT_DOUBLE_EQ(g.d(0, 1), 4.0 * f.d(0, 1));
}

// Products of random polynomials of total degree <= 2 are exact in a
// degree-4 space: compare against direct evaluation of the product.
TEST(JetProperty, RandomPolynomialProductsAreExact) {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const auto& sp = JetSpace::get(3, 4);
    for (int trial = 0; trial < 50; ++trial) {
        Jet p(sp), q(sp);
        for (std::size_t k = 0; k < sp.prefix_size(2); ++k) {
            p[k] = U(rng);
            q[k] = U(rng);
        }
        Jet pq = p * q;
        for (int s = 0; s < 5; ++s) {
            double d[3] = {U(rng), U(rng), U(rng)};
            EXPECT_NEAR(pq.evaluate(d), p.evaluate(d) * q.evaluate(d), 1e-13);
        }
    }
}

TEST(Jet, DomainErrors) {
    const auto& sp = JetSpace::get(1, 2);
    Jet x = Jet::variable(sp, 0, -1.0);
    EXPECT_THROW(log(x), lz::DomainError);
    EXPECT_THROW(pow(x, 0.5), lz::DomainError);
    EXPECT_NO_THROW(pow(x, 3.0));
    EXPECT_THROW(JetSpace::get(0, 2), lz::ValidationError);
}

} // namespace
