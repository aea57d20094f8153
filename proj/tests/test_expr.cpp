#include "lz/core/expr.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

using lz::Expr;
using lz::Jet;
using lz::JetSpace;

const std::vector<std::string> kVars = {"x0", "x1", "x2", "x3"};

double eval(const std::string& s, std::vector<double> x) {
    return Expr::parse(s, kVars).eval<double>(x);
}

TEST(Expr, PrecedenceAndAssociativity) {
    EXPECT_DOUBLE_EQ(eval("1 + 2*3", {0, 0, 0, 0}), 7.0);
    EXPECT_DOUBLE_EQ(eval("-x1^2", {0, 3, 0, 0}), -9.0);
    EXPECT_DOUBLE_EQ(eval("2^3^2", {0, 0, 0, 0}), 512.0);
    EXPECT_DOUBLE_EQ(eval("2^-1", {0, 0, 0, 0}), 0.5);
    EXPECT_DOUBLE_EQ(eval("8/4/2", {0, 0, 0, 0}), 1.0);
    EXPECT_DOUBLE_EQ(eval("(x0 - x1) * 2e-1", {3, 1, 0, 0}), 0.4);
    EXPECT_NEAR(eval("sin(pi/2) + cos(0) + exp(0) + log(1) + sqrt(4)", {0, 0, 0, 0}), 5.0, 1e-15);
    EXPECT_NEAR(eval("cosh(x2)^2 - sinh(x2)^2 + tan(0)", {0, 0, 0.7, 0}), 1.0, 1e-14);
}

TEST(Expr, ParseErrorsReportColumn) {
    try {
        Expr::parse("1 + * x0", kVars);
        FAIL() << "expected a parse error";
    } catch (const lz::ParseError& e) {
        EXPECT_EQ(e.column(), 5);
    }
    EXPECT_THROW(Expr::parse("foo(x0)", kVars), lz::ParseError);
    EXPECT_THROW(Expr::parse("x0 +", kVars), lz::ParseError);
    EXPECT_THROW(Expr::parse("(x0", kVars), lz::ParseError);
    EXPECT_THROW(Expr::parse("y", kVars), lz::ParseError);
}

TEST(Expr, DomainErrors) {
    EXPECT_THROW(eval("log(x1)", {0, -1, 0, 0}), lz::DomainError);
    EXPECT_THROW(eval("sqrt(x1)", {0, -1, 0, 0}), lz::DomainError);
    EXPECT_THROW(eval("1/x1", {0, 0, 0, 0}), lz::DomainError);
    EXPECT_THROW(eval("x1^0.5", {0, -2, 0, 0}), lz::DomainError);
    EXPECT_DOUBLE_EQ(eval("x1^3", {0, -2, 0, 0}), -8.0);
}

TEST(Expr, JetEvaluationOfPolynomialComponent) {
    // g00 = 1 + x1^2 at x1 = 0.5
    const auto& sp = JetSpace::get(4, 2);
    std::vector<Jet> x;
    const double pt[4] = {0.0, 0.5, 0.0, 0.0};
    for (int i = 0; i < 4; ++i) x.push_back(Jet::variable(sp, i, pt[i]));
    Jet g = Expr::parse("1 + x1^2", kVars).eval<Jet>(x);
    EXPECT_DOUBLE_EQ(g.value(), 1.25);
    EXPECT_DOUBLE_EQ(g.d(1), 1.0);
    EXPECT_DOUBLE_EQ(g.d(1, 1), 2.0);
    EXPECT_DOUBLE_EQ(g.d(0), 0.0);
}

// Symbolic derivatives agree with central differences on a mixed expression.
TEST(Expr, SymbolicDerivativeMatchesFiniteDifferences) {
    Expr e = Expr::parse("sin(x0*x1)^2 / (1 + x2^2) + exp(-x3) * sqrt(2 + cos(x1)) + x1^x2", kVars);
    std::vector<double> p = {0.3, 1.1, 0.7, -0.4};
    for (int v = 0; v < 4; ++v) {
        Expr d = e.diff(v);
        const double h = 1e-5;
        auto pp = p, pm = p;
        pp[v] += h;
        pm[v] -= h;
        double fd = (e.eval<double>(pp) - e.eval<double>(pm)) / (2 * h);
        EXPECT_NEAR(d.eval<double>(p), fd, 1e-8) << "variable " << v;
    }
    // Second derivative through the jet engine equals the doubly
    // differentiated tree.
    const auto& sp = JetSpace::get(4, 2);
    std::vector<Jet> x;
    for (int i = 0; i < 4; ++i) x.push_back(Jet::variable(sp, i, p[i]));
    Jet j = e.eval<Jet>(x);
    EXPECT_NEAR(j.d(1, 2), e.diff(1).diff(2).eval<double>(p), 1e-12);
}

} // namespace
