#pragma once

// Large-Lambda expansion of the spectral action density
//   f((P + i eps) / Lambda^2)(x, x) ~ sum_j Lambda^{n - 2j} C_j(f) a_j(x),
//   C_j(f) = i^{-1} e^{i (n - 2j) pi / 4} int_0^inf f_hat(t) t^{n/2 - 1 - j} dt,
//   a_0 = (4 pi)^{-n/2},  a_1(x) = -(4 pi)^{-n/2} R(x) / 6.
// cc_expansion_check fits the mode-sum values over a Lambda grid.

#include "lz/specoracle/action.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <vector>

namespace lz {

struct CCCoefficient {
    int j = 0;
    cplx C;               // C_j(f)
    double C_error = 0.0;
    double a = 0.0;       // a_j(x)
};

inline CCCoefficient cc_coefficients(const TestFunction& f, int n, int j, double scalar_curvature = 0.0) {
    if (j != 0 && j != 1) throw ValidationError("only C_0 and C_1 are available");
    CCCoefficient c;
    c.j = j;
    const double tol = 1e-13;
    const double m = f.moment(0.5 * n - 1.0 - j, tol);
    c.C = -kI * std::polar(1.0, (n - 2.0 * j) * kPi / 4.0) * m;
    c.C_error = 10 * tol * std::abs(m);
    const double a0 = std::pow(4 * kPi, -0.5 * n);
    c.a = j == 0 ? a0 : -a0 * scalar_curvature / 6.0;
    return c;
}

struct SpectralActionExpansion {
    TestFunction test_function = TestFunction::bump();
    int n = 4;
    int order = 1;  // N
    std::vector<CCCoefficient> coefficients;
    std::vector<double> lambda_grid;

    cplx predicted(double Lambda) const {
        cplx s = 0.0;
        for (const auto& c : coefficients) s += std::pow(Lambda, n - 2.0 * c.j) * c.C * c.a;
        return s;
    }
};

inline std::vector<double> default_lambda_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 8; ++i) g.push_back(4.0 + 0.5 * i);
    return g;
}

// Least-squares fit of values against Lambda^{n}, Lambda^{n-2}, ...
// fitted_error combines the propagated value errors with the change of each
// coefficient when the last basis power is dropped.
struct CCFit {
    std::vector<int> powers;
    std::vector<cplx> fitted;
    std::vector<double> fitted_error;
    double residual = 0.0;
    double condition = 0.0;
};

namespace detail {

inline Eigen::VectorXcd cc_solve(const std::vector<double>& lambdas, const std::vector<cplx>& values,
                                 const std::vector<int>& powers, double ref, double* condition, double* residual,
                                 Eigen::MatrixXcd* pinv) {
    const auto rows = static_cast<Eigen::Index>(lambdas.size());
    const auto cols = static_cast<Eigen::Index>(powers.size());
    Eigen::MatrixXcd A(rows, cols);
    Eigen::VectorXcd b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index p = 0; p < cols; ++p) A(i, p) = std::pow(lambdas[i] / ref, powers[p]);
        b(i) = values[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (condition) *condition = sv(0) / sv(sv.size() - 1);
    const Eigen::VectorXcd x = svd.solve(b);
    if (residual) *residual = (A * x - b).norm() / b.norm();
    if (pinv)
        *pinv = svd.matrixV() * sv.cwiseInverse().asDiagonal().toDenseMatrix().cast<cplx>() *
                svd.matrixU().adjoint();
    return x;
}

} // namespace detail

inline CCFit cc_fit(const std::vector<double>& lambdas, const std::vector<cplx>& values,
                    const std::vector<double>& errors, int n, int terms = 4) {
    if (terms < 2) throw ValidationError("the fit needs at least two powers");
    if (lambdas.size() != values.size() || errors.size() != values.size())
        throw ValidationError("Lambda grid and values differ in length");
    if (lambdas.size() < static_cast<std::size_t>(terms) + 2) throw ValidationError("Lambda grid too small for the fit");
    CCFit f;
    for (int p = 0; p < terms; ++p) f.powers.push_back(n - 2 * p);
    const double ref = *std::max_element(lambdas.begin(), lambdas.end());
    Eigen::MatrixXcd pinv;
    const auto x = detail::cc_solve(lambdas, values, f.powers, ref, &f.condition, &f.residual, &pinv);
    if (f.condition > 1e10) throw NumericalError("Lambda grid too narrow: fit condition number too high", f.condition);
    const std::vector<int> fewer(f.powers.begin(), f.powers.end() - 1);
    const auto y = detail::cc_solve(lambdas, values, fewer, ref, nullptr, nullptr, nullptr);
    for (int p = 0; p < terms; ++p) {
        const double unit = std::pow(ref, f.powers[p]);
        double prop = 0.0;
        for (std::size_t i = 0; i < errors.size(); ++i) prop += std::abs(pinv(p, static_cast<Eigen::Index>(i))) * errors[i];
        const double drop = p + 1 < terms ? std::abs(x(p) - y(p)) : std::abs(x(p));
        f.fitted.push_back(x(p) / unit);
        f.fitted_error.push_back((prop + drop) / unit);
    }
    return f;
}

struct CCFitReport {
    std::vector<double> lambdas;
    std::vector<cplx> values;
    std::vector<double> errors;
    std::vector<int> powers;        // Lambda exponents of the fit basis
    std::vector<cplx> fitted;       // coefficient per power
    std::vector<double> fitted_error;
    cplx predicted_leading;         // C_0 a_0
    cplx predicted_subleading;      // C_1 a_1
    double rel_error_leading = 0.0;
    double rel_error_subleading = 0.0;  // relative to |C_1 a_1|, or to |C_0 a_0| when a_1 = 0
    double fit_residual = 0.0;
    double condition = 0.0;
    SpectralActionExpansion expansion;
};

// Fits mode-sum values against Lambda^{n}, Lambda^{n-2}, ..., Lambda^{n-2(terms-1)}.
inline CCFitReport cc_expansion_check(const SpectralModel& model, const TestFunction& f,
                                      std::vector<double> grid, double eps, double scalar_curvature,
                                      int terms = 4, const ActionOptions& opt = {}) {
    const int n = model.spatial_dim() + 1;
    if (grid.size() < static_cast<std::size_t>(terms) + 2) throw ValidationError("Lambda grid too small for the fit");
    CCFitReport r;
    r.lambdas = grid;
    for (double L : grid) {
        const auto a = mode_action(model, f, L, eps, +1, opt);
        r.values.push_back(a.value);
        r.errors.push_back(a.error);
    }
    const auto fit = cc_fit(grid, r.values, r.errors, n, terms);
    r.powers = fit.powers;
    r.fitted = fit.fitted;
    r.fitted_error = fit.fitted_error;
    r.fit_residual = fit.residual;
    r.condition = fit.condition;

    r.expansion.test_function = f;
    r.expansion.n = n;
    r.expansion.order = 1;
    r.expansion.lambda_grid = grid;
    r.expansion.coefficients = {cc_coefficients(f, n, 0, scalar_curvature), cc_coefficients(f, n, 1, scalar_curvature)};
    r.predicted_leading = r.expansion.coefficients[0].C * r.expansion.coefficients[0].a;
    r.predicted_subleading = r.expansion.coefficients[1].C * r.expansion.coefficients[1].a;
    r.rel_error_leading = std::abs(r.fitted[0] - r.predicted_leading) / std::abs(r.predicted_leading);
    const double sub_scale =
        std::abs(r.predicted_subleading) > 0 ? std::abs(r.predicted_subleading) : std::abs(r.predicted_leading);
    r.rel_error_subleading = std::abs(r.fitted[1] - r.predicted_subleading) / sub_scale;
    return r;
}

} // namespace lz
