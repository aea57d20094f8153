#pragma once

// Local zeta density of (P - i eps)^{-alpha} from the parametrix series
//   zeta(alpha)(x) = sum_{m <= N} u_m(x, x) c_m(alpha) F_{m + alpha - 1}(z, 0) + holomorphic,
// c_m(alpha) = (-1)^m Gamma(1 - alpha) / (Gamma(1 - alpha - m) Gamma(alpha + m)) = 1 / Gamma(alpha).
// The holomorphic remainder is not computed: pole and residue data are exact
// modulo it, values off the poles depend on the truncation N.
//
// The model diagonal is evaluated at z = +i eps (see README, "Conventions").

#include "lz/core/quadrature.hpp"
#include "lz/hadamard/transport.hpp"
#include "lz/minkmodel/power.hpp"

#include <string>
#include <vector>

namespace lz {

// Gamma-ratio form; throws PoleError where Gamma(1 - alpha) has a pole.
inline cplx series_coefficient_ratio(cplx alpha, int m) {
    const double sign = (m % 2) ? -1.0 : 1.0;
    return sign * gamma(1.0 - alpha) * rgamma(1.0 - alpha - static_cast<double>(m)) *
           rgamma(alpha + static_cast<double>(m));
}

// Stable form: Gamma(1 - alpha) / Gamma(1 - alpha - m) = (1 - alpha - m)_m.
inline cplx series_coefficient(cplx alpha, int m) {
    if (m < 0) throw ValidationError("series index must be >= 0");
    const double sign = (m % 2) ? -1.0 : 1.0;
    return sign * pochhammer(1.0 - alpha - static_cast<double>(m), m) * rgamma(alpha + static_cast<double>(m));
}

// -i R / (6 (4 pi)^{n/2} Gamma(n/2 - 1)): the eps -> 0 residue at n/2 - 1.
inline cplx curvature_residue_prediction(int n, double scalar_curvature) {
    return -kI * scalar_curvature / (6.0 * std::pow(4 * kPi, 0.5 * n) * std::tgamma(0.5 * n - 1.0));
}

struct DensityValue {
    cplx value;
    double error = 0.0;
    std::vector<cplx> terms;  // per m
};

struct ResidueReport {
    cplx alpha0;
    double epsilon = 0.0;
    cplx analytic;
    cplx numeric;
    double error = 0.0;         // propagated from the coefficient errors
    double disagreement = 0.0;  // |analytic - numeric|
    std::vector<cplx> terms;    // per m, analytic path
};

class MeromorphicDensity {
public:
    MeromorphicDensity(int n, std::vector<double> point, double epsilon, std::vector<double> coeffs,
                       std::vector<double> coeff_errors = {})
        : n_(n), point_(std::move(point)), eps_(epsilon), u_(std::move(coeffs)), u_err_(std::move(coeff_errors)) {
        if (n < 2) throw ValidationError("dimension must be >= 2");
        if (!(epsilon > 0)) throw ValidationError("epsilon must be > 0");
        if (u_.empty()) throw ValidationError("missing Hadamard coefficients");
        u_err_.resize(u_.size(), 0.0);
    }

    static MeromorphicDensity from_hadamard(const HadamardCoefficients& h, int n, double epsilon) {
        return MeromorphicDensity(n, h.center, epsilon, h.diag_values, h.diag_errors);
    }

    int dim() const { return n_; }
    int order() const { return static_cast<int>(u_.size()) - 1; }
    double epsilon() const { return eps_; }
    const std::vector<double>& point() const { return point_; }
    const std::vector<double>& coefficients() const { return u_; }
    cplx z() const { return cplx(0.0, eps_); }

    MeromorphicDensity with_epsilon(double e) const { return MeromorphicDensity(n_, point_, e, u_, u_err_); }

    // Poles whose residue is complete at this truncation: n/2 - j, j <= N,
    // dropping non-positive integers where 1/Gamma(alpha) vanishes.
    std::vector<double> pole_locations() const {
        std::vector<double> out;
        for (int j = 0; j <= order(); ++j) {
            const double a = 0.5 * n_ - j;
            if (a <= 0 && a == std::round(a)) continue;
            out.push_back(a);
        }
        return out;
    }

    bool is_pole(cplx alpha) const {
        const cplx d = 0.5 * n_ - alpha;
        if (std::abs(d.imag()) > 1e-12 || d.real() < -1e-12) return false;
        if (std::abs(d.real() - std::round(d.real())) > 1e-12) return false;
        return !(alpha.real() <= 1e-12 && std::abs(alpha.real() - std::round(alpha.real())) < 1e-12);
    }

    std::vector<cplx> component_breakdown(cplx alpha) const { return evaluate(alpha).terms; }

    DensityValue evaluate(cplx alpha) const {
        if (is_pole(alpha)) throw PoleError("zeta density evaluated at a pole");
        DensityValue out;
        for (int m = 0; m <= order(); ++m) {
            const cplx t = model_term(m, alpha);
            out.terms.push_back(u_[m] * t);
            out.value += u_[m] * t;
            out.error += u_err_[m] * std::abs(t);
        }
        return out;
    }

    ResidueReport residue_at(cplx alpha0, double radius = 0.05, int points = 64) const {
        if (!is_pole(alpha0)) throw ValidationError("alpha0 is not in the pole set");
        if (radius >= 0.5) throw ValidationError("residue circle must clear neighbouring poles");
        ResidueReport r;
        r.alpha0 = alpha0;
        r.epsilon = eps_;
        const int j = static_cast<int>(std::lround((0.5 * n_ - alpha0).real()));
        for (int m = 0; m <= order(); ++m) {
            cplx t = 0.0;
            if (m <= j) t = rgamma(alpha0) * F_residue(n_, j - m, z());
            r.terms.push_back(u_[m] * t);
            r.analytic += u_[m] * t;
            r.error += u_err_[m] * std::abs(t);
        }
        r.numeric = circle_integral([&](cplx a) { return evaluate(a).value; }, alpha0, radius, points);
        r.disagreement = std::abs(r.analytic - r.numeric);
        return r;
    }

private:
    // c_m(alpha) F_{m + alpha - 1}(z, 0), with the removable singularity at
    // non-positive integer alpha taken as a limit.
    cplx model_term(int m, cplx alpha) const {
        const cplx a = static_cast<double>(m) + alpha - 1.0;
        const cplx rg = rgamma(alpha);
        if (rg == cplx(0.0)) {
            const cplx s = a + 1.0 - 0.5 * n_;
            const bool f_pole = std::abs(s.imag()) < 1e-12 && s.real() < 1e-12 &&
                                std::abs(s.real() - std::round(s.real())) < 1e-12;
            if (!f_pole) return 0.0;
            const int p = static_cast<int>(std::lround(-alpha.real()));
            const double drg = ((p % 2) ? -1.0 : 1.0) * std::tgamma(p + 1.0);  // (1/Gamma)'(-p)
            return drg * F_residue(n_, static_cast<int>(std::lround(-s.real())), z());
        }
        return rg * F_diagonal(n_, a, z());
    }

    int n_;
    std::vector<double> point_;
    double eps_;
    std::vector<double> u_, u_err_;
};

inline DensityValue zeta_density(const MetricField& m, std::span<const double> x, double epsilon, int N, cplx alpha,
                                 TransportOptions opt = {}) {
    const auto h = transport_solve(m, x, N, opt);
    return MeromorphicDensity::from_hadamard(h, m.dim(), epsilon).evaluate(alpha);
}

inline ResidueReport residue(const MetricField& m, std::span<const double> x, double epsilon, int N, cplx alpha0,
                             TransportOptions opt = {}) {
    const auto h = transport_solve(m, x, N, opt);
    return MeromorphicDensity::from_hadamard(h, m.dim(), epsilon).residue_at(alpha0);
}

// ---------------------------------------------------------------- eps -> 0

struct EpsilonLadder {
    std::vector<double> epsilons;
    std::vector<cplx> values;
    cplx extrapolated;
    double error = 0.0;
    double affine_r2 = 1.0;  // linear-fit R^2 over the rungs with eps <= 1e-2
};

inline std::vector<double> default_epsilon_ladder() { return {1e-1, 1e-2, 1e-3, 1e-4}; }

// Coefficient of determination of the least-squares line through (x, y).
inline double affine_r2(std::span<const double> x, std::span<const cplx> y) {
    const std::size_t k = x.size();
    if (k < 3) return 1.0;
    double mx = 0.0;
    cplx my = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= k;
    my /= static_cast<double>(k);
    double sxx = 0.0;
    cplx sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const cplx slope = sxy / sxx;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        ss_res += std::norm(y[i] - my - slope * (x[i] - mx));
        ss_tot += std::norm(y[i] - my);
    }
    return ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
}

// Least-squares fit v(eps) = v0 + c_1 eps + ... + c_order eps^order; returns
// v0 and the change in v0 when the largest rung is dropped.
inline Extrapolation polynomial_extrapolation(std::span<const double> x, std::span<const cplx> y, int order) {
    auto fit = [&](std::size_t skip) {
        const auto k = static_cast<Eigen::Index>(x.size() - (skip < x.size() ? 1 : 0));
        Eigen::MatrixXcd A(k, order + 1);
        Eigen::VectorXcd b(k);
        Eigen::Index row = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i == skip) continue;
            for (int p = 0; p <= order; ++p) A(row, p) = std::pow(x[i], p);
            b(row++) = y[i];
        }
        return cplx(A.colPivHouseholderQr().solve(b)(0));
    };
    const cplx full = fit(x.size());
    double err = 0.0;
    if (x.size() > static_cast<std::size_t>(order) + 1) {
        const auto big = static_cast<std::size_t>(std::max_element(x.begin(), x.end()) - x.begin());
        err = std::abs(full - fit(big));
    }
    return {full, err};
}

// Residue(eps) sampled on the ladder and extrapolated to eps = 0.
template <class F>
EpsilonLadder extrapolate_epsilon(F&& residue_at_eps, std::vector<double> ladder = default_epsilon_ladder(),
                                  int order = 1) {
    if (ladder.size() < static_cast<std::size_t>(order) + 1) throw ValidationError("epsilon ladder too short");
    EpsilonLadder out;
    out.epsilons = ladder;
    for (double e : ladder) out.values.push_back(residue_at_eps(e));
    const auto fit = polynomial_extrapolation(out.epsilons, out.values, order);
    out.extrapolated = fit.value;
    out.error = fit.error;
    std::vector<double> xs;
    std::vector<cplx> ys;
    for (std::size_t i = 0; i < ladder.size(); ++i)
        if (ladder[i] <= 1e-2) {
            xs.push_back(ladder[i]);
            ys.push_back(out.values[i]);
        }
    out.affine_r2 = affine_r2(xs, ys);
    return out;
}

} // namespace lz
