#pragma once

// Riemannian cross-check on a closed product manifold M = Y_1 x ... x Y_p.
// The heat trace density K(t) = prod K_i(t) has the small-t expansion
//   (4 pi t)^{n/2} K(t) = a_0 + a_1 t + a_2 t^2 + ...,
// and the Mellin split of (-Delta)^{-alpha}(x, x) = Gamma(alpha)^{-1} int t^{alpha-1} K(t) dt
// puts a pole at alpha = n/2 - k with residue a_k (4 pi)^{-n/2} / Gamma(n/2 - k).
// The a_k come from a least-squares polynomial fit of the left-hand side.

#include "lz/specoracle/model.hpp"

#include <Eigen/Dense>

#include <vector>

namespace lz {

struct ProductManifold {
    std::vector<SpectralModel> factors;

    int dim() const {
        int n = 0;
        for (const auto& f : factors) n += f.spatial_dim();
        return n;
    }

    double heat_trace(double t) const {
        double k = 1.0;
        for (const auto& f : factors) k *= f.heat_trace(t);
        return k;
    }

    // T^n with side L.
    static ProductManifold torus(int n, double side, double lambda_max = 4000.0) {
        return {{SpectralModel::torus(n, side, lambda_max)}};
    }
    // S^3(r) x S^1(L).
    static ProductManifold sphere3_circle(double r, double side, double lambda_max = 4000.0) {
        return {{SpectralModel::sphere3(r, lambda_max), SpectralModel::torus(1, side, lambda_max)}};
    }
};

struct HeatFitOptions {
    double t_min = 0.02;
    double t_max = 0.2;
    int samples = 41;
    int degree = 6;
};

struct RiemannianResidue {
    double alpha0 = 0.0;
    double residue = 0.0;
    double error = 0.0;
    std::vector<double> heat_coefficients;  // a_0, a_1, ...
    double condition = 0.0;
};

namespace detail {

inline std::vector<double> heat_fit(const ProductManifold& M, const HeatFitOptions& opt, int degree,
                                    double* condition) {
    const int n = M.dim();
    Eigen::MatrixXd A(opt.samples, degree + 1);
    Eigen::VectorXd b(opt.samples);
    for (int i = 0; i < opt.samples; ++i) {
        // Chebyshev points cluster samples at both ends
        const double c = std::cos(kPi * (i + 0.5) / opt.samples);
        const double t = 0.5 * (opt.t_min + opt.t_max) + 0.5 * (opt.t_max - opt.t_min) * c;
        const double x = t / opt.t_max;
        for (int p = 0; p <= degree; ++p) A(i, p) = std::pow(x, p);
        b(i) = std::pow(4 * kPi * t, 0.5 * n) * M.heat_trace(t);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (condition) *condition = sv(0) / sv(sv.size() - 1);
    const Eigen::VectorXd coef = svd.solve(b);
    std::vector<double> out(degree + 1);
    for (int p = 0; p <= degree; ++p) out[p] = coef(p) / std::pow(opt.t_max, p);
    return out;
}

} // namespace detail

// Residue of (-Delta)^{-alpha}(x, x) at alpha = n/2 - k.
inline RiemannianResidue riemannian_residue(const ProductManifold& M, int k = 1, const HeatFitOptions& opt = {}) {
    const int n = M.dim();
    if (k < 0 || k > opt.degree - 2) throw ValidationError("heat coefficient index out of fit range");
    const double alpha0 = 0.5 * n - k;
    if (alpha0 <= 0 && alpha0 == std::round(alpha0))
        throw ValidationError("no pole at a non-positive integer alpha");
    for (const auto& f : M.factors)
        if (f.lambda_max() * opt.t_min < 40.0) throw ValidationError("spectrum too short for the heat-trace fit");
    RiemannianResidue r;
    r.alpha0 = alpha0;
    const auto a = detail::heat_fit(M, opt, opt.degree, &r.condition);
    if (r.condition > 1e12) throw NumericalError("heat-trace fit is ill-conditioned", r.condition);
    const auto b = detail::heat_fit(M, opt, opt.degree + 1, nullptr);
    const double norm = std::pow(4 * kPi, -0.5 * n) / std::tgamma(alpha0);
    r.residue = a[k] * norm;
    r.error = std::abs(a[k] - b[k]) * std::abs(norm) + 1e-13 * std::abs(a[0] * norm);
    r.heat_coefficients = a;
    return r;
}

// R / (6 (4 pi)^{n/2} Gamma(n/2 - 1)).
inline double riemannian_residue_prediction(int n, double scalar_curvature) {
    return scalar_curvature / (6.0 * std::pow(4 * kPi, 0.5 * n) * std::tgamma(0.5 * n - 1.0));
}

} // namespace lz
