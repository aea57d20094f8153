#pragma once

// Hadamard coefficients u_k from the transport hierarchy in normal
// coordinates (orthonormal frame at the center, eta = diag(1, -1, ..., -1)):
//
//   2k u_k + b^i eta_ij x^j u_k + 2 x^i d_i u_k + 2 P u_{k-1} = 0,   u_0(0) = 1.
//
// Along the ray x = s v this is a linear ODE in s. With phi = |g_hat| and the
// Gauss lemma (g_hat_ij x^j = eta_ij x^j) the solution is
//   u_0 = phi^{-1/4},
//   u_k(x) = -phi(x)^{-1/4} int_0^1 tau^{k-1} (phi^{1/4} P u_{k-1})(tau x) dtau.
// Jets of u_k in the transverse directions come from running the same
// quadrature on jet-valued integrands: the jet of the integrand at tau y,
// rescaled by tau, is the jet of tau -> f(tau (y + delta)).

#include "lz/core/quadrature.hpp"
#include "lz/geometry/curvature.hpp"
#include "lz/geometry/normal_chart.hpp"
#include "lz/geometry/operator.hpp"

#include <memory>
#include <span>
#include <vector>

namespace lz {

struct TransportOptions {
    int order = 2;             // N
    double r_max = 1.0;        // normal neighbourhood radius used for the diagonal ladder
    double tol = 1e-8;         // tol_transport
    int chart_degree = 10;     // Taylor degree of the normal chart
};

struct DiagonalValue {
    double value = 0.0;
    double error = 0.0;
};

class TransportSolver {
public:
    TransportSolver(const MetricField& m, std::span<const double> x0, TransportOptions opt = {},
                    const Eigen::MatrixXd* frame = nullptr)
        : opt_(opt), chart_(std::make_shared<NormalChart>(m, x0, required_degree(opt), frame)) {}

    const NormalChart& chart() const { return *chart_; }
    const TransportOptions& options() const { return opt_; }
    int dim() const { return chart_->dim(); }

    // u_k as a jet of degree d at the normal-chart point y.
    Jet u_jet(int k, std::span<const double> y, int d) const {
        if (k == 0) return pow(phi(y, d), -0.25);
        const int n = dim();
        std::vector<double> z(n);
        QuadOptions q;
        q.abs_tol = 0.1 * opt_.tol;
        q.rel_tol = 0.1 * opt_.tol;
        auto integrand = [&](double tau) {
            for (int i = 0; i < n; ++i) z[i] = tau * y[i];
            const auto g = chart_->metric_jet(z, d + 1);
            const Jet prev = u_jet(k - 1, z, d + 2);
            const Jet pu = apply_P_jets(g, prev, chart_->tol_det());
            const Jet w = pow(detail::abs_det(invert(detail::truncate_all(g, d), n).det), 0.25) * pu;
            return (std::pow(tau, k - 1) * w).scaled_arguments(tau);
        };
        auto r = integrate(integrand, 0.0, 1.0, q);
        return -(pow(phi(y, d), -0.25) * r.value);
    }

    double u(int k, std::span<const double> y) const { return u_jet(k, y, 0).value(); }

    // u_k(s v) with v a direction in frame coordinates.
    double ray_value(int k, std::span<const double> v, double s) const {
        std::vector<double> y(v.begin(), v.end());
        for (auto& c : y) c *= s;
        return u(k, y);
    }

    // P u_k at y (jet degree d).
    Jet P_u_jet(int k, std::span<const double> y, int d) const {
        return apply_P_jets(chart_->metric_jet(y, d + 1), u_jet(k, y, d + 2), chart_->tol_det());
    }

    // |2k u_k + b^i eta_ij y^j u_k + 2 y^i d_i u_k + 2 P u_{k-1}| at y.
    double residual(int k, std::span<const double> y) const {
        const int n = dim();
        const Jet uk = u_jet(k, y, 1);
        const auto b = b_vector_jets(chart_->metric_jet(y, 1), chart_->tol_det());
        double r = 2.0 * k * uk.value();
        double radial = 0.0;
        for (int i = 0; i < n; ++i) {
            const double eta = chart_->signature() == Signature::Riemannian || i == 0 ? 1.0 : -1.0;
            r += b[i].value() * eta * y[i] * uk.value();
            radial += y[i] * uk.d(i);
        }
        r += 2.0 * radial;
        if (k > 0) r += 2.0 * P_u_jet(k - 1, y, 0).value();
        return std::abs(r);
    }

    // s -> 0 limit along v from s in {r, r/2, r/4, r/8}, r = 0.1 r_max.
    DiagonalValue diagonal(int k, std::span<const double> v) const {
        std::vector<double> dir(v.begin(), v.end());
        double norm = 0.0;
        for (double c : dir) norm += c * c;
        norm = std::sqrt(norm);
        for (auto& c : dir) c /= norm;
        const double r = 0.1 * opt_.r_max;
        std::vector<double> hs = {r, r / 2, r / 4, r / 8};
        std::vector<cplx> vals;
        for (double s : hs) vals.emplace_back(ray_value(k, dir, s));
        const std::vector<double> ex = {1.0, 2.0, 3.0};
        auto fit = richardson(hs, vals, ex);
        return {fit.value.real(), fit.error + opt_.tol};
    }

    static std::vector<double> default_direction(int n) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = 1.0 / (1.0 + 0.6 * i);
        return v;
    }

private:
    static int required_degree(const TransportOptions& opt) {
        // u_N at degree 0 needs g_hat jets of degree 2N + 1 along the ray.
        return std::max(opt.chart_degree, std::min(2 * opt.order + 4, JetSpace::kMaxDegree - 1));
    }

    Jet phi(std::span<const double> y, int d) const {
        return detail::abs_det(invert(chart_->metric_jet(y, d), dim(), chart_->tol_det()).det);
    }

    TransportOptions opt_;
    std::shared_ptr<const NormalChart> chart_;
};

struct HadamardCoefficients {
    std::vector<double> center;
    int order = 0;
    std::vector<double> diag_values;
    std::vector<double> diag_errors;
    std::shared_ptr<const TransportSolver> solver;  // ray evaluator

    double ray_value(int k, std::span<const double> v, double s) const { return solver->ray_value(k, v, s); }
};

inline HadamardCoefficients transport_solve(const MetricField& m, std::span<const double> x0, int N,
                                            TransportOptions opt = {}) {
    if (N < 0) throw ValidationError("transport order must be >= 0");
    opt.order = N;
    auto solver = std::make_shared<TransportSolver>(m, x0, opt);
    HadamardCoefficients h;
    h.center.assign(x0.begin(), x0.end());
    h.order = N;
    h.solver = solver;
    const auto dir = TransportSolver::default_direction(m.dim());
    for (int k = 0; k <= N; ++k) {
        auto d = k == 0 ? DiagonalValue{1.0, 0.0} : solver->diagonal(k, dir);
        h.diag_values.push_back(d.value);
        h.diag_errors.push_back(d.error);
    }
    return h;
}

// u_0(s v) = |g(0)|^{1/4} |g(s v)|^{-1/4} in the normal chart at x0.
inline double u0(const MetricField& m, std::span<const double> x0, std::span<const double> v, double s) {
    TransportOptions opt;
    opt.order = 0;
    TransportSolver solver(m, x0, opt);
    return solver.ray_value(0, v, s);
}

// u_1(x0, x0) = -P(|g(0)|^{1/4} |g(x)|^{-1/4})(0) from jets at the center only.
inline double diagonal_u1_direct(const MetricField& m, std::span<const double> x0, int chart_degree = 4) {
    NormalChart chart(m, x0, chart_degree);
    const std::vector<double> zero(m.dim(), 0.0);
    const auto g = chart.metric_jet(zero, 3);
    const Jet u = pow(detail::abs_det(invert(g, m.dim(), chart.tol_det()).det), -0.25);
    return -apply_P_jets(detail::truncate_all(g, 1), u.truncated(2), chart.tol_det()).value();
}

} // namespace lz
