#pragma once

// Orthonormal frames, geodesics (Dormand-Prince 5(4) with optional
// variational equations carried as degree-1 jets) and normal coordinates by
// Newton shooting.

#include "lz/geometry/curvature.hpp"
#include "lz/geometry/metric.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace lz {

// Columns are the legs e_a with g(e_a, e_b) = eta_ab. Gram-Schmidt over the
// chart basis: timelike leg first, lowest index wins, candidates of the wrong
// causal type are skipped; the last leg is flipped if the frame would
// reverse orientation.
inline Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& g, Signature sig, double tol = 1e-12) {
    const int n = static_cast<int>(g.rows());
    std::vector<Eigen::VectorXd> cand;
    for (int i = 0; i < n; ++i) cand.push_back(Eigen::VectorXd::Unit(n, i));
    // Sums of basis pairs rescue charts whose coordinate vectors are all null
    // or spacelike (e.g. light-cone coordinates).
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            cand.push_back(Eigen::VectorXd::Unit(n, i) + Eigen::VectorXd::Unit(n, j));
            cand.push_back(Eigen::VectorXd::Unit(n, i) - Eigen::VectorXd::Unit(n, j));
        }
    std::vector<Eigen::VectorXd> legs;
    std::vector<double> signs;
    auto ip = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(g * b); };
    auto try_add = [&](const Eigen::VectorXd& c, double want) {
        Eigen::VectorXd u = c;
        for (std::size_t a = 0; a < legs.size(); ++a) u -= signs[a] * ip(legs[a], c) * legs[a];
        const double q = ip(u, u);
        if (q * want <= tol * std::max(1.0, u.squaredNorm())) return false;
        legs.push_back(u / std::sqrt(std::abs(q)));
        signs.push_back(want);
        return true;
    };
    if (sig == Signature::Lorentzian) {
        bool found = false;
        for (const auto& c : cand)
            if (try_add(c, 1.0)) {
                found = true;
                break;
            }
        if (!found) throw NumericalError("no timelike direction found for the frame");
    }
    const double spatial = sig == Signature::Lorentzian ? -1.0 : 1.0;
    for (const auto& c : cand) {
        if (static_cast<int>(legs.size()) == n) break;
        try_add(c, spatial);
    }
    if (static_cast<int>(legs.size()) != n) throw NumericalError("could not complete an orthonormal frame");
    Eigen::MatrixXd E(n, n);
    for (int a = 0; a < n; ++a) E.col(a) = legs[a];
    if (E.determinant() < 0) E.col(n - 1) *= -1.0;
    return E;
}

// -Gamma^i_{jk}(x) w^j w^k, generic in the scalar type. Uses
// Gamma(w,w)_l = sum_k A_lk w^k - 1/2 sum_jk d_l g_jk w^j w^k with A_lk = w^j d_j g_lk.
template <class S>
std::vector<S> geodesic_acceleration(const MetricField& m, std::span<const S> x, std::span<const S> w) {
    const int n = m.dim();
    auto g = m.components<S>(x);
    auto dg = m.first_derivatives<S>(x);
    auto inv = invert(g, n, m.tolerances().det);
    const S zero = w[0] * 0.0;
    std::vector<S> B(n, zero);
    for (int l = 0; l < n; ++l) {
        S s = zero;
        for (int k = 0; k < n; ++k) {
            S A = zero;
            for (int j = 0; j < n; ++j) A += w[j] * dg[(j * n + l) * n + k];
            s += A * w[k];
        }
        S q = zero;
        for (int j = 0; j < n; ++j) {
            S r = zero;
            for (int k = 0; k < n; ++k) r += dg[(l * n + j) * n + k] * w[k];
            q += r * w[j];
        }
        B[l] = s - 0.5 * q;
    }
    std::vector<S> out(n, zero);
    for (int i = 0; i < n; ++i) {
        S s = zero;
        for (int l = 0; l < n; ++l) s += inv.inv[i * n + l] * B[l];
        out[i] = -s;
    }
    return out;
}

struct GeodesicOptions {
    double tol = 1e-10;
    long max_steps = 1000000;
    double initial_step = 1e-2;
};

struct GeodesicResult {
    std::vector<double> x;
    std::vector<double> velocity;
    Eigen::MatrixXd dx_dv;  // filled when requested
    long steps = 0;
};

namespace detail {

inline double scalar_of(double s) { return s; }
inline double scalar_of(const Jet& j) { return j.value(); }
inline double size_of(double s) { return std::abs(s); }
inline double size_of(const Jet& j) { return j.norm(); }

// One Dormand-Prince step for y' = f(y) on state (x, u).
template <class S, class F>
void dopri_step(F&& f, const std::vector<S>& y, double h, std::vector<S>& y5, double& err_norm, double tol) {
    static constexpr double c[7][6] = {
        {0, 0, 0, 0, 0, 0},
        {1.0 / 5, 0, 0, 0, 0, 0},
        {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
        {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
        {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static constexpr double b5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
    static constexpr double b4[7] = {5179.0 / 57600, 0, 7571.0 / 16695, 393.0 / 640,
                                     -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
    const std::size_t N = y.size();
    std::vector<std::vector<S>> k(7);
    k[0] = f(y);
    for (int s = 1; s < 7; ++s) {
        std::vector<S> ys = y;
        for (int r = 0; r < s; ++r)
            if (c[s][r] != 0.0)
                for (std::size_t i = 0; i < N; ++i) ys[i] += (h * c[s][r]) * k[r][i];
        k[s] = f(ys);
    }
    y5 = y;
    err_norm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        S e = y[i] * 0.0;
        for (int s = 0; s < 7; ++s) {
            if (b5[s] != 0.0) y5[i] += (h * b5[s]) * k[s][i];
            e += (h * (b5[s] - b4[s])) * k[s][i];
        }
        const double scale = tol * (1.0 + size_of(y[i]));
        err_norm = std::max(err_norm, size_of(e) / scale);
    }
}

template <class S>
GeodesicResult integrate_geodesic(const MetricField& m, std::vector<S> y, double s_end,
                                  const GeodesicOptions& opt) {
    const int n = m.dim();
    auto rhs = [&](const std::vector<S>& st) {
        std::span<const S> x(st.data(), n), u(st.data() + n, n);
        auto a = geodesic_acceleration<S>(m, x, u);
        std::vector<S> out(2 * n);
        for (int i = 0; i < n; ++i) {
            out[i] = st[n + i];
            out[n + i] = a[i];
        }
        return out;
    };
    const double dir = s_end >= 0 ? 1.0 : -1.0;
    double s = 0.0, h = dir * std::min(opt.initial_step, std::abs(s_end));
    long steps = 0;
    std::vector<S> trial;
    while (dir * (s_end - s) > 0) {
        if (++steps > opt.max_steps) throw NumericalError("geodesic: step limit reached");
        if (dir * (s + h - s_end) > 0) h = s_end - s;
        double err = 0.0;
        dopri_step<S>(rhs, y, h, trial, err, opt.tol);
        if (err <= 1.0) {
            s += h;
            y = trial;
            std::vector<double> xv(n);
            for (int i = 0; i < n; ++i) xv[i] = scalar_of(y[i]);
            if (!m.domain().contains(xv)) throw DomainError("geodesic left the chart domain");
        }
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= fac;
        if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(s)))
            throw NumericalError("geodesic: step size underflow");
    }
    GeodesicResult r;
    r.steps = steps;
    r.x.resize(n);
    r.velocity.resize(n);
    for (int i = 0; i < n; ++i) {
        r.x[i] = scalar_of(y[i]);
        r.velocity[i] = scalar_of(y[n + i]);
    }
    if constexpr (std::is_same_v<S, Jet>) {
        r.dx_dv.resize(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r.dx_dv(i, j) = y[i].d(j);
    }
    return r;
}

} // namespace detail

// Geodesic with x(0) = x0, x'(0) = v, evaluated at parameter s. With
// jacobian = true the derivative dx(s)/dv is returned as well.
inline GeodesicResult geodesic(const MetricField& m, std::span<const double> x0, std::span<const double> v,
                               double s, bool jacobian = false, GeodesicOptions opt = {}) {
    m.check_point(x0);
    if (opt.tol <= 0) opt.tol = m.tolerances().ode;
    const int n = m.dim();
    if (!jacobian) {
        std::vector<double> y(2 * n);
        for (int i = 0; i < n; ++i) {
            y[i] = x0[i];
            y[n + i] = v[i];
        }
        return detail::integrate_geodesic<double>(m, std::move(y), s, opt);
    }
    const auto& sp = JetSpace::get(n, 1);
    std::vector<Jet> y;
    for (int i = 0; i < n; ++i) y.emplace_back(sp, x0[i]);
    for (int i = 0; i < n; ++i) y.push_back(Jet::variable(sp, i, v[i]));
    return detail::integrate_geodesic<Jet>(m, std::move(y), s, opt);
}

struct NormalCoordinates {
    std::vector<double> v;  // frame components
    Eigen::MatrixXd frame;
    int iterations = 0;
    double residual = 0.0;
};

// v with exp_{x0}(E v) = y, E the orthonormal frame at x0 (or a given one).
inline NormalCoordinates normal_coordinates(const MetricField& m, std::span<const double> x0,
                                            std::span<const double> y, const Eigen::MatrixXd* frame = nullptr,
                                            int max_iter = 50) {
    m.check_point(x0);
    const int n = m.dim();
    NormalCoordinates out;
    out.frame = frame ? *frame : orthonormal_frame(m.matrix(x0), m.signature());
    Eigen::VectorXd target(n), base(n);
    for (int i = 0; i < n; ++i) {
        target(i) = y[i];
        base(i) = x0[i];
    }
    Eigen::VectorXd v = out.frame.colPivHouseholderQr().solve(target - base);
    const double tol = std::max(10.0 * m.tolerances().ode, 1e-12) * (1.0 + target.norm());
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w = out.frame * v;
        std::vector<double> wv(w.data(), w.data() + n);
        auto r = geodesic(m, x0, wv, 1.0, true);
        Eigen::VectorXd F(n);
        for (int i = 0; i < n; ++i) F(i) = r.x[i] - target(i);
        out.residual = F.norm();
        out.iterations = it;
        if (out.residual <= tol) {
            out.v.assign(v.data(), v.data() + n);
            return out;
        }
        Eigen::MatrixXd J = r.dx_dv * out.frame;
        v -= J.colPivHouseholderQr().solve(F);
    }
    throw NumericalError("normal_coordinates: Newton did not converge (point outside normal neighbourhood?)",
                         out.residual);
}

// Metric pulled back to frame-normal coordinates, g_hat(v) = J^T g(exp(Ev)) J,
// J = d exp(Ev)/dv, by shooting.
inline Eigen::MatrixXd pulled_back_metric(const MetricField& m, std::span<const double> x0,
                                          const Eigen::MatrixXd& frame, std::span<const double> v) {
    const int n = m.dim();
    Eigen::VectorXd vv(n);
    for (int i = 0; i < n; ++i) vv(i) = v[i];
    Eigen::VectorXd w = frame * vv;
    std::vector<double> wv(w.data(), w.data() + n);
    auto r = geodesic(m, x0, wv, 1.0, true);
    Eigen::MatrixXd J = r.dx_dv * frame;
    return J.transpose() * m.matrix(r.x) * J;
}

} // namespace lz
