#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature over real intervals for real,
// complex and jet-valued integrands; Gauss-Legendre rules; trapezoidal
// circle integrals; generalized Richardson extrapolation.

#include "lz/core/error.hpp"
#include "lz/core/special.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace lz {

inline double quad_norm(double x) { return std::abs(x); }
inline double quad_norm(const cplx& x) { return std::abs(x); }

template <class V>
struct QuadResult {
    V value;
    double error = 0.0;
    int evaluations = 0;
    bool converged = true;
};

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_intervals = 4000;
    // Throw NumericalError instead of returning converged = false.
    bool throw_on_failure = true;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V, class F>
V gk15(F& f, double a, double b, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    V fc = f(c);
    V kron = fc * kWgk[7];
    V gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        V f1 = f(c - dx);
        V f2 = f(c + dx);
        V s = f1 + f2;
        kron += s * kWgk[j];
        if (j % 2 == 1) gauss += s * kWg[j / 2];
    }
    kron *= h;
    gauss *= h;
    V diff = kron - gauss;
    err = quad_norm(diff);
    return kron;
}

} // namespace detail

// Globally adaptive bisection driven by the G7/K15 difference.
template <class F>
auto integrate(F&& f, double a, double b, const QuadOptions& opt = {})
    -> QuadResult<std::decay_t<decltype(f(a))>> {
    using V = std::decay_t<decltype(f(a))>;
    struct Piece {
        double a, b, err;
        V value;
        bool operator<(const Piece& o) const { return err < o.err; }
    };
    std::priority_queue<Piece> heap;
    double err0 = 0.0;
    V v0 = detail::gk15<V>(f, a, b, err0);
    heap.push({a, b, err0, v0});
    int evals = 15;
    V total = v0;
    double total_err = err0;
    while (true) {
        double tol = std::max(opt.abs_tol, opt.rel_tol * quad_norm(total));
        if (total_err <= tol) break;
        if (static_cast<int>(heap.size()) >= opt.max_intervals) {
            if (opt.throw_on_failure)
                throw NumericalError("adaptive quadrature did not converge", total_err);
            QuadResult<V> r{total, total_err, evals, false};
            return r;
        }
        Piece p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        double e1 = 0.0, e2 = 0.0;
        V left = detail::gk15<V>(f, p.a, m, e1);
        V right = detail::gk15<V>(f, m, p.b, e2);
        evals += 30;
        total += left;
        total += right;
        total -= p.value;
        total_err += e1 + e2 - p.err;
        heap.push({p.a, m, e1, left});
        heap.push({m, p.b, e2, right});
    }
    // Deterministic final summation order: by left endpoint.
    std::vector<Piece> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
    total = all.front().value;
    total_err = all.front().err;
    for (std::size_t i = 1; i < all.size(); ++i) {
        total += all[i].value;
        total_err += all[i].err;
    }
    return QuadResult<V>{total, total_err, evals, true};
}

// Integral over [a, inf) through t = a + u / (1 - u).
template <class F>
auto integrate_to_infinity(F&& f, double a, const QuadOptions& opt = {}) {
    auto g = [&](double u) {
        const double one_minus = 1.0 - u;
        const double t = a + u / one_minus;
        return f(t) * (1.0 / (one_minus * one_minus));
    };
    return integrate(g, 0.0, 1.0 - 1e-15, opt);
}

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [a, b] (Newton on Legendre polynomials).
inline GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        r.nodes[i] = c - h * x;
        r.nodes[n - 1 - i] = c + h * x;
        r.weights[i] = r.weights[n - 1 - i] = h * w;
    }
    return r;
}

// (2 pi i)^{-1} times the counter-clockwise integral over |alpha - c| = r,
// m-point trapezoid rule (spectrally accurate for analytic integrands).
template <class F>
cplx circle_integral(F&& f, cplx center, double radius, int m = 64) {
    cplx sum = 0.0;
    for (int j = 0; j < m; ++j) {
        const cplx e = std::polar(1.0, 2.0 * kPi * (j + 0.5) / m);
        sum += f(center + radius * e) * (radius * e);
    }
    return sum / static_cast<double>(m);
}

struct Extrapolation {
    cplx value;
    double error;
};

// Fits v(h) = v0 + sum_k c_k h^{p_k} through the samples (one unknown per
// sample beyond the constant; surplus exponents are ignored) and returns v0.
// The error estimate is the change in v0 when the last sample is dropped.
inline Extrapolation richardson(std::span<const double> h, std::span<const cplx> v,
                                std::span<const double> exponents) {
    const int m = static_cast<int>(h.size());
    if (m == 0 || v.size() != h.size()) throw ValidationError("richardson: bad sample set");
    if (static_cast<int>(exponents.size()) < m - 1)
        throw ValidationError("richardson: not enough exponents for the sample count");
    auto solve = [&](int count) {
        Eigen::MatrixXcd A(count, count);
        Eigen::VectorXcd rhs(count);
        for (int i = 0; i < count; ++i) {
            A(i, 0) = 1.0;
            for (int k = 1; k < count; ++k) A(i, k) = std::pow(h[i], exponents[k - 1]);
            rhs(i) = v[i];
        }
        return cplx(A.colPivHouseholderQr().solve(rhs)(0));
    };
    cplx full = solve(m);
    double err = m > 1 ? std::abs(full - solve(m - 1)) : std::numeric_limits<double>::infinity();
    return {full, err};
}

} // namespace lz
