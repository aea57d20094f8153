#pragma once

// The wave operator P f = d_j (g^{jk} d_k f) + b^k d_k f with
// b^k = |g|^{-1/2} g^{jk} d_j |g|^{1/2}, i.e. the Laplace-Beltrami operator
// |g|^{-1/2} d_j (|g|^{1/2} g^{jk} d_k f). Everything here acts on jets, so it
// works in the native chart and in normal charts alike.

#include "lz/geometry/curvature.hpp"
#include "lz/geometry/metric.hpp"

#include <span>
#include <vector>

namespace lz {

namespace detail {

inline std::vector<Jet> truncate_all(const std::vector<Jet>& v, int degree) {
    std::vector<Jet> out;
    out.reserve(v.size());
    for (const auto& j : v) out.push_back(j.truncated(degree));
    return out;
}

inline Jet abs_det(const Jet& det) { return det.value() < 0 ? -det : det; }

} // namespace detail

// b^k as jets of degree deg(g) - 1 via the log-determinant gradient.
inline std::vector<Jet> b_vector_jets(const std::vector<Jet>& g, double tol_det = 0.0) {
    const int n = g[0].nvars();
    const int d = g[0].degree();
    if (d < 1) throw ValidationError("b_vector needs metric jets of degree >= 1");
    auto inv = invert(g, n, tol_det);
    const Jet half_log = 0.5 * log(detail::abs_det(inv.det));
    std::vector<Jet> out(n, Jet(JetSpace::get(n, d - 1)));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) out[k] += inv.inv[j * n + k].truncated(d - 1) * half_log.derivative(j);
    return out;
}

// Second path: b^k = g^{jk} Gamma^l_{lj}.
inline std::vector<Jet> b_vector_jets_christoffel(const std::vector<Jet>& g, double tol_det = 0.0) {
    const int n = g[0].nvars();
    const int d = g[0].degree();
    if (d < 1) throw ValidationError("b_vector needs metric jets of degree >= 1");
    auto gd = detail::truncate_all(g, d - 1);
    auto inv = invert(gd, n, tol_det);
    std::vector<Jet> dg(n * n * n);
    for (int m = 0; m < n; ++m)
        for (int jk = 0; jk < n * n; ++jk) dg[m * n * n + jk] = g[jk].derivative(m);
    auto gam = christoffel_symbols(inv.inv, dg, n);
    std::vector<Jet> out(n, Jet(JetSpace::get(n, d - 1)));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            Jet tr(JetSpace::get(n, d - 1));
            for (int l = 0; l < n; ++l) tr += gam[(l * n + l) * n + j];
            out[k] += inv.inv[j * n + k] * tr;
        }
    return out;
}

inline std::vector<double> b_vector(const MetricField& m, std::span<const double> x) {
    auto b = b_vector_jets(m.jet(x, 1), m.tolerances().det);
    std::vector<double> out;
    for (const auto& j : b) out.push_back(j.value());
    return out;
}

inline std::vector<double> b_vector_christoffel(const MetricField& m, std::span<const double> x) {
    auto b = b_vector_jets_christoffel(m.jet(x, 1), m.tolerances().det);
    std::vector<double> out;
    for (const auto& j : b) out.push_back(j.value());
    return out;
}

// P f in divergence form |g|^{-1/2} d_j(|g|^{1/2} g^{jk} d_k f). The result
// has degree min(deg g - 1, deg f - 2).
inline Jet apply_P_jets(const std::vector<Jet>& g, const Jet& f, double tol_det = 0.0) {
    const int n = f.nvars();
    if (f.degree() < 2) throw ValidationError("apply_P needs at least two orders of jet data");
    if (g[0].degree() < 1) throw ValidationError("apply_P needs metric jets of degree >= 1");
    const int d = std::min(g[0].degree() - 1, f.degree() - 2);
    auto gd = detail::truncate_all(g, d + 1);
    auto inv = invert(gd, n, tol_det);
    const Jet vol = sqrt(detail::abs_det(inv.det));
    Jet out(JetSpace::get(n, d));
    for (int j = 0; j < n; ++j) {
        Jet flux(JetSpace::get(n, d + 1));
        for (int k = 0; k < n; ++k) flux += inv.inv[j * n + k] * f.derivative(k).truncated(d + 1);
        out += (vol * flux).derivative(j);
    }
    return out * reciprocal(vol.truncated(d));
}

// Expanded form g^{jk} d_j d_k f + (d_j g^{jk}) d_k f + b^k d_k f.
inline Jet apply_P_expanded_jets(const std::vector<Jet>& g, const Jet& f, double tol_det = 0.0) {
    const int n = f.nvars();
    if (f.degree() < 2) throw ValidationError("apply_P needs at least two orders of jet data");
    const int d = std::min(g[0].degree() - 1, f.degree() - 2);
    auto inv = invert(detail::truncate_all(g, d + 1), n, tol_det);
    auto b = b_vector_jets_christoffel(detail::truncate_all(g, d + 1), tol_det);
    Jet out(JetSpace::get(n, d));
    for (int k = 0; k < n; ++k) {
        const Jet fk = f.derivative(k);
        Jet coef = b[k];
        for (int j = 0; j < n; ++j) {
            out += inv.inv[j * n + k].truncated(d) * fk.derivative(j).truncated(d);
            coef += inv.inv[j * n + k].derivative(j);
        }
        out += coef * fk.truncated(d);
    }
    return out;
}

// (P f)(x) for an expression f in the chart variables of m.
inline double apply_P(const MetricField& m, const Expr& f, std::span<const double> x) {
    const auto& sp = JetSpace::get(m.dim(), 2);
    std::vector<Jet> vars;
    for (int i = 0; i < m.dim(); ++i) vars.push_back(Jet::variable(sp, i, x[i]));
    return apply_P_jets(m.jet(x, 1), f.eval<Jet>(vars), m.tolerances().det).value();
}

inline double apply_P_expanded(const MetricField& m, const Expr& f, std::span<const double> x) {
    const auto& sp = JetSpace::get(m.dim(), 2);
    std::vector<Jet> vars;
    for (int i = 0; i < m.dim(); ++i) vars.push_back(Jet::variable(sp, i, x[i]));
    return apply_P_expanded_jets(m.jet(x, 1), f.eval<Jet>(vars), m.tolerances().det).value();
}

} // namespace lz
