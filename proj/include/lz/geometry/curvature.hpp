#pragma once

// Christoffel symbols, Riemann, Ricci and scalar curvature.
//
// Conventions (used everywhere in the library):
//   signature (+, -, ..., -)
//   Gamma^i_{jk} = 1/2 g^{il} (d_j g_{lk} + d_k g_{lj} - d_l g_{jk})
//   R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj} + Gamma^i_{km} Gamma^m_{lj} - Gamma^i_{lm} Gamma^m_{kj}
//   Ric_{kl} = R^i_{kil},  R = g^{kl} Ric_{kl}
// With these the unit round S^3 has R = +6 and dt^2 - h_{S^3} has R = -6.

#include "lz/geometry/metric.hpp"

#include <span>
#include <vector>

namespace lz {

struct CurvatureBundle {
    int n = 0;
    std::vector<double> point;
    std::vector<double> metric;       // g_{jk}
    std::vector<double> inverse;      // g^{jk}
    std::vector<double> christoffel;  // [i][j][k] = Gamma^i_{jk}
    std::vector<double> riemann;      // [i][j][k][l] = R^i_{jkl}
    std::vector<double> ricci;        // [k][l]
    double scalar = 0.0;

    double gamma(int i, int j, int k) const { return christoffel[(i * n + j) * n + k]; }
    double riem(int i, int j, int k, int l) const { return riemann[((i * n + j) * n + k) * n + l]; }
    double ric(int k, int l) const { return ricci[k * n + l]; }

    // R_{ijkl} = g_{im} R^m_{jkl}
    double riem_lower(int i, int j, int k, int l) const {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += metric[i * n + m] * riem(m, j, k, l);
        return s;
    }

    // Largest violation of antisymmetry, pair symmetry and the first Bianchi
    // identity, relative to the largest lowered component.
    double symmetry_defect() const {
        double scale = 1.0, worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) scale = std::max(scale, std::abs(riem_lower(i, j, k, l)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        const double r = riem_lower(i, j, k, l);
                        worst = std::max(worst, std::abs(r + riem_lower(j, i, k, l)));
                        worst = std::max(worst, std::abs(r + riem_lower(i, j, l, k)));
                        worst = std::max(worst, std::abs(r - riem_lower(k, l, i, j)));
                        worst = std::max(worst, std::abs(r + riem_lower(i, k, l, j) + riem_lower(i, l, j, k)));
                    }
        return worst / scale;
    }
};

// Gamma^i_{jk} from g^{il} and d_m g_{jk}; generic in the scalar type.
template <class S>
std::vector<S> christoffel_symbols(const std::vector<S>& ginv, const std::vector<S>& dg, int n) {
    std::vector<S> lowered(n * n * n, ginv[0] * 0.0);  // [l][j][k] = Gamma_{l jk}
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k)
                lowered[(l * n + j) * n + k] = lowered[(l * n + k) * n + j] =
                    0.5 * (dg[(j * n + l) * n + k] + dg[(k * n + l) * n + j] - dg[(l * n + j) * n + k]);
    std::vector<S> out(n * n * n, ginv[0] * 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                S s = ginv[0] * 0.0;
                for (int l = 0; l < n; ++l) s += ginv[i * n + l] * lowered[(l * n + j) * n + k];
                out[(i * n + j) * n + k] = out[(i * n + k) * n + j] = s;
            }
    return out;
}

// Curvature from metric jets of degree >= 2 at a point (any chart).
inline CurvatureBundle curvature_from_jets(const std::vector<Jet>& g, std::span<const double> point = {},
                                           double tol_det = 0.0) {
    if (g.empty() || g[0].degree() < 2) throw ValidationError("curvature needs metric jets of degree >= 2");
    const int n = g[0].nvars();
    std::vector<Jet> g1(n * n), dg(n * n * n);
    for (int j = 0; j < n * n; ++j) g1[j] = g[j].truncated(1);
    for (int m = 0; m < n; ++m)
        for (int jk = 0; jk < n * n; ++jk) dg[m * n * n + jk] = g[jk].derivative(m);
    auto inv = invert(g1, n, tol_det);
    auto gam = christoffel_symbols(inv.inv, dg, n);

    CurvatureBundle cb;
    cb.n = n;
    cb.point.assign(point.begin(), point.end());
    cb.metric.resize(n * n);
    cb.inverse.resize(n * n);
    for (int j = 0; j < n * n; ++j) {
        cb.metric[j] = g[j].value();
        cb.inverse[j] = inv.inv[j].value();
    }
    cb.christoffel.resize(n * n * n);
    for (int a = 0; a < n * n * n; ++a) cb.christoffel[a] = gam[a].value();
    auto G = [&](int i, int j, int k) { return cb.christoffel[(i * n + j) * n + k]; };
    auto dG = [&](int m, int i, int j, int k) { return gam[(i * n + j) * n + k].d(m); };
    cb.riemann.assign(n * n * n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double r = dG(k, i, l, j) - dG(l, i, k, j);
                    for (int m = 0; m < n; ++m) r += G(i, k, m) * G(m, l, j) - G(i, l, m) * G(m, k, j);
                    cb.riemann[((i * n + j) * n + k) * n + l] = r;
                }
    cb.ricci.assign(n * n, 0.0);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += cb.riem(i, k, i, l);
            cb.ricci[k * n + l] = s;
        }
    cb.scalar = 0.0;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) cb.scalar += cb.inverse[k * n + l] * cb.ricci[k * n + l];
    return cb;
}

inline CurvatureBundle curvature(const MetricField& m, std::span<const double> x) {
    return curvature_from_jets(m.jet(x, 2), x, m.tolerances().det);
}

} // namespace lz
