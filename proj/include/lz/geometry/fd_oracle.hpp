#pragma once

// Finite-difference curvature, kept independent of the jet path as an oracle:
// Christoffel symbols from central differences of the metric values, Riemann
// from central differences of those.

#include "lz/geometry/metric.hpp"

#include <Eigen/Dense>

#include <vector>

namespace lz::oracle {

inline std::vector<double> fd_christoffel(const MetricField& m, std::vector<double> x, double h) {
    const int n = m.dim();
    Eigen::MatrixXd ginv = m.matrix(x).inverse();
    std::vector<Eigen::MatrixXd> dg(n);
    for (int k = 0; k < n; ++k) {
        auto xp = x, xm = x, xpp = x, xmm = x;
        xp[k] += h;
        xm[k] -= h;
        xpp[k] += 2 * h;
        xmm[k] -= 2 * h;
        dg[k] = (8.0 * (m.matrix(xp) - m.matrix(xm)) - (m.matrix(xpp) - m.matrix(xmm))) / (12.0 * h);
    }
    std::vector<double> G(n * n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    s += 0.5 * ginv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
                G[(i * n + j) * n + k] = s;
            }
    return G;
}

struct FdCurvature {
    std::vector<double> riemann;
    double scalar;
};

inline FdCurvature fd_curvature(const MetricField& m, const std::vector<double>& x, double h = 1e-3) {
    const int n = m.dim();
    auto G = fd_christoffel(m, x, h);
    std::vector<std::vector<double>> dG(n);
    for (int k = 0; k < n; ++k) {
        auto xp = x, xm = x, xpp = x, xmm = x;
        xp[k] += h;
        xm[k] -= h;
        xpp[k] += 2 * h;
        xmm[k] -= 2 * h;
        auto a = fd_christoffel(m, xp, h), b = fd_christoffel(m, xm, h);
        auto c = fd_christoffel(m, xpp, h), d = fd_christoffel(m, xmm, h);
        dG[k].resize(a.size());
        for (std::size_t q = 0; q < a.size(); ++q) dG[k][q] = (8.0 * (a[q] - b[q]) - (c[q] - d[q])) / (12.0 * h);
    }
    auto g = [&](int i, int j, int k) { return G[(i * n + j) * n + k]; };
    FdCurvature out;
    out.riemann.assign(n * n * n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double r = dG[k][(i * n + l) * n + j] - dG[l][(i * n + k) * n + j];
                    for (int p = 0; p < n; ++p) r += g(i, k, p) * g(p, l, j) - g(i, l, p) * g(p, k, j);
                    out.riemann[((i * n + j) * n + k) * n + l] = r;
                }
    Eigen::MatrixXd ginv = m.matrix(x).inverse();
    out.scalar = 0.0;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            double ric = 0.0;
            for (int i = 0; i < n; ++i) ric += out.riemann[((i * n + k) * n + i) * n + l];
            out.scalar += ginv(k, l) * ric;
        }
    return out;
}

} // namespace lz::oracle
