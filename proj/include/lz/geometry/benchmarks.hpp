#pragma once

// Built-in metrics used by tests, demos and the acceptance suite. The same
// definitions ship as JSON under share/metrics.

#include "lz/geometry/metric.hpp"

#include <string>
#include <vector>

namespace lz::benchmarks {

struct Benchmark {
    std::string name;
    MetricField metric;
    std::vector<double> point;
};

inline MetricField minkowski(int n = 4) {
    std::vector<std::string> coords;
    std::vector<std::vector<std::string>> g(n, std::vector<std::string>(n, "0"));
    for (int i = 0; i < n; ++i) {
        coords.push_back("x" + std::to_string(i));
        g[i][i] = i == 0 ? "1" : "-1";
    }
    return MetricField(n, Signature::Lorentzian, coords, g);
}

// dt^2 - r^2 (dchi^2 + sin^2 chi (dth^2 + sin^2 th dph^2))
inline MetricField einstein_static(double radius = 1.0) {
    const std::string r2 = std::to_string(radius * radius);
    return MetricField(4, Signature::Lorentzian, {"t", "chi", "th", "ph"},
                       {{"1", "0", "0", "0"},
                        {"0", "-" + r2, "0", "0"},
                        {"0", "0", "-" + r2 + "*sin(chi)^2", "0"},
                        {"0", "0", "0", "-" + r2 + "*sin(chi)^2*sin(th)^2"}},
                       ChartDomain{{-1e3, 0.05, 0.05, -1e3}, {1e3, 3.09, 3.09, 1e3}});
}

// Minkowski plus a polynomial perturbation with no symmetry.
inline MetricField polynomial_perturbation() {
    return MetricField(4, Signature::Lorentzian, {"x0", "x1", "x2", "x3"},
                       {{"1 + 0.1*x1^2 + 0.05*x0*x2", "0.03*x2*x3", "0.02*x0*x1", "0"},
                        {"0.03*x2*x3", "-1 - 0.08*x0^2 + 0.02*x1*x3", "0.04*x0*x1", "0.01*x2^2"},
                        {"0.02*x0*x1", "0.04*x0*x1", "-1 + 0.05*x3^2 - 0.03*x1*x2", "0.02*x1^2"},
                        {"0", "0.01*x2^2", "0.02*x1^2", "-1 - 0.06*x0*x2 + 0.04*x1^3"}},
                       ChartDomain{{-2, -2, -2, -2}, {2, 2, 2, 2}});
}

// Flat slicing of de Sitter space with unit Hubble rate.
inline MetricField de_sitter() {
    return MetricField(4, Signature::Lorentzian, {"t", "x", "y", "z"},
                       {{"1", "0", "0", "0"},
                        {"0", "-exp(2*t)", "0", "0"},
                        {"0", "0", "-exp(2*t)", "0"},
                        {"0", "0", "0", "-exp(2*t)"}});
}

// Spatially flat FLRW with scale factor 1 + 0.3 t^2.
inline MetricField flrw() {
    const std::string a2 = "-(1 + 0.3*t^2)^2";
    return MetricField(4, Signature::Lorentzian, {"t", "x", "y", "z"},
                       {{"1", "0", "0", "0"}, {"0", a2, "0", "0"}, {"0", "0", a2, "0"}, {"0", "0", "0", a2}},
                       ChartDomain{{-1.5, -1e3, -1e3, -1e3}, {1.5, 1e3, 1e3, 1e3}});
}

// Schwarzschild exterior, unit mass.
inline MetricField schwarzschild() {
    return MetricField(4, Signature::Lorentzian, {"t", "r", "th", "ph"},
                       {{"1 - 2/r", "0", "0", "0"},
                        {"0", "-1/(1 - 2/r)", "0", "0"},
                        {"0", "0", "-r^2", "0"},
                        {"0", "0", "0", "-r^2*sin(th)^2"}},
                       ChartDomain{{-1e3, 3.0, 0.05, -1e3}, {1e3, 1e3, 3.09, 1e3}});
}

inline MetricField round_sphere2(double radius = 1.0) {
    const std::string r2 = std::to_string(radius * radius);
    return MetricField(2, Signature::Riemannian, {"th", "ph"}, {{r2, "0"}, {"0", r2 + "*sin(th)^2"}},
                       ChartDomain{{0.01, -1e3}, {3.13, 1e3}});
}

inline MetricField round_sphere3(double radius = 1.0) {
    const std::string r2 = std::to_string(radius * radius);
    return MetricField(3, Signature::Riemannian, {"chi", "th", "ph"},
                       {{r2, "0", "0"}, {"0", r2 + "*sin(chi)^2", "0"}, {"0", "0", r2 + "*sin(chi)^2*sin(th)^2"}},
                       ChartDomain{{0.05, 0.05, -1e3}, {3.09, 3.09, 1e3}});
}

// S^3(r) x S^1, Riemannian product.
inline MetricField sphere3_times_circle(double radius = 1.0) {
    const std::string r2 = std::to_string(radius * radius);
    return MetricField(4, Signature::Riemannian, {"chi", "th", "ph", "w"},
                       {{r2, "0", "0", "0"},
                        {"0", r2 + "*sin(chi)^2", "0", "0"},
                        {"0", "0", r2 + "*sin(chi)^2*sin(th)^2", "0"},
                        {"0", "0", "0", "1"}},
                       ChartDomain{{0.05, 0.05, -1e3, -1e3}, {3.09, 3.09, 1e3, 1e3}});
}

// Lorentzian benchmarks with their sample points.
inline std::vector<Benchmark> lorentzian_suite() {
    return {
        {"einstein_static", einstein_static(), {0.0, 1.0, 1.0, 0.0}},
        {"polynomial_perturbation", polynomial_perturbation(), {0.1, 0.2, -0.1, 0.3}},
        {"de_sitter", de_sitter(), {0.2, 0.1, -0.3, 0.5}},
        {"flrw", flrw(), {0.4, 0.0, 0.0, 0.0}},
        {"schwarzschild", schwarzschild(), {0.0, 10.0, 1.0, 0.0}},
    };
}

} // namespace lz::benchmarks
