// Acceptance report: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "lz/geometry/benchmarks.hpp"
#include "lz/geometry/curvature.hpp"
#include "lz/hadamard/transport.hpp"
#include "lz/minkmodel/contour.hpp"
#include "lz/specoracle/mode_sum.hpp"
#include "lz/specoracle/riemannian.hpp"
#include "lz/zeta/density.hpp"
#include "lz/zeta/spectral_action.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>

namespace {

using namespace lz;
namespace bm = lz::benchmarks;
using Clock = std::chrono::steady_clock;

struct Checks {
    bool ok = true;
    std::vector<std::string> parts;

    void le(const std::string& what, double measured, double tol) {
        const bool pass = measured <= tol;
        ok = ok && pass;
        parts.push_back(fmt::format("{} {:.2e}{}{:.0e}", what, measured, pass ? " <= " : " > ", tol));
    }
    void ge(const std::string& what, double measured, double tol) {
        const bool pass = measured >= tol;
        ok = ok && pass;
        parts.push_back(fmt::format("{} {:.2e}{}{:.0e}", what, measured, pass ? " >= " : " < ", tol));
    }
    void flag(const std::string& what, bool pass) {
        ok = ok && pass;
        parts.push_back(what + (pass ? " yes" : " NO"));
    }
    void note(const std::string& s) { parts.push_back(s); }
};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

const std::vector<double> kEsuPoint = {0.0, 1.0, 1.0, 0.0};

cplx mode_residue(const SpectralModel& m, double alpha0, double eps) {
    return circle_integral([&](cplx a) { return continue_mode_zeta(m, a, eps).value; }, alpha0, 0.05);
}

// 1. Scalar-curvature residue on the Einstein static universe.
void einstein_universe(Checks& c) {
    const auto t0 = Clock::now();
    const double R = curvature(bm::einstein_static(), kEsuPoint).scalar;
    const cplx want = -kI * R / (96 * kPi * kPi);
    const auto S = SpectralModel::sphere3(1.0, 100.0);
    const auto modes = extrapolate_epsilon([&](double e) { return mode_residue(S, 1.0, e); });
    const auto base = MeromorphicDensity::from_hadamard(transport_solve(bm::einstein_static(), kEsuPoint, 1), 4, 0.1);
    const auto param = extrapolate_epsilon([&](double e) { return base.with_epsilon(e).residue_at(1.0).analytic; });
    c.note(fmt::format("R = {:.12g}", R));
    c.le("mode rel", rel(modes.extrapolated, want), 1e-3);
    c.le("parametrix rel", rel(param.extrapolated, want), 1e-3);
    c.le("parametrix vs mode", rel(param.extrapolated, modes.extrapolated), 1e-3);
    c.le("time s", seconds_since(t0), 300);
}

// 2. Flat cylinder R x T^3.
void flat_cylinder(Checks& c) {
    const auto T = SpectralModel::torus(3, 2 * kPi, 100.0);
    const auto r1 = extrapolate_epsilon([&](double e) { return mode_residue(T, 1.0, e); });
    const auto r2 = extrapolate_epsilon([&](double e) { return mode_residue(T, 2.0, e); });
    const double scale = std::abs(r2.extrapolated);
    c.le("mode |res 1| / |res 2|", std::abs(r1.extrapolated) / scale, 1e-6);
    const auto base = MeromorphicDensity::from_hadamard(transport_solve(bm::minkowski(), std::vector<double>(4, 0.0), 1), 4, 0.1);
    const auto p1 = extrapolate_epsilon([&](double e) { return base.with_epsilon(e).residue_at(1.0).analytic; });
    c.le("parametrix |res 1| / |res 2|", std::abs(p1.extrapolated) / scale, 1e-6);
}

// 3. Pole set {2, 1} for N = 2, nothing at 9 random off-lattice points.
void pole_set(Checks& c) {
    const auto base = MeromorphicDensity::from_hadamard(transport_solve(bm::einstein_static(), kEsuPoint, 2), 4, 0.1);
    const auto S = SpectralModel::sphere3(1.0, 100.0);
    const std::function<cplx(cplx)> param = [&](cplx a) { return base.evaluate(a).value; };
    const std::function<cplx(cplx)> modes = [&](cplx a) { return continue_mode_zeta(S, a, 0.1).value; };
    std::mt19937 rng(1729);
    std::uniform_real_distribution<double> U(-1.0, 3.5), V(-1.0, 1.0);
    std::vector<cplx> random;
    while (random.size() < 9) {
        const cplx z(U(rng), V(rng));
        if (std::abs(z.imag()) < 0.2 && std::abs(2 * z.real() - std::round(2 * z.real())) < 0.4) continue;
        random.push_back(z);
    }
    for (const auto& [name, f] : {std::pair{"parametrix", param}, std::pair{"mode", modes}}) {
        std::set<double> found;
        double weakest = 1e300;
        for (double p : {3.0, 2.5, 2.0, 1.5, 1.0, 0.5, 0.0, -0.5, -1.0}) {
            const double r = std::abs(circle_integral(f, p, 0.05));
            if (r > 1e-8) found.insert(p);
            if (p == 2.0 || p == 1.0) weakest = std::min(weakest, r);
        }
        c.flag(std::string(name) + " poles {2,1}", found == std::set<double>{1.0, 2.0});
        c.note(fmt::format("weakest pole {:.2e}", weakest));
        double worst = 0.0;
        for (cplx z : random) worst = std::max(worst, std::abs(circle_integral(f, z, 0.05)));
        c.le(std::string(name) + " off-lattice", worst, 1e-8);
    }
}

// 4. u_1(x, x) = -R/6 along two paths.
void hadamard_identity(Checks& c) {
    double paths = 0.0, curv = 0.0, slowest = 0.0;
    int count = 0;
    for (const auto& b : bm::lorentzian_suite()) {
        const auto t0 = Clock::now();
        const double R = curvature(b.metric, b.point).scalar;
        const double u1 = transport_solve(b.metric, b.point, 1).diag_values[1];
        const double direct = diagonal_u1_direct(b.metric, b.point);
        paths = std::max(paths, std::abs(u1 - direct));
        curv = std::max({curv, std::abs(u1 + R / 6.0), std::abs(direct + R / 6.0)});
        slowest = std::max(slowest, seconds_since(t0));
        ++count;
    }
    c.note(fmt::format("{} metrics incl. polynomial_perturbation", count));
    c.ge("metrics", count, 4);
    c.le("transport vs direct", paths, 1e-5);
    c.le("vs -R/6", curv, 1e-4);
    c.le("slowest metric s", slowest, 120);
}

// 5. Euclidean toy residues and the Wick factor.
void euclidean_toy(Checks& c) {
    c.flag("closed forms validated", ClosedFormGate::report().passed);
    double worst = 0.0, wick = 0.0;
    for (int k : {1, 2})
        for (cplx z : {kI, cplx(-1.0, 0.5)}) {
            const cplx num = circle_integral([&](cplx a) { return euclid_power_integral(4, a, z); }, double(k), 0.05);
            const cplx formula = std::pow(z, 2 - k) * kPi * kPi / (std::tgamma(3.0 - k) * std::tgamma(double(k)));
            worst = std::max(worst, rel(num, formula));
            const cplx lor = circle_integral([&](cplx a) { return lorentz_power_integral(4, a, z); }, double(k), 0.05);
            wick = std::max(wick, std::abs(lor / num - kI));
        }
    c.le("residue rel", worst, 1e-6);
    c.le("|L/E - i|", wick, 1e-6);
}

// 6. Riemannian products.
void riemannian(Checks& c) {
    const double R = curvature(bm::sphere3_times_circle(), std::vector<double>{1.0, 1.0, 0.0, 0.0}).scalar;
    const auto s = riemannian_residue(ProductManifold::sphere3_circle(1.0, 2 * kPi));
    c.le("S3xS1 rel", std::abs(s.residue / riemannian_residue_prediction(4, R) - 1.0), 1e-3);
    c.le("T4 abs", std::abs(riemannian_residue(ProductManifold::torus(4, 2 * kPi)).residue), 1e-6);
}

// 7. Contour functional calculus.
void contour(Checks& c) {
    const ContourGamma g(0.1);
    const auto P = BranchedPower::principal();
    double worst = 0.0, rmin = 1e300, rmax = 0.0;
    bool bounds = true;
    for (double w : {-3.0, -1.0, 0.2, 1.0, 5.0})
        for (double a : {0.5, 1.0, 1.7, 2.5, 3.3}) {
            const auto r = contour_power_scalar(w, a, g);
            const double e = std::abs(r.value - P(cplx(w, -0.1), -a));
            worst = std::max(worst, e);
            bounds = bounds && e <= r.error;
            rmin = std::min(rmin, r.truncation);
            rmax = std::max(rmax, r.truncation);
        }
    c.le("max error", worst, 1e-7);
    c.flag("estimate bounds every cell", bounds);
    c.note(fmt::format("R_max {:.3g}..{:.3g}", rmin, rmax));
}

// 8. Spectral-action expansion.
void spectral_action(Checks& c) {
    const auto f = TestFunction::bump();
    const auto gl = gauss_legendre(400, 1.0, 2.0);
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        m0 += gl.weights[i] * f(gl.nodes[i]);
        m1 += gl.weights[i] * f(gl.nodes[i]) * gl.nodes[i];
    }
    c.le("C0 = i m1", rel(cc_coefficients(f, 4, 0).C, kI * m1), 1e-10);
    c.le("C1 = m0", rel(cc_coefficients(f, 4, 1, -6.0).C, cplx(m0)), 1e-10);
    const auto torus = cc_expansion_check(SpectralModel::torus(3, 2 * kPi, 1e3), f, default_lambda_grid(), 1e-2, 0.0);
    c.le("torus C0 a0 rel", torus.rel_error_leading, 1e-2);
    const double R = curvature(bm::einstein_static(), kEsuPoint).scalar;
    const auto esu = cc_expansion_check(SpectralModel::sphere3(1.0, 1e3), f, default_lambda_grid(), 1e-2, R);
    c.le("ESU C1 a1 rel", esu.rel_error_subleading, 5e-2);
}

// 9. Property suites with fixed seeds.
void properties(Checks& c, Clock::time_point start) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    double gam = 0.0;
    for (int t = 0; t < 50; ++t) {
        const cplx a(U(rng), U(rng));
        for (int m = 0; m <= 8; ++m)
            gam = std::max(gam, std::abs(series_coefficient(a, m) - rgamma(a)) / std::max(1.0, std::abs(rgamma(a))));
    }
    c.le("Gamma identity", gam, 1e-11);

    std::mt19937 rng2(20261016);
    std::uniform_real_distribution<double> W(-0.3, 0.3);
    bool sym = true;
    for (const auto& b : bm::lorentzian_suite())
        for (int t = 0; t < 100; ++t) {
            auto x = b.point;
            for (auto& v : x) v += W(rng2);
            sym = sym && curvature(b.metric, x).symmetry_defect() <= b.metric.tolerances().tensor;
        }
    c.flag("Riemann symmetries", sym);

    bool transport = true;
    for (const auto& b : bm::lorentzian_suite()) {
        TransportSolver solver(b.metric, b.point);
        std::mt19937 rng3(11);
        std::uniform_real_distribution<double> Y(-0.1, 0.1);
        for (int t = 0; t < 50; ++t) {
            std::vector<double> y = {Y(rng3), Y(rng3), Y(rng3), Y(rng3)};
            for (int k = 0; k <= 2; ++k) {
                if (k == 2 && t % 5 != 0) continue;
                transport = transport && solver.residual(k, y) <= solver.options().tol * (1.0 + std::abs(solver.u(k, y)));
            }
        }
    }
    c.flag("transport residuals", transport);

    std::mt19937 rng4(7);
    std::uniform_real_distribution<double> A(0.3, 3.7), B(-1.0, 1.0), Z(0.2, 2.0), L(0.5, 3.0);
    double hom = 0.0;
    for (int t = 0; t < 40; ++t) {
        const cplx a(A(rng4), B(rng4)), z(B(rng4), Z(rng4));
        if (std::abs(a.imag()) < 0.05 && std::abs(a.real() - std::round(a.real())) < 0.05) continue;
        const double lam = L(rng4);
        hom = std::max(hom, rel(F_diagonal(4, a, lam * lam * z), std::pow(lam, 2.0 - 2.0 * a) * F_diagonal(4, a, z)));
    }
    c.le("F homogeneity", hom, 1e-9);
    c.le("acceptance time s", seconds_since(start), 900);
}

} // namespace

int main() {
    const auto start = Clock::now();
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Checks&)> run;
    };
    const std::vector<Criterion> all = {
        {1, "curvature residue, Einstein universe", einstein_universe},
        {2, "flat cylinder null residue", flat_cylinder},
        {3, "pole set", pole_set},
        {4, "u_1 = -R/6", hadamard_identity},
        {5, "Euclidean toy residues and Wick factor", euclidean_toy},
        {6, "Riemannian cross-check", riemannian},
        {7, "contour functional calculus", contour},
        {8, "spectral-action expansion", spectral_action},
        {9, "property suites", [&](Checks& c) { properties(c, start); }},
    };
    int failed = 0;
    for (const auto& cr : all) {
        Checks c;
        const auto t0 = Clock::now();
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            c.ok = false;
            c.note(std::string("threw: ") + e.what());
        }
        std::string detail;
        for (std::size_t i = 0; i < c.parts.size(); ++i) detail += (i ? "; " : "") + c.parts[i];
        std::printf("%s %d %s: %s [%.1f s]\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name, detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
        failed += c.ok ? 0 : 1;
    }
    return failed ? 1 : 0;
}
