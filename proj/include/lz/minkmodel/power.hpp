#pragma once

// Constant-coefficient model layer: branched powers, Euclidean and Lorentzian
// power integrals over R^n, and the diagonal values of the model family
//   F_a(z, 0) = Gamma(a + 1) / (2 pi)^n * int (|xi|^2_eta - z - i0)^{-a-1} d^n xi.
//
// Each closed form is a hypothesis until validated against direct quadrature
// on its convergence region; the check runs once per process and the closed
// form is refused if it fails.

#include "lz/core/quadrature.hpp"
#include "lz/core/special.hpp"

#include <mutex>
#include <string>
#include <vector>

namespace lz {

// z^p with arg z taken in (cut - 2 pi, cut]. cut = pi is the principal branch.
class BranchedPower {
public:
    explicit BranchedPower(double cut = kPi) : cut_(cut) {}

    static BranchedPower principal() { return BranchedPower(kPi); }
    // Cut along the positive imaginary axis: arg in (-3 pi / 2, pi / 2].
    static BranchedPower cut_up() { return BranchedPower(kPi / 2); }

    double cut() const { return cut_; }

    double arg(cplx z) const {
        double a = std::arg(z);
        while (a > cut_) a -= 2 * kPi;
        while (a <= cut_ - 2 * kPi) a += 2 * kPi;
        return a;
    }

    cplx operator()(cplx z, cplx p) const {
        if (z == cplx(0.0)) {
            if (p.real() > 0) return 0.0;
            throw DomainError("branched power of zero with Re p <= 0");
        }
        return std::exp(p * cplx(std::log(std::abs(z)), arg(z)));
    }

private:
    double cut_;
};

// Surface area of the unit sphere S^{d-1} in R^d.
inline double sphere_area(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

struct ModelValue {
    cplx value;
    double error = 0.0;
};

// ---------------------------------------------------------------- Euclidean

// int_{R^n} (|xi|^2 - z)^{-a} d^n xi by radial quadrature; needs Re a > n/2.
inline ModelValue euclid_power_integral_direct(int n, cplx a, cplx z) {
    if (a.real() <= 0.5 * n) throw DomainError("direct Euclidean integral needs Re alpha > n/2");
    if (z.imag() == 0.0 && z.real() >= 0.0) throw DomainError("z must have Im z > 0 or be negative real");
    const auto P = BranchedPower::principal();
    QuadOptions q;
    q.abs_tol = 1e-15;
    q.rel_tol = 1e-12;
    auto f = [&](double r) { return std::pow(r, n - 1) * P(r * r - z, -a); };
    auto r = integrate_to_infinity(f, 0.0, q);
    return {sphere_area(n) * r.value, sphere_area(n) * r.error};
}

inline cplx euclid_power_integral_closed_unchecked(int n, cplx a, cplx z) {
    const auto P = BranchedPower::principal();
    return std::pow(kPi, 0.5 * n) * gamma(a - 0.5 * n) * rgamma(a) * P(-z, 0.5 * n - a);
}

// ---------------------------------------------------------------- Lorentzian

struct LorentzQuadOptions {
    std::vector<double> deltas = {1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4};
};

// int (-xi_0^2 + |xi|^2 - z)^{-a} e^{-delta |xi|^2} d^n xi in the variables
// u = r^2 - xi_0^2, v = r^2 + xi_0^2 (r = spatial radius). The v integral
// gives a weight G(u) that is smooth away from u = 0; the u integral is then
// split at 0 and at Re z, where the power is sharply peaked.
inline cplx lorentz_regulated(int n, double a, cplx z, double delta) {
    const auto P = BranchedPower::principal();
    const double area = sphere_area(n - 1);
    const double e = 0.5 * (n - 3);
    QuadOptions inner;
    inner.abs_tol = 0.0;
    inner.rel_tol = 1e-13;
    QuadOptions outer;
    outer.abs_tol = 0.0;
    outer.rel_tol = 1e-12;
    outer.max_intervals = 20000;
    // G(u) = int_{|u|}^inf r^{n-3} / (8 xi_0) e^{-delta v} dv, with v - |u| = t^2.
    auto weight = [&](double u) {
        const double au = std::abs(u);
        auto f = [&](double t) {
            const double t2 = t * t;
            const double damp = std::exp(-delta * (au + t2));
            if (u >= 0) return std::pow(0.5 * (2 * u + t2), e) * damp * (std::sqrt(2.0) / 4.0);
            return std::pow(0.5 * t2, e) * 2.0 * t / (8.0 * std::sqrt(0.5 * (2 * au + t2))) * damp;
        };
        return integrate_to_infinity(f, 0.0, inner).value;
    };
    auto g = [&](double u) { return P(u - z, -a) * weight(u); };
    const double lo = std::min(0.0, z.real()), hi = std::max(0.0, z.real());
    cplx s = integrate_to_infinity([&](double t) { return g(lo - t); }, 0.0, outer).value;
    if (hi > lo) s += integrate(g, lo, hi, outer).value;
    s += integrate_to_infinity(g, hi, outer).value;
    return 2.0 * area * s;
}

// Regulator extrapolation delta -> 0. The regulated integral behaves like
// L + c1 delta + c2 delta^{a - n/2} + c3 delta^2 + ..., so the fractional
// exponent joins the integer ones.
inline ModelValue lorentz_power_integral_direct(int n, double a, cplx z, const LorentzQuadOptions& opt = {}) {
    if (z.imag() <= 0) throw DomainError("direct Lorentzian integral needs Im z > 0");
    if (a <= 0.5 * n) throw DomainError("direct Lorentzian integral needs alpha > n/2");
    std::vector<double> ex = {1.0, 2.0, 3.0, a - 0.5 * n, a - 0.5 * n + 1.0};
    std::sort(ex.begin(), ex.end());
    ex.erase(std::unique(ex.begin(), ex.end(), [](double x, double y) { return std::abs(x - y) < 1e-9; }),
             ex.end());
    std::vector<cplx> vals;
    for (double d : opt.deltas) vals.push_back(lorentz_regulated(n, a, z, d));
    auto fit = richardson(opt.deltas, vals, ex);
    return {fit.value, fit.error};
}

inline cplx lorentz_power_integral_closed_unchecked(int n, cplx a, cplx z) {
    return kI * euclid_power_integral_closed_unchecked(n, a, z);
}

// ---------------------------------------------------------------- gate

struct GateReport {
    bool passed = false;
    double worst_euclid = 0.0;
    double worst_lorentz = 0.0;
    std::string detail;
};

class ClosedFormGate {
public:
    static const GateReport& report() {
        static GateReport r;
        static std::once_flag once;
        std::call_once(once, [] { r = run(); });
        return r;
    }

    static void require() {
        const auto& r = report();
        if (!r.passed) throw NumericalError("closed-form power integrals failed validation: " + r.detail);
    }

private:
    static GateReport run() {
        GateReport r;
        const cplx alphas[] = {3.0, cplx(3.5, 0.5), 4.25};
        const cplx zs[] = {-1.0, kI, cplx(-1.0, 0.5)};
        for (int n : {4, 6})
            for (cplx a : alphas) {
                cplx aa = a + (n == 6 ? 1.0 : 0.0);
                for (cplx z : zs) {
                    const auto d = euclid_power_integral_direct(n, aa, z);
                    const cplx c = euclid_power_integral_closed_unchecked(n, aa, z);
                    r.worst_euclid = std::max(r.worst_euclid, std::abs(d.value - c) / std::abs(c));
                }
            }
        const auto l = lorentz_power_integral_direct(4, 3.5, cplx(0.0, 2.0));
        const cplx lc = lorentz_power_integral_closed_unchecked(4, 3.5, cplx(0.0, 2.0));
        r.worst_lorentz = std::abs(l.value - lc) / std::abs(lc);
        r.passed = r.worst_euclid <= 1e-8 && r.worst_lorentz <= 1e-5;
        r.detail = "euclid " + std::to_string(r.worst_euclid) + ", lorentz " + std::to_string(r.worst_lorentz);
        return r;
    }
};

// ---------------------------------------------------------------- public

inline void check_pole(cplx s, const char* what) {
    if (std::abs(s.imag()) < 1e-14 && s.real() <= 0 && std::abs(s.real() - std::round(s.real())) < 1e-12)
        throw PoleError(std::string(what) + " evaluated at a pole");
}

inline cplx euclid_power_integral(int n, cplx a, cplx z) {
    ClosedFormGate::require();
    check_pole(a - 0.5 * n, "Euclidean power integral");
    return euclid_power_integral_closed_unchecked(n, a, z);
}

inline cplx lorentz_power_integral(int n, cplx a, cplx z) {
    ClosedFormGate::require();
    check_pole(a - 0.5 * n, "Lorentzian power integral");
    return lorentz_power_integral_closed_unchecked(n, a, z);
}

// Res_{alpha = k} of the Euclidean integral, k = n/2 - j:
//   pi^{n/2} z^{n/2 - k} / ((n/2 - k)! Gamma(k)).
inline cplx euclid_residue(int n, int k, cplx z) {
    const int j = n / 2 - k;
    if (j < 0 || n % 2) throw ValidationError("no pole of the Euclidean integral at this alpha");
    return std::pow(kPi, 0.5 * n) * std::pow(z, j) / (std::tgamma(j + 1.0) * std::tgamma(static_cast<double>(k)));
}

inline cplx lorentz_residue(int n, int k, cplx z) { return kI * euclid_residue(n, k, z); }

// F_a(z, 0) = Gamma(a + 1) / (2 pi)^n * Lorentzian(n, a + 1, z)
//           = i (4 pi)^{-n/2} Gamma(a + 1 - n/2) (-z)^{n/2 - 1 - a}.
inline cplx F_diagonal(int n, cplx a, cplx z) {
    if (z == cplx(0.0)) throw DomainError("F_diagonal needs z != 0");
    ClosedFormGate::require();
    check_pole(a + 1.0 - 0.5 * n, "F_diagonal");
    const auto P = BranchedPower::principal();
    return kI * std::pow(4 * kPi, -0.5 * n) * gamma(a + 1.0 - 0.5 * n) * P(-z, 0.5 * n - 1.0 - a);
}

// Same value through the normalisation Gamma(a + 1)/(2 pi)^n of the
// Lorentzian integral (fails where Gamma(a + 1) has poles).
inline cplx F_diagonal_via_integral(int n, cplx a, cplx z) {
    return gamma(a + 1.0) / std::pow(2 * kPi, n) * lorentz_power_integral(n, a + 1.0, z);
}

// Poles of a -> F_a(z, 0) are at a = n/2 - 1 - m with residue
// i (4 pi)^{-n/2} (-1)^m / m! (-z)^m.
inline double F_pole(int n, int m) { return 0.5 * n - 1.0 - m; }

inline cplx F_residue(int n, int m, cplx z) {
    return kI * std::pow(4 * kPi, -0.5 * n) * ((m % 2) ? -1.0 : 1.0) / std::tgamma(m + 1.0) * std::pow(-z, m);
}

} // namespace lz
