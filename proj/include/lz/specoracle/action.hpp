#pragma once

// f((P +- i eps) / Lambda^2)(x, x) on an ultrastatic spacetime by mode sums.
//
// The test function is given through f_hat, supported in [lo, hi] with lo > 0,
// and paired as
//   f(w) = int f_hat(s) e^{i w / s} ds / s,
// which extends holomorphically to Im w >= 0. With this pairing the flat-space
// diagonal is Lambda^n C_0(f) (4 pi)^{-n/2} with C_0 as in the expansion of
// the spectral action. The tau integral is Gaussian,
//   int e^{-i tau^2 / (s Lambda^2)} dtau = Lambda sqrt(pi s) e^{-i pi / 4},
// so
//   value = Lambda e^{-i pi/4} / (2 sqrt(pi)) sum_j w_j g_j,
//   g_j = int f_hat(1/u) u^{-3/2} e^{i (lambda_j +- i eps) u / Lambda^2} du,  u = 1/s.
// g_j decays faster than any power of lambda_j, which fixes the truncation.

#include "lz/core/expr.hpp"
#include "lz/core/parallel.hpp"
#include "lz/core/quadrature.hpp"
#include "lz/specoracle/model.hpp"

#include <string>

namespace lz {

class TestFunction {
public:
    TestFunction(std::string expression, double lower, double upper, double scale = 1.0)
        : text_(std::move(expression)), expr_(Expr::parse(text_, {"t"})), lo_(lower), hi_(upper), scale_(scale) {
        if (!(lower > 0)) throw ValidationError("f_hat support must start above 0");
        if (!(upper > lower) || !std::isfinite(upper)) throw ValidationError("f_hat support must be a bounded interval");
        if (!(scale > 0)) throw ValidationError("f_hat scale must be > 0");
    }

    // exp(-1 / ((t - 1)(2 - t))) on [1, 2].
    static TestFunction bump() { return TestFunction("exp(-1/((t-1)*(2-t)))", 1.0, 2.0); }

    const std::string& expression() const { return text_; }
    double scale() const { return scale_; }
    double lower() const { return scale_ * lo_; }
    double upper() const { return scale_ * hi_; }

    // t -> f_hat(t / sigma)
    TestFunction rescaled(double sigma) const { return TestFunction(text_, lo_, hi_, scale_ * sigma); }

    double operator()(double t) const {
        const double x = t / scale_;
        if (x <= lo_ || x >= hi_) return 0.0;
        const double v[1] = {x};
        return expr_.eval<double>(v);
    }

    // int f_hat(t) t^p dt
    double moment(double p, double tol = 1e-13) const {
        QuadOptions q;
        q.abs_tol = 0.0;
        q.rel_tol = tol;
        return integrate([&](double t) { return (*this)(t) * std::pow(t, p); }, lower(), upper(), q).value;
    }

private:
    std::string text_;
    Expr expr_;
    double lo_, hi_, scale_;
};

struct ActionResult {
    cplx value;
    double error = 0.0;
    std::size_t shells_used = 0;
    double kappa_max = 0.0;  // largest lambda / Lambda^2 kept
    int nodes = 0;
};

struct ActionOptions {
    double tol = 1e-11;   // relative truncation target
    int panel_nodes = 16;
};

namespace detail {

// Inverse-variable rule on [1/hi, 1/lo] with panels of phase <= 2 pi / refine at kappa_max.
inline GaussRule action_rule(const TestFunction& f, double kappa_max, int panel_nodes, int refine) {
    const double a = 1.0 / f.upper(), b = 1.0 / f.lower();
    const int panels = refine * std::max(32, static_cast<int>(std::ceil(kappa_max * (b - a) / (2 * kPi))));
    const auto gl = gauss_legendre(panel_nodes);
    GaussRule r;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
        for (int i = 0; i < panel_nodes; ++i) {
            r.nodes.push_back(a + h * (p + 0.5 * (gl.nodes[i] + 1.0)));
            r.weights.push_back(0.5 * h * gl.weights[i]);
        }
    return r;
}

inline cplx action_profile(const TestFunction& f, double kappa, double damp, int panel_nodes, double kappa_rule = -1,
                           int refine = 2) {
    const auto rule = action_rule(f, kappa_rule < 0 ? kappa : kappa_rule, panel_nodes, refine);
    cplx s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = rule.nodes[i];
        s += rule.weights[i] * f(1.0 / u) * std::pow(u, -1.5) * std::exp(cplx(-damp * u, kappa * u));
    }
    return s;
}

// sum_i h_i sum_{j < K} w_j e^{i lambda_j nu_i}
inline cplx oscillatory_sum(const SpectralModel& m, std::size_t K, const std::vector<double>& nu,
                            const std::vector<cplx>& h) {
    const std::size_t chunks = std::min<std::size_t>(nu.size(), 64);
    std::vector<cplx> partial(chunks, 0.0);
    parallel_chunks(nu.size(), chunks, [&](std::size_t c, std::size_t b, std::size_t e) {
        cplx acc = 0.0;
        for (std::size_t i = b; i < e; ++i) {
            cplx s = 0.0;
            if (m.has_levels()) {
                const double step = m.level_scale() * nu[i];
                constexpr int kTable = 64;
                cplx table[kTable + 1];
                table[0] = 1.0;
                const cplx z = std::polar(1.0, step);
                for (int d = 1; d <= kTable; ++d) table[d] = table[d - 1] * z;
                std::int64_t J = m.levels()[0];
                cplx p = std::polar(1.0, step * static_cast<double>(J));
                for (std::size_t j = 0; j < K; ++j) {
                    const std::int64_t next = m.levels()[j];
                    const std::int64_t dJ = next - J;
                    if (j % 512 == 0 || dJ > kTable) p = std::polar(1.0, step * static_cast<double>(next));
                    else p *= table[dJ];
                    J = next;
                    s += m.weights()[j] * p;
                }
                s *= std::polar(1.0, m.level_shift() * nu[i]);
            } else {
                for (std::size_t j = 0; j < K; ++j) s += m.weights()[j] * std::polar(1.0, m.eigenvalues()[j] * nu[i]);
            }
            acc += h[i] * s;
        }
        partial[c] = acc;
    });
    cplx total = 0.0;
    for (const auto& p : partial) total += p;
    return total;
}

} // namespace detail

// sign = +1: f((P + i eps)/Lambda^2); sign = -1: f((P - i eps)/Lambda^2).
inline ActionResult mode_action(const SpectralModel& model, const TestFunction& f, double Lambda, double eps,
                                int sign = +1, const ActionOptions& opt = {}) {
    if (!(Lambda > 0)) throw ValidationError("Lambda must be > 0");
    if (eps < 0) throw ValidationError("epsilon must be >= 0");
    if (sign != 1 && sign != -1) throw ValidationError("sign must be +1 or -1");
    const double L2 = Lambda * Lambda;
    const double damp = sign * eps / L2;
    // truncation: |g(kappa)| times the Weyl weight beyond kappa Lambda^2 is
    // negligible, or g has reached the rounding floor of its own quadrature
    const double g0 = std::abs(detail::action_profile(f, 0.0, damp, opt.panel_nodes));
    const double scale = g0 * std::max(model.weyl_count(L2), 1e-300);
    double kappa = 16.0;
    int quiet = 0;
    for (; kappa < 1e7; kappa *= 1.5) {
        const double g = std::abs(detail::action_profile(f, kappa, damp, opt.panel_nodes));
        if (g * model.weyl_count(2.0 * kappa * L2) <= opt.tol * scale || g <= 1e-14 * g0) {
            if (++quiet == 2) break;
        } else {
            quiet = 0;
        }
    }
    if (kappa >= 1e7) throw NumericalError("f_hat profile does not decay; is f_hat smooth?");
    const SpectralModel m = model.extended(kappa * L2);
    std::size_t K = 0;
    while (K < m.shells() && m.eigenvalues()[K] <= kappa * L2) ++K;

    const auto rule = detail::action_rule(f, kappa, opt.panel_nodes, 1);
    std::vector<double> nu(rule.nodes.size());
    std::vector<cplx> h(rule.nodes.size());
    for (std::size_t i = 0; i < nu.size(); ++i) {
        const double u = rule.nodes[i];
        nu[i] = u / L2;
        h[i] = rule.weights[i] * f(1.0 / u) * std::pow(u, -1.5) * std::exp(-damp * u);
    }
    const cplx sum = detail::oscillatory_sum(m, K, nu, h);
    // The sum is linear in the rule, so its quadrature error is bounded by the
    // worst profile error over [0, kappa] times the total weight.
    double rule_err = 0.0;
    for (int i = 0; i <= 8; ++i) {
        const double k = kappa * i / 8.0;
        rule_err = std::max(rule_err, std::abs(detail::action_profile(f, k, damp, opt.panel_nodes, kappa, 1) -
                                               detail::action_profile(f, k, damp, opt.panel_nodes, kappa, 2)));
    }
    double total_weight = 0.0;
    for (std::size_t j = 0; j < K; ++j) total_weight += m.weights()[j];
    const cplx pre = Lambda * std::polar(1.0, -kPi / 4) / (2.0 * std::sqrt(kPi));
    ActionResult r;
    r.value = pre * sum;
    r.error = std::abs(pre) * rule_err * total_weight + opt.tol * std::abs(r.value);
    r.nodes = static_cast<int>(nu.size());
    r.shells_used = K;
    r.kappa_max = kappa;
    return r;
}

} // namespace lz
