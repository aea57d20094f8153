#pragma once

// Scalar functional calculus on the contour gamma_eps: two rays leaving
// i eps at angles pi - theta and theta, joined by an arc of radius eps/2
// that passes below i eps. For real w,
//   (2 pi i)^{-1} int_{gamma_eps} (z - i eps)^{-alpha} (w - z)^{-1} dz = (w - i eps)^{-alpha},
// with the power cut along the upward vertical through i eps (which agrees
// with the principal branch at z = w).
//
// Rays are integrated in u = log rho on composite Gauss-Legendre panels.
// R_max is set from the tail bound rho^{-Re alpha} / (pi Re alpha) < tail_tol.

#include "lz/core/quadrature.hpp"
#include "lz/minkmodel/power.hpp"

#include <limits>
#include <vector>

namespace lz {

struct ContourNode {
    cplx z;
    cplx weight;  // includes dz
};

class ContourGamma {
public:
    ContourGamma(double epsilon, double theta = kPi / 4, double r_max = 0.0, double panel_width = 0.5,
                 int panel_nodes = 16)
        : eps_(epsilon), theta_(theta), r_max_(r_max), panel_width_(panel_width), panel_nodes_(panel_nodes) {
        if (!(epsilon > 0)) throw ValidationError("contour epsilon must be > 0");
        if (!(theta > 0 && theta < kPi / 2)) throw ValidationError("contour theta must be in (0, pi/2)");
    }

    double epsilon() const { return eps_; }
    double theta() const { return theta_; }
    double radius() const { return 0.5 * eps_; }

    // Tail bound of one ray beyond R for |integrand| <~ rho^{-a-1}.
    static double tail_bound(double R, double re_alpha, double im_alpha, double w_abs) {
        const double branch = std::exp(1.5 * kPi * std::abs(im_alpha));
        const double shrink = R > 2 * w_abs ? 1.0 / (1.0 - w_abs / R) : 2.0;
        return 2.0 * branch * std::pow(R, -re_alpha) / (2 * kPi * re_alpha) * shrink;
    }

    // Smallest R with tail bound below tol.
    static double truncation_for(double re_alpha, double im_alpha, double w_abs, double tol) {
        double logR = std::log(std::max(1.0, 4.0 * w_abs));
        while (tail_bound(std::exp(logR), re_alpha, im_alpha, w_abs) > tol) logR += 0.25;
        return std::exp(logR);
    }

    double truncation(double re_alpha, double im_alpha, double w_abs, double tol = 1e-10) const {
        return r_max_ > 0 ? r_max_ : truncation_for(re_alpha, im_alpha, w_abs, tol);
    }

    // Nodes along the incoming ray, the arc and the outgoing ray (in that
    // order) with weights containing dz. refine doubles the panel count.
    std::vector<ContourNode> nodes(double R, int refine = 1) const {
        std::vector<ContourNode> out;
        const double r0 = radius();
        const double u0 = std::log(r0), u1 = std::log(R);
        const int panels = std::max(1, static_cast<int>(std::ceil((u1 - u0) / panel_width_))) * refine;
        const auto gl = gauss_legendre(panel_nodes_);
        const cplx in_dir = std::polar(1.0, kPi - theta_), out_dir = std::polar(1.0, theta_);
        const cplx c(0.0, eps_);
        auto ray = [&](cplx dir, double sign, bool reverse) {
            std::vector<ContourNode> r;
            const double h = (u1 - u0) / panels;
            for (int p = 0; p < panels; ++p)
                for (int i = 0; i < panel_nodes_; ++i) {
                    const double u = u0 + h * (p + 0.5 * (gl.nodes[i] + 1.0));
                    const double rho = std::exp(u);
                    r.push_back({c + rho * dir, sign * dir * rho * (0.5 * h * gl.weights[i])});
                }
            if (reverse) std::reverse(r.begin(), r.end());
            return r;
        };
        auto in = ray(in_dir, -1.0, true);
        out.insert(out.end(), in.begin(), in.end());
        // arc phi from pi - theta to 2 pi + theta, counter-clockwise
        const double a0 = kPi - theta_, a1 = 2 * kPi + theta_;
        const int arc_panels = 4 * refine;
        const double ha = (a1 - a0) / arc_panels;
        for (int p = 0; p < arc_panels; ++p)
            for (int i = 0; i < panel_nodes_; ++i) {
                const double phi = a0 + ha * (p + 0.5 * (gl.nodes[i] + 1.0));
                const cplx e = std::polar(1.0, phi);
                out.push_back({c + r0 * e, kI * r0 * e * (0.5 * ha * gl.weights[i])});
            }
        auto o = ray(out_dir, 1.0, false);
        out.insert(out.end(), o.begin(), o.end());
        return out;
    }

private:
    double eps_, theta_, r_max_, panel_width_;
    int panel_nodes_;
};

struct ContourResult {
    cplx value;
    double error = 0.0;        // quadrature difference, rounding and tail bound
    double truncation = 0.0;   // R_max used
    std::size_t nodes = 0;
};

inline ContourResult contour_power_scalar(double w, cplx alpha, const ContourGamma& contour, double tail_tol = 1e-10) {
    if (alpha.real() <= 0) throw ValidationError("contour calculus needs Re alpha > 0");
    const double R = contour.truncation(alpha.real(), alpha.imag(), std::abs(w), tail_tol);
    const auto P = BranchedPower::cut_up();
    const cplx c(0.0, contour.epsilon());
    double mass = 0.0;  // sum of |terms| of the fine rule, for the rounding estimate
    auto sum = [&](int refine, std::size_t& count) {
        const auto nodes = contour.nodes(R, refine);
        count = nodes.size();
        cplx s = 0.0;
        mass = 0.0;
        for (const auto& nd : nodes) {
            const cplx t = P(nd.z - c, -alpha) / (w - nd.z) * nd.weight;
            s += t;
            mass += std::abs(t);
        }
        return s / (2.0 * kPi * kI);
    };
    std::size_t n1 = 0, n2 = 0;
    const cplx coarse = sum(1, n1);
    const cplx fine = sum(2, n2);
    const double rounding = 16.0 * std::numeric_limits<double>::epsilon() * mass / (2.0 * kPi);
    ContourResult r;
    r.value = fine;
    r.truncation = R;
    r.nodes = n2;
    r.error = std::abs(fine - coarse) + rounding + ContourGamma::tail_bound(R, alpha.real(), alpha.imag(), std::abs(w));
    return r;
}

} // namespace lz
