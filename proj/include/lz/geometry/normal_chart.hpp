#pragma once

// Normal coordinates as a truncated Taylor polynomial of the exponential map.
//
// X(v) = exp_{x0}(E v) solves s^2 d^2/ds^2 X(sv) = -Gamma(X)(Eul X, Eul X)(sv)
// with Eul the Euler operator, so degree by degree
//   k (k - 1) X_k = -[Gamma(X)(Eul X, Eul X)]_k,   X_0 = x0, X_1 = E v,
// where the right side only involves X_1 .. X_{k-1}. The pulled-back metric
// is g_hat = J^T g(X) J with J = dX/dv. Jets of g_hat at any point y of the
// chart come from re-expanding the polynomial about y.

#include "lz/geometry/geodesic.hpp"
#include "lz/geometry/metric.hpp"

#include <Eigen/Dense>

#include <vector>

namespace lz {

class NormalChart {
public:
    // `degree` is the Taylor degree kept for g_hat; the map X is built one
    // degree higher.
    NormalChart(const MetricField& m, std::span<const double> x0, int degree = 10,
                const Eigen::MatrixXd* frame = nullptr)
        : n_(m.dim()), degree_(degree), signature_(m.signature()), center_(x0.begin(), x0.end()) {
        if (degree < 2 || degree + 1 > JetSpace::kMaxDegree)
            throw ValidationError("normal chart degree must be in [2, 15]");
        m.check_point(x0);
        frame_ = frame ? *frame : orthonormal_frame(m.matrix(x0), m.signature());
        build_map(m);
        build_metric(m);
        tol_det_ = m.tolerances().det;
        for (int d = 0; d <= std::min(degree_, kCachedShiftDegree); ++d) shifts_.push_back(make_shift_table(d));
    }

    int dim() const { return n_; }
    int degree() const { return degree_; }
    Signature signature() const { return signature_; }
    const std::vector<double>& center() const { return center_; }
    const Eigen::MatrixXd& frame() const { return frame_; }
    double tol_det() const { return tol_det_; }

    // X^a(v) as jets at v = 0 (Taylor coefficients of the map).
    const std::vector<Jet>& map() const { return map_; }
    // g_hat_ab at v = 0 to the chart degree.
    const std::vector<Jet>& metric_at_center() const { return metric_; }

    std::vector<double> point(std::span<const double> v) const {
        std::vector<double> out;
        for (const auto& x : map_) out.push_back(x.evaluate(v));
        return out;
    }

    // Jets of g_hat at y to total degree d <= chart degree.
    std::vector<Jet> metric_jet(std::span<const double> y, int d) const {
        if (d > degree_) throw ValidationError("requested metric jet degree exceeds the chart degree");
        std::vector<ShiftTerm> scratch;
        if (d > kCachedShiftDegree) scratch = make_shift_table(d);
        const auto& shift = d > kCachedShiftDegree ? scratch : shifts_[d];
        const auto& src = JetSpace::get(n_, degree_);
        const auto& dst = JetSpace::get(n_, d);
        // monomials y^gamma for every gamma up to the chart degree
        std::vector<double> mono(src.size());
        mono[0] = 1.0;
        for (std::size_t k = 1; k < src.size(); ++k) {
            const auto& [parent, var] = parent_[k];
            mono[k] = mono[parent] * y[var];
        }
        std::vector<Jet> out(n_ * n_, Jet(dst));
        for (int a = 0; a < n_; ++a)
            for (int b = a; b < n_; ++b) {
                auto p = metric_[a * n_ + b].coefficients();
                auto q = out[a * n_ + b].coefficients();
                for (const auto& t : shift) q[t.dst] += t.weight * p[t.src] * mono[t.mono];
                out[b * n_ + a] = out[a * n_ + b];
            }
        return out;
    }

private:
    static constexpr int kCachedShiftDegree = 6;

    struct ShiftTerm {
        std::size_t src, dst, mono;
        double weight;
    };

    void build_map(const MetricField& m) {
        const int top = degree_ + 1;
        const auto& full = JetSpace::get(n_, top);
        map_.clear();
        for (int a = 0; a < n_; ++a) {
            Jet x(full, center_[a]);
            for (int i = 0; i < n_; ++i) x[full.unit(i)] = frame_(a, i);
            map_.push_back(std::move(x));
        }
        for (int k = 2; k <= top; ++k) {
            const auto& sp = JetSpace::get(n_, k);
            std::vector<Jet> X, W;
            for (int a = 0; a < n_; ++a) {
                X.push_back(map_[a].truncated(k));
                W.push_back(X.back().euler());
            }
            auto acc = geodesic_acceleration<Jet>(m, X, W);
            for (int a = 0; a < n_; ++a) {
                auto src = acc[a].coefficients();
                for (std::size_t c = sp.degree_begin(k); c < sp.prefix_size(k); ++c)
                    map_[a][c] = src[c] / (k * (k - 1.0));
            }
        }
    }

    void build_metric(const MetricField& m) {
        std::vector<Jet> X;
        for (const auto& x : map_) X.push_back(x.truncated(degree_));
        auto g = m.components<Jet>(X);
        std::vector<Jet> J(n_ * n_);
        for (int a = 0; a < n_; ++a)
            for (int i = 0; i < n_; ++i) J[a * n_ + i] = map_[a].derivative(i);
        metric_.assign(n_ * n_, Jet(JetSpace::get(n_, degree_)));
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) {
                Jet s(JetSpace::get(n_, degree_));
                for (int a = 0; a < n_; ++a) {
                    Jet r(JetSpace::get(n_, degree_));
                    for (int b = 0; b < n_; ++b) r += g[a * n_ + b] * J[b * n_ + j];
                    s += J[a * n_ + i] * r;
                }
                metric_[i * n_ + j] = metric_[j * n_ + i] = s;
            }
        // parent table for monomials: y^alpha = y^{alpha - e_var} * y_var
        const auto& src = JetSpace::get(n_, degree_);
        parent_.assign(src.size(), {0, 0});
        for (std::size_t k = 1; k < src.size(); ++k) {
            auto e = src.exponent(k);
            std::vector<int> lower(e.begin(), e.end());
            int var = 0;
            while (lower[var] == 0) ++var;
            --lower[var];
            parent_[k] = {src.index(lower), var};
        }
    }

    // Q_beta = sum_{alpha >= beta} P_alpha C(alpha, beta) y^{alpha - beta}
    std::vector<ShiftTerm> make_shift_table(int d) const {
        std::vector<ShiftTerm> table;
        const auto& src = JetSpace::get(n_, degree_);
        const auto& dst = JetSpace::get(n_, d);
        std::vector<int> gam(n_);
        for (std::size_t a = 0; a < src.size(); ++a) {
            auto al = src.exponent(a);
            for (std::size_t b = 0; b < dst.size(); ++b) {
                auto be = dst.exponent(b);
                double w = 1.0;
                bool ok = true;
                for (int i = 0; i < n_ && ok; ++i) {
                    if (be[i] > al[i]) ok = false;
                    else {
                        gam[i] = al[i] - be[i];
                        w *= binomial(al[i], be[i]);
                    }
                }
                if (ok) table.push_back({a, b, src.index(gam), w});
            }
        }
        return table;
    }

    static double binomial(int n, int k) {
        double r = 1.0;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    }

    int n_;
    int degree_;
    Signature signature_;
    std::vector<double> center_;
    Eigen::MatrixXd frame_;
    double tol_det_ = 0.0;
    std::vector<Jet> map_;
    std::vector<Jet> metric_;
    std::vector<std::pair<std::size_t, int>> parent_;
    std::vector<std::vector<ShiftTerm>> shifts_;
};

} // namespace lz
