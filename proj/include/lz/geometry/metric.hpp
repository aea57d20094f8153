#pragma once

// Metric fields on a single coordinate chart. Components are expressions in
// the chart variables; derivatives come from symbolic differentiation or jet
// evaluation, never finite differences.

#include "lz/core/error.hpp"
#include "lz/core/expr.hpp"
#include "lz/core/jet.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <span>
#include <string>
#include <vector>

namespace lz {

enum class Signature { Lorentzian, Riemannian };

inline std::string to_string(Signature s) {
    return s == Signature::Lorentzian ? "lorentzian" : "riemannian";
}

struct Tolerances {
    double det = 1e-12;
    double tensor = 1e-8;
    double op = 1e-9;
    double ode = 1e-10;
    double transport = 1e-8;
};

// Axis-aligned box; an empty box means unbounded.
struct ChartDomain {
    std::vector<double> lower;
    std::vector<double> upper;

    bool contains(std::span<const double> x) const {
        for (std::size_t i = 0; i < lower.size() && i < x.size(); ++i)
            if (x[i] < lower[i] || x[i] > upper[i]) return false;
        return true;
    }
};

// Gauss-Jordan inversion with partial pivoting on leading values. Works for
// S = double and S = Jet; the determinant is accumulated alongside.
template <class S>
struct Inverse {
    std::vector<S> inv;  // row-major n x n
    S det;
};

template <class S>
Inverse<S> invert(std::vector<S> a, int n, double tol_det = 0.0) {
    auto value = [](const S& s) {
        if constexpr (std::is_same_v<S, double>) return s;
        else return s.value();
    };
    std::vector<S> b(a.size(), a[0] * 0.0);
    for (int i = 0; i < n; ++i) b[i * n + i] = b[i * n + i] + 1.0;
    S det = a[0] * 0.0 + 1.0;
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(value(a[r * n + c])) > std::abs(value(a[p * n + c]))) p = r;
        if (std::abs(value(a[p * n + c])) <= tol_det)
            throw NumericalError("singular metric: pivot below tol_det");
        if (p != c) {
            for (int k = 0; k < n; ++k) {
                std::swap(a[p * n + k], a[c * n + k]);
                std::swap(b[p * n + k], b[c * n + k]);
            }
            det = -det;
        }
        const S piv = a[c * n + c];
        det = det * piv;
        S rp;
        if constexpr (std::is_same_v<S, double>) rp = 1.0 / piv;
        else rp = reciprocal(piv);
        for (int k = 0; k < n; ++k) {
            a[c * n + k] = a[c * n + k] * rp;
            b[c * n + k] = b[c * n + k] * rp;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            const S f = a[r * n + c];
            if (value(f) == 0.0 && std::is_same_v<S, double>) continue;
            for (int k = 0; k < n; ++k) {
                a[r * n + k] = a[r * n + k] - f * a[c * n + k];
                b[r * n + k] = b[r * n + k] - f * b[c * n + k];
            }
        }
    }
    return {std::move(b), det};
}

class MetricField {
public:
    MetricField(int dim, Signature signature, std::vector<std::string> coords,
                const std::vector<std::vector<std::string>>& components, ChartDomain domain = {},
                Tolerances tol = {})
        : dim_(dim), signature_(signature), coords_(std::move(coords)), domain_(std::move(domain)),
          tol_(tol) {
        if (dim_ < 2 || dim_ > JetSpace::kMaxVars) throw ValidationError("metric dim must be in [2, 8]");
        if (static_cast<int>(coords_.size()) != dim_)
            throw ValidationError("coords must list exactly dim names");
        if (static_cast<int>(components.size()) != dim_)
            throw ValidationError("g must be a dim x dim array");
        for (const auto& row : components)
            if (static_cast<int>(row.size()) != dim_) throw ValidationError("g must be a dim x dim array");
        if (!domain_.lower.empty() &&
            (static_cast<int>(domain_.lower.size()) != dim_ || domain_.upper.size() != domain_.lower.size()))
            throw ValidationError("domain bounds must have dim entries");
        g_.resize(dim_ * dim_);
        for (int j = 0; j < dim_; ++j)
            for (int k = j; k < dim_; ++k) {
                const Expr e = parse_component(components[j][k], j, k);
                if (k != j) {
                    const Expr f = parse_component(components[k][j], k, j);
                    if (f.to_string() != e.to_string())
                        throw ValidationError("g is not symmetric at (" + std::to_string(j) + "," +
                                              std::to_string(k) + ")");
                }
                g_[j * dim_ + k] = g_[k * dim_ + j] = e;
            }
        dg_.resize(dim_ * dim_ * dim_);
        for (int m = 0; m < dim_; ++m)
            for (int j = 0; j < dim_; ++j)
                for (int k = j; k < dim_; ++k)
                    dg_[(m * dim_ + j) * dim_ + k] = dg_[(m * dim_ + k) * dim_ + j] =
                        g_[j * dim_ + k].diff(m);
    }

    // {"dim", "signature", "coords", "g", "domain": {"lower", "upper"}}
    static MetricField from_json(const nlohmann::json& j, Tolerances tol = {}) {
        static const char* allowed[] = {"dim", "signature", "coords", "g", "domain", "name", "description"};
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || it.key() == a;
            if (!ok) throw ValidationError("unknown key in metric file: " + it.key());
        }
        try {
            const int dim = j.at("dim").get<int>();
            const std::string sig = j.value("signature", std::string("lorentzian"));
            Signature s;
            if (sig == "lorentzian") s = Signature::Lorentzian;
            else if (sig == "riemannian") s = Signature::Riemannian;
            else throw ValidationError("signature must be lorentzian or riemannian");
            auto coords = j.at("coords").get<std::vector<std::string>>();
            std::vector<std::vector<std::string>> g;
            for (const auto& row : j.at("g")) {
                std::vector<std::string> r;
                for (const auto& c : row) r.push_back(c.is_string() ? c.get<std::string>() : c.dump());
                g.push_back(std::move(r));
            }
            ChartDomain dom;
            if (j.contains("domain")) {
                dom.lower = j["domain"].at("lower").get<std::vector<double>>();
                dom.upper = j["domain"].at("upper").get<std::vector<double>>();
            }
            return MetricField(dim, s, std::move(coords), g, std::move(dom), tol);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("metric file: ") + e.what());
        }
    }

    static MetricField from_text(const std::string& text, Tolerances tol = {}) {
        return from_json(parse_json(text), tol);
    }

    static MetricField from_file(const std::string& path, Tolerances tol = {}) {
        return from_text(read_file(path), tol);
    }

    int dim() const { return dim_; }
    Signature signature() const { return signature_; }
    const std::vector<std::string>& coords() const { return coords_; }
    const ChartDomain& domain() const { return domain_; }
    const Tolerances& tolerances() const { return tol_; }
    void set_tolerances(const Tolerances& t) { tol_ = t; }

    const Expr& component(int j, int k) const { return g_[j * dim_ + k]; }
    const Expr& component_derivative(int m, int j, int k) const { return dg_[(m * dim_ + j) * dim_ + k]; }

    // Row-major n x n component values at x.
    template <class S>
    std::vector<S> components(std::span<const S> x) const {
        std::vector<S> out(dim_ * dim_);
        for (int j = 0; j < dim_; ++j)
            for (int k = j; k < dim_; ++k) out[j * dim_ + k] = out[k * dim_ + j] = g_[j * dim_ + k].eval(x);
        return out;
    }

    // out[(m n + j) n + k] = d_m g_jk.
    template <class S>
    std::vector<S> first_derivatives(std::span<const S> x) const {
        std::vector<S> out(dim_ * dim_ * dim_);
        for (int m = 0; m < dim_; ++m)
            for (int j = 0; j < dim_; ++j)
                for (int k = j; k < dim_; ++k)
                    out[(m * dim_ + j) * dim_ + k] = out[(m * dim_ + k) * dim_ + j] =
                        dg_[(m * dim_ + j) * dim_ + k].eval(x);
        return out;
    }

    Eigen::MatrixXd matrix(std::span<const double> x) const {
        auto c = components<double>(x);
        Eigen::MatrixXd m(dim_, dim_);
        for (int j = 0; j < dim_; ++j)
            for (int k = 0; k < dim_; ++k) m(j, k) = c[j * dim_ + k];
        return m;
    }

    // Domain, invertibility and signature checks at x.
    void check_point(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dim_) throw ValidationError("point has wrong dimension");
        if (!domain_.contains(x)) throw DomainError("point outside the chart domain");
        check_matrix(matrix(x));
    }

    void check_matrix(const Eigen::MatrixXd& g) const {
        if (std::abs(g.determinant()) <= tol_.det) throw NumericalError("singular metric: |det g| <= tol_det");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        int pos = 0, neg = 0;
        for (int i = 0; i < dim_; ++i) (ev(i) > 0 ? pos : neg)++;
        const bool ok = signature_ == Signature::Lorentzian ? (pos == 1 && neg == dim_ - 1) : pos == dim_;
        if (!ok)
            throw DomainError("metric signature mismatch: " + std::to_string(pos) + " positive, " +
                              std::to_string(neg) + " negative eigenvalues");
    }

    // eta: diag(1, -1, ..., -1) or the identity.
    double eta(int i) const {
        return signature_ == Signature::Riemannian || i == 0 ? 1.0 : -1.0;
    }

    // Jets of every g_jk at x to total degree `order`, in dim variables.
    std::vector<Jet> jet(std::span<const double> x, int order) const {
        check_point(x);
        const auto& sp = JetSpace::get(dim_, order);
        std::vector<Jet> vars;
        vars.reserve(dim_);
        for (int i = 0; i < dim_; ++i) vars.push_back(Jet::variable(sp, i, x[i]));
        return components<Jet>(std::span<const Jet>(vars));
    }

    static nlohmann::json parse_json(const std::string& text) {
        try {
            return nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            int line = 1, col = 1;
            for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
                if (text[i] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
            }
            throw ParseError("malformed JSON", line, col);
        }
    }

    static std::string read_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

private:
    Expr parse_component(const std::string& text, int j, int k) const {
        try {
            return Expr::parse(text, coords_);
        } catch (const ParseError& e) {
            throw ParseError("g[" + std::to_string(j) + "][" + std::to_string(k) + "] = \"" + text + "\": " +
                                 e.what(),
                             j + 1, e.column());
        }
    }

    int dim_;
    Signature signature_;
    std::vector<std::string> coords_;
    ChartDomain domain_;
    Tolerances tol_;
    std::vector<Expr> g_;
    std::vector<Expr> dg_;
};

} // namespace lz
