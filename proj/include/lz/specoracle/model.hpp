#pragma once

// Spectral data of a closed Riemannian manifold (Y, h): distinct eigenvalues
// lambda_j of -Delta_h in ascending order with diagonal weights
// w_j = sum over the eigenspace of |e(y)|^2 (multiplicity / volume on
// homogeneous spaces).
//
// Built-in spectra (standard results, checked against the Weyl law in tests):
//   flat torus T^d, side L:  lambda = (2 pi / L)^2 N,   w = r_d(N) / L^d,
//     r_d(N) = #{k in Z^d : |k|^2 = N};
//   round S^3, radius r:     lambda = k (k + 2) / r^2, w = (k + 1)^2 / (2 pi^2 r^3).
// Both are kept as lambda = scale * J + shift with integer levels J, which
// lets oscillatory sums advance by multiplication.

#include "lz/core/error.hpp"
#include "lz/core/special.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace lz {

enum class SpectrumKind { Torus, Sphere, Explicit };

inline std::string to_string(SpectrumKind k) {
    switch (k) {
    case SpectrumKind::Torus: return "torus";
    case SpectrumKind::Sphere: return "sphere";
    case SpectrumKind::Explicit: return "explicit";
    }
    return "?";
}

// r_d(N) for N <= nmax by repeated convolution with the squares.
inline std::vector<std::int64_t> lattice_shell_counts(int d, std::int64_t nmax) {
    std::vector<std::int64_t> r(static_cast<std::size_t>(nmax) + 1, 0);
    r[0] = 1;
    for (int dim = 0; dim < d; ++dim) {
        std::vector<std::int64_t> next(r.size(), 0);
        for (std::int64_t a = 0; a * a <= nmax; ++a) {
            const std::int64_t a2 = a * a;
            const std::int64_t mult = a == 0 ? 1 : 2;
            for (std::int64_t q = 0; q + a2 <= nmax; ++q)
                if (r[q]) next[q + a2] += mult * r[q];
        }
        r.swap(next);
    }
    return r;
}

class SpectralModel {
public:
    static SpectralModel torus(int spatial_dim, double side, double lambda_max) {
        if (spatial_dim < 1 || spatial_dim > 4) throw ValidationError("torus dimension must be in 1..4");
        if (!(side > 0)) throw ValidationError("torus side must be > 0");
        SpectralModel m;
        m.name_ = "torus";
        m.kind_ = SpectrumKind::Torus;
        m.dim_ = spatial_dim;
        m.size_ = side;
        m.scale_ = std::pow(2 * kPi / side, 2);
        m.shift_ = 0.0;
        const auto nmax = static_cast<std::int64_t>(std::floor(lambda_max / m.scale_));
        const auto r = lattice_shell_counts(spatial_dim, std::max<std::int64_t>(nmax, 1));
        const double vol = std::pow(side, spatial_dim);
        for (std::size_t q = 0; q < r.size(); ++q)
            if (r[q]) m.push(static_cast<std::int64_t>(q), static_cast<double>(r[q]) / vol);
        return m;
    }

    static SpectralModel sphere3(double radius, double lambda_max) {
        if (!(radius > 0)) throw ValidationError("sphere radius must be > 0");
        SpectralModel m;
        m.name_ = "sphere";
        m.kind_ = SpectrumKind::Sphere;
        m.dim_ = 3;
        m.size_ = radius;
        m.scale_ = 1.0 / (radius * radius);
        m.shift_ = -1.0 / (radius * radius);
        const double norm = 1.0 / (2 * kPi * kPi * radius * radius * radius);
        for (std::int64_t j = 1;; ++j) {
            const double lam = m.scale_ * static_cast<double>(j * j) + m.shift_;
            if (lam > lambda_max && j > 1) break;
            m.push(j * j, static_cast<double>(j * j) * norm);
        }
        return m;
    }

    static SpectralModel explicit_spectrum(std::string name, int spatial_dim, std::vector<double> lambda,
                                           std::vector<double> weight) {
        if (lambda.size() != weight.size() || lambda.empty())
            throw ValidationError("explicit spectrum needs matching nonempty eigenvalue and weight lists");
        SpectralModel m;
        m.name_ = std::move(name);
        m.kind_ = SpectrumKind::Explicit;
        m.dim_ = spatial_dim;
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            if (lambda[i] < 0 || !(weight[i] > 0)) throw ValidationError("eigenvalues must be >= 0, weights > 0");
            if (i && lambda[i] < lambda[i - 1]) throw ValidationError("eigenvalues must be nondecreasing");
        }
        m.lambda_ = std::move(lambda);
        m.weight_ = std::move(weight);
        return m;
    }

    // {name, spatial_dim, generator, params, K}
    static SpectralModel from_json(const nlohmann::json& j) {
        static const std::vector<std::string> allowed = {"name", "spatial_dim", "generator", "params", "K"};
        for (auto it = j.begin(); it != j.end(); ++it)
            if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
                throw ValidationError("unknown key in model file: " + it.key());
        if (!j.contains("generator")) throw ValidationError("model file needs 'generator'");
        const auto gen = j.at("generator").get<std::string>();
        const auto params = j.value("params", nlohmann::json::object());
        const int d = j.value("spatial_dim", 3);
        SpectralModel m;
        if (gen == "torus") {
            m = torus(d, params.value("L", 2 * kPi), params.value("lambda_max", 2.0e5));
        } else if (gen == "sphere") {
            if (d != 3) throw ValidationError("sphere generator supports spatial_dim 3");
            m = sphere3(params.value("r", 1.0), params.value("lambda_max", 2.0e5));
        } else if (gen == "explicit") {
            m = explicit_spectrum(j.value("name", "explicit"), d, params.at("lambda").get<std::vector<double>>(),
                                  params.at("weight").get<std::vector<double>>());
        } else {
            throw ValidationError("unknown generator '" + gen + "'");
        }
        if (j.contains("name")) m.name_ = j.at("name").get<std::string>();
        if (j.contains("K")) m = m.truncated(j.at("K").get<std::size_t>());
        return m;
    }

    const std::string& name() const { return name_; }
    SpectrumKind kind() const { return kind_; }
    int spatial_dim() const { return dim_; }
    double size() const { return size_; }
    std::size_t shells() const { return lambda_.size(); }
    const std::vector<double>& eigenvalues() const { return lambda_; }
    const std::vector<double>& weights() const { return weight_; }
    const std::vector<std::int64_t>& levels() const { return level_; }
    bool has_levels() const { return kind_ != SpectrumKind::Explicit; }
    double level_scale() const { return scale_; }
    double level_shift() const { return shift_; }
    double lambda_max() const { return lambda_.back(); }

    // Scalar curvature of (Y, h).
    double scalar_curvature() const {
        switch (kind_) {
        case SpectrumKind::Sphere: return 6.0 / (size_ * size_);
        case SpectrumKind::Torus: return 0.0;
        default: throw ValidationError("scalar curvature unknown for an explicit spectrum");
        }
    }

    SpectralModel truncated(std::size_t K) const {
        SpectralModel m = *this;
        if (K < m.lambda_.size()) {
            m.lambda_.resize(K);
            m.weight_.resize(K);
            if (!m.level_.empty()) m.level_.resize(K);
        }
        return m;
    }

    // Same generator with eigenvalues up to at least lambda_max.
    SpectralModel extended(double lambda_max) const {
        if (lambda_max <= this->lambda_max()) return *this;
        SpectralModel m;
        switch (kind_) {
        case SpectrumKind::Torus: m = torus(dim_, size_, lambda_max); break;
        case SpectrumKind::Sphere: m = sphere3(size_, lambda_max); break;
        default: throw NumericalError("explicit spectrum too short: need eigenvalues up to " +
                                      std::to_string(lambda_max));
        }
        m.name_ = name_;
        return m;
    }

    // Leading Weyl term (4 pi)^{-d/2} / Gamma(d/2 + 1) L^{d/2} of sum_{lambda <= L} w.
    double weyl_count(double L) const {
        return std::pow(4 * kPi, -0.5 * dim_) / std::tgamma(0.5 * dim_ + 1.0) * std::pow(L, 0.5 * dim_);
    }

    double partial_weight(double L) const {
        double s = 0.0;
        for (std::size_t i = 0; i < lambda_.size() && lambda_[i] <= L; ++i) s += weight_[i];
        return s;
    }

    // Heat trace density sum_j w_j e^{-t lambda_j}.
    double heat_trace(double t) const {
        double s = 0.0;
        for (std::size_t i = 0; i < lambda_.size(); ++i) {
            const double term = weight_[i] * std::exp(-t * lambda_[i]);
            s += term;
            if (t * lambda_[i] > 60.0 && term < 1e-30 * s) break;
        }
        return s;
    }

private:
    void push(std::int64_t level, double w) {
        level_.push_back(level);
        lambda_.push_back(scale_ * static_cast<double>(level) + shift_);
        weight_.push_back(w);
    }

    std::string name_;
    SpectrumKind kind_ = SpectrumKind::Explicit;
    int dim_ = 3;
    double size_ = 0.0;
    double scale_ = 0.0, shift_ = 0.0;
    std::vector<std::int64_t> level_;
    std::vector<double> lambda_, weight_;
};

} // namespace lz
