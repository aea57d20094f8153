#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Jet holds the Taylor coefficients c_alpha = (d^alpha f)(x) / alpha! of a
// function of `nvars` variables, for all multi-indices with |alpha| <= degree.
// Coefficients are stored in graded order (degree by degree, lexicographic
// within a degree), so the space of degree d is a prefix of the space of any
// degree D >= d.

#include "lz/core/error.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lz {

class JetSpace {
public:
    struct Product {
        std::uint32_t a;
        std::uint32_t b;
        std::uint32_t out;
    };
    struct Shift {
        std::uint32_t src;
        std::uint32_t dst;
        double factor;
    };

    static constexpr int kMaxVars = 8;
    static constexpr int kMaxDegree = 16;

    // Shared, immutable tables; safe to call from several threads.
    static const JetSpace& get(int nvars, int degree) {
        static std::mutex mutex;
        static std::map<std::pair<int, int>, std::unique_ptr<JetSpace>> cache;
        if (nvars < 1 || nvars > kMaxVars || degree < 0 || degree > kMaxDegree)
            throw ValidationError("jet space out of range: nvars=" + std::to_string(nvars) +
                                  " degree=" + std::to_string(degree));
        std::lock_guard lock(mutex);
        auto& slot = cache[{nvars, degree}];
        if (!slot) slot.reset(new JetSpace(nvars, degree));
        return *slot;
    }

    int nvars() const noexcept { return nvars_; }
    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return degrees_.size(); }

    std::span<const int> exponent(std::size_t k) const {
        return {exponents_.data() + k * nvars_, static_cast<std::size_t>(nvars_)};
    }
    int total_degree(std::size_t k) const { return degrees_[k]; }

    // Number of coefficients of total degree <= d.
    std::size_t prefix_size(int d) const { return offsets_[std::min(d, degree_) + 1]; }
    std::size_t degree_begin(int d) const { return offsets_[d]; }

    std::size_t index(std::span<const int> alpha) const {
        auto it = lookup_.find(encode(alpha));
        if (it == lookup_.end()) throw ValidationError("multi-index outside jet space");
        return it->second;
    }
    std::size_t unit(int var) const { return 1 + static_cast<std::size_t>(var); }

    std::span<const Product> products() const { return products_; }
    // Entries k -> (alpha - e_var) with factor alpha_var; dst indexes a
    // coefficient of degree one lower.
    std::span<const Shift> derivative_map(int var) const { return derivative_[var]; }

    // alpha! for coefficient k.
    double factorial_weight(std::size_t k) const { return factorial_[k]; }

private:
    JetSpace(int nvars, int degree) : nvars_(nvars), degree_(degree) {
        offsets_.push_back(0);
        std::vector<int> alpha(nvars, 0);
        for (int d = 0; d <= degree; ++d) {
            generate(alpha, 0, d);
            offsets_.push_back(degrees_.size());
        }
        for (std::size_t k = 0; k < size(); ++k) lookup_.emplace(encode(exponent(k)), k);

        for (std::size_t a = 0; a < size(); ++a) {
            for (std::size_t b = 0; b < size(); ++b) {
                if (degrees_[a] + degrees_[b] > degree) continue;
                std::vector<int> sum(nvars);
                auto ea = exponent(a);
                auto eb = exponent(b);
                for (int i = 0; i < nvars; ++i) sum[i] = ea[i] + eb[i];
                products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                                     static_cast<std::uint32_t>(index(sum))});
            }
        }

        derivative_.resize(nvars);
        for (int v = 0; v < nvars; ++v) {
            for (std::size_t k = 0; k < size(); ++k) {
                auto e = exponent(k);
                if (e[v] == 0) continue;
                std::vector<int> lower(e.begin(), e.end());
                --lower[v];
                derivative_[v].push_back({static_cast<std::uint32_t>(k),
                                          static_cast<std::uint32_t>(index(lower)),
                                          static_cast<double>(e[v])});
            }
        }

        factorial_.resize(size());
        for (std::size_t k = 0; k < size(); ++k) {
            double w = 1.0;
            for (int e : exponent(k))
                for (int j = 2; j <= e; ++j) w *= j;
            factorial_[k] = w;
        }
    }

    // Lexicographic, first variable descending.
    void generate(std::vector<int>& alpha, int var, int remaining) {
        if (var == nvars_ - 1) {
            alpha[var] = remaining;
            exponents_.insert(exponents_.end(), alpha.begin(), alpha.end());
            degrees_.push_back(std::accumulate(alpha.begin(), alpha.end(), 0));
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            alpha[var] = e;
            generate(alpha, var + 1, remaining - e);
        }
        alpha[var] = 0;
    }

    std::uint64_t encode(std::span<const int> alpha) const {
        std::uint64_t key = 0;
        for (int i = nvars_ - 1; i >= 0; --i) key = key * (kMaxDegree * 2 + 1) + alpha[i];
        return key;
    }

    int nvars_;
    int degree_;
    std::vector<int> exponents_;
    std::vector<int> degrees_;
    std::vector<std::size_t> offsets_;
    std::unordered_map<std::uint64_t, std::size_t> lookup_;
    std::vector<Product> products_;
    std::vector<std::vector<Shift>> derivative_;
    std::vector<double> factorial_;
};

class Jet {
public:
    Jet() = default;
    explicit Jet(const JetSpace& space, double value = 0.0)
        : space_(&space), c_(space.size(), 0.0) {
        c_[0] = value;
    }

    static Jet variable(const JetSpace& space, int var, double value) {
        Jet j(space, value);
        if (space.degree() >= 1) j.c_[space.unit(var)] = 1.0;
        return j;
    }

    const JetSpace& space() const { return *space_; }
    bool valid() const noexcept { return space_ != nullptr; }
    int degree() const { return space_->degree(); }
    int nvars() const { return space_->nvars(); }

    double value() const { return c_[0]; }
    double operator[](std::size_t k) const { return c_[k]; }
    double& operator[](std::size_t k) { return c_[k]; }
    std::span<const double> coefficients() const { return c_; }
    std::span<double> coefficients() { return c_; }

    // Partial derivative value d^alpha f.
    double partial(std::span<const int> alpha) const {
        std::size_t k = space_->index(alpha);
        return c_[k] * space_->factorial_weight(k);
    }
    double d(int i) const { return c_[space_->unit(i)]; }
    double d(int i, int j) const {
        std::vector<int> alpha(nvars(), 0);
        ++alpha[i];
        ++alpha[j];
        return partial(alpha);
    }

    // Exact derivative; the result lives in the space of one degree lower.
    Jet derivative(int var) const {
        if (degree() == 0) throw ValidationError("cannot differentiate a degree-0 jet");
        Jet out(JetSpace::get(nvars(), degree() - 1));
        for (const auto& s : space_->derivative_map(var)) out.c_[s.dst] += s.factor * c_[s.src];
        return out;
    }

    Jet truncated(int degree) const {
        if (degree >= this->degree()) return *this;
        Jet out(JetSpace::get(nvars(), degree));
        std::copy_n(c_.begin(), out.c_.size(), out.c_.begin());
        return out;
    }

    // Same coefficients embedded in a higher-degree space (new terms zero).
    Jet promoted(int degree) const {
        if (degree <= this->degree()) return truncated(degree);
        Jet out(JetSpace::get(nvars(), degree));
        std::copy(c_.begin(), c_.end(), out.c_.begin());
        return out;
    }

    // g(delta) = f(t * delta).
    Jet scaled_arguments(double t) const {
        Jet out = *this;
        double tk = 1.0;
        for (int d = 1; d <= degree(); ++d) {
            tk *= t;
            for (std::size_t k = space_->degree_begin(d); k < space_->prefix_size(d); ++k)
                out.c_[k] *= tk;
        }
        return out;
    }

    // Homogeneous part of degree d (other coefficients zeroed).
    Jet homogeneous_part(int d) const {
        Jet out(*space_);
        for (std::size_t k = space_->degree_begin(d); k < space_->prefix_size(d); ++k)
            out.c_[k] = c_[k];
        return out;
    }

    // Euler operator: multiplies the degree-d part by d.
    Jet euler() const {
        Jet out = *this;
        for (std::size_t k = 0; k < c_.size(); ++k) out.c_[k] *= space_->total_degree(k);
        return out;
    }

    double norm() const {
        double m = 0.0;
        for (double x : c_) m = std::max(m, std::abs(x));
        return m;
    }

    // Evaluate the truncated polynomial at a point.
    double evaluate(std::span<const double> delta) const {
        double sum = 0.0;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            double term = c_[k];
            if (term == 0.0) continue;
            auto e = space_->exponent(k);
            for (int i = 0; i < nvars(); ++i)
                for (int p = 0; p < e[i]; ++p) term *= delta[i];
            sum += term;
        }
        return sum;
    }

    Jet& operator+=(const Jet& o) {
        check(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        check(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Jet& operator+=(double s) {
        c_[0] += s;
        return *this;
    }
    Jet& operator-=(double s) {
        c_[0] -= s;
        return *this;
    }
    Jet& operator*=(double s) {
        for (double& x : c_) x *= s;
        return *this;
    }
    Jet& operator/=(double s) { return *this *= 1.0 / s; }
    Jet& operator*=(const Jet& o) {
        *this = *this * o;
        return *this;
    }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check(b);
        Jet out(*a.space_);
        const double* pa = a.c_.data();
        const double* pb = b.c_.data();
        double* po = out.c_.data();
        for (const auto& t : a.space_->products()) po[t.out] += pa[t.a] * pb[t.b];
        return out;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double s) { return a += s; }
    friend Jet operator+(double s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, double s) { return a -= s; }
    friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, double s) { return a /= s; }
    friend Jet operator-(Jet a) { return a *= -1.0; }

    // f(a) = sum_k coeffs[k] (a - a0)^k, evaluated by Horner in the nilpotent part.
    Jet compose(std::span<const double> coeffs) const {
        Jet h = *this;
        h.c_[0] = 0.0;
        int top = std::min<int>(degree(), static_cast<int>(coeffs.size()) - 1);
        Jet out(*space_, coeffs[top]);
        for (int k = top - 1; k >= 0; --k) {
            out = out * h;
            out.c_[0] += coeffs[k];
        }
        return out;
    }

    friend Jet reciprocal(const Jet& a) {
        double a0 = a.value();
        if (a0 == 0.0) throw DomainError("division by a jet with zero value");
        std::vector<double> c(a.degree() + 1);
        double p = 1.0 / a0;
        for (int k = 0; k <= a.degree(); ++k) {
            c[k] = (k % 2 ? -p : p);
            p /= a0;
        }
        return a.compose(c);
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
    friend Jet operator/(double s, const Jet& b) { return reciprocal(b) *= s; }

    friend Jet exp(const Jet& a) {
        std::vector<double> c(a.degree() + 1);
        double e = std::exp(a.value());
        for (int k = 0; k <= a.degree(); ++k) {
            c[k] = e;
            e /= (k + 1);
        }
        return a.compose(c);
    }

    friend Jet log(const Jet& a) {
        double a0 = a.value();
        if (!(a0 > 0.0)) throw DomainError("log of non-positive value");
        std::vector<double> c(a.degree() + 1);
        c[0] = std::log(a0);
        double p = 1.0;
        for (int k = 1; k <= a.degree(); ++k) {
            p /= a0;
            c[k] = (k % 2 ? p : -p) / k;
        }
        return a.compose(c);
    }

    friend Jet pow(const Jet& a, double p) {
        double r = std::round(p);
        if (r == p && std::abs(p) <= 64) return ipow(a, static_cast<int>(r));
        double a0 = a.value();
        if (!(a0 > 0.0)) throw DomainError("non-integer power of non-positive value");
        std::vector<double> c(a.degree() + 1);
        double binom = 1.0;
        for (int k = 0; k <= a.degree(); ++k) {
            c[k] = binom * std::pow(a0, p - k);
            binom *= (p - k) / (k + 1);
        }
        return a.compose(c);
    }

    friend Jet ipow(const Jet& a, int p) {
        if (p < 0) return reciprocal(ipow(a, -p));
        Jet out(a.space(), 1.0);
        Jet base = a;
        while (p > 0) {
            if (p & 1) out = out * base;
            p >>= 1;
            if (p) base = base * base;
        }
        return out;
    }

    friend Jet pow(const Jet& a, const Jet& b) {
        bool constant_exponent = true;
        for (std::size_t k = 1; k < b.c_.size(); ++k)
            if (b.c_[k] != 0.0) constant_exponent = false;
        if (constant_exponent) return pow(a, b.value());
        return exp(b * log(a));
    }

    friend Jet sqrt(const Jet& a) {
        if (!(a.value() > 0.0)) throw DomainError("sqrt of non-positive value");
        return pow(a, 0.5);
    }

    friend Jet sin(const Jet& a) { return trig(a, false); }
    friend Jet cos(const Jet& a) { return trig(a, true); }
    friend Jet tan(const Jet& a) { return sin(a) / cos(a); }

    friend Jet sinh(const Jet& a) { return hyperbolic(a, false); }
    friend Jet cosh(const Jet& a) { return hyperbolic(a, true); }

private:
    void check(const Jet& o) const {
        assert(space_ == o.space_ && "jets from different spaces");
        (void)o;
    }

    static Jet trig(const Jet& a, bool cosine) {
        double s = std::sin(a.value());
        double co = std::cos(a.value());
        // derivatives of sin: s, c, -s, -c ; of cos: c, -s, -c, s
        const double cyc_sin[4] = {s, co, -s, -co};
        const double cyc_cos[4] = {co, -s, -co, s};
        std::vector<double> c(a.degree() + 1);
        double fact = 1.0;
        for (int k = 0; k <= a.degree(); ++k) {
            if (k > 0) fact *= k;
            c[k] = (cosine ? cyc_cos[k % 4] : cyc_sin[k % 4]) / fact;
        }
        return a.compose(c);
    }

    static Jet hyperbolic(const Jet& a, bool cosine) {
        double s = std::sinh(a.value());
        double co = std::cosh(a.value());
        std::vector<double> c(a.degree() + 1);
        double fact = 1.0;
        for (int k = 0; k <= a.degree(); ++k) {
            if (k > 0) fact *= k;
            bool even = (k % 2 == 0);
            c[k] = ((even == cosine) ? co : s) / fact;
        }
        return a.compose(c);
    }

    const JetSpace* space_ = nullptr;
    std::vector<double> c_;
};

inline double quad_norm(const Jet& j) { return j.norm(); }

} // namespace lz
