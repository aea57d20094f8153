#pragma once

// Report assembly: JSON body, aligned text tables and CSV sweeps.

#include "lz/core/special.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace lz::cli {

using ojson = nlohmann::ordered_json;

inline ojson val(double v, double err) { return ojson{{"value", v}, {"error", err}}; }
inline ojson val(cplx v, double err) { return ojson{{"re", v.real()}, {"im", v.imag()}, {"error", err}}; }

inline std::string num(double v) { return fmt::format("{:.10g}", v); }
inline std::string num(cplx v) {
    return fmt::format("{:.10g}{}{:.10g}i", v.real(), v.imag() < 0 || std::signbit(v.imag()) ? " - " : " + ",
                       std::abs(v.imag()));
}
inline std::string err(double e) { return fmt::format("{:.2e}", e); }

class Table {
public:
    explicit Table(std::vector<std::string> headers) : headers_(std::move(headers)) {}

    void row(std::vector<std::string> cells) {
        cells.resize(headers_.size());
        rows_.push_back(std::move(cells));
    }

    std::string render() const {
        std::vector<std::size_t> w(headers_.size());
        for (std::size_t c = 0; c < w.size(); ++c) {
            w[c] = headers_[c].size();
            for (const auto& r : rows_) w[c] = std::max(w[c], r[c].size());
        }
        auto line = [&](const std::vector<std::string>& cells) {
            std::string s;
            for (std::size_t c = 0; c < cells.size(); ++c) {
                s += cells[c];
                if (c + 1 < cells.size()) s += std::string(w[c] - cells[c].size() + 2, ' ');
            }
            while (!s.empty() && s.back() == ' ') s.pop_back();
            return s + "\n";
        };
        std::string out = line(headers_);
        std::vector<std::string> rule;
        for (auto x : w) rule.push_back(std::string(x, '-'));
        out += line(rule);
        for (const auto& r : rows_) out += line(r);
        return out;
    }

private:
    std::vector<std::string> headers_;
    std::vector<std::vector<std::string>> rows_;
};

struct Report {
    ojson json;
    std::string text;
    std::string csv;  // empty unless the command produces sweep data
};

} // namespace lz::cli
