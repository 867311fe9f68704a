#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgmd::opt {

/// Box constraints of a search space, one named dimension per entry.
struct Bounds {
    std::vector<std::string> names;
    std::vector<double> lower;
    std::vector<double> upper;

    Bounds() = default;
    Bounds(std::vector<double> lo, std::vector<double> hi, std::vector<std::string> dim_names = {})
        : names(std::move(dim_names)), lower(std::move(lo)), upper(std::move(hi)) {
        if (names.empty()) {
            for (std::size_t i = 0; i < lower.size(); ++i) names.push_back("x" + std::to_string(i));
        }
        check();
    }

    static Bounds uniform(std::size_t dims, double lo, double hi) {
        return Bounds(std::vector<double>(dims, lo), std::vector<double>(dims, hi));
    }

    std::size_t size() const { return lower.size(); }
    double width(std::size_t i) const { return upper[i] - lower[i]; }

    void check() const {
        if (lower.size() != upper.size() || names.size() != lower.size()) {
            throw std::invalid_argument("bounds: dimension mismatch");
        }
        if (lower.empty()) throw std::invalid_argument("bounds: no dimensions");
        for (std::size_t i = 0; i < lower.size(); ++i) {
            if (!(lower[i] < upper[i])) {
                throw std::invalid_argument("bounds: min must be below max for " + names[i]);
            }
        }
    }

    bool contains(std::span<const double> x) const {
        if (x.size() != size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
        }
        return true;
    }

    void clip(std::span<double> x) const {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
    }

    std::vector<double> to_unit(std::span<const double> x) const {
        std::vector<double> u(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) u[i] = (x[i] - lower[i]) / width(i);
        return u;
    }

    std::vector<double> from_unit(std::span<const double> u) const {
        std::vector<double> x(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            x[i] = std::clamp(lower[i] + u[i] * width(i), lower[i], upper[i]);
        }
        return x;
    }

    /// FNV-1a over names and the bit patterns of the limits.
    std::uint64_t hash() const;
};

}  // namespace lgmd::opt
