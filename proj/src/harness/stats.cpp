#include "lgmd/harness/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace lgmd::harness {

std::vector<double> midranks(std::span<const double> pooled) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

namespace {

std::vector<double> pool(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("Mann-Whitney needs two non-empty samples");
    for (double v : a) {
        if (std::isnan(v)) throw std::invalid_argument("Mann-Whitney sample contains NaN");
    }
    for (double v : b) {
        if (std::isnan(v)) throw std::invalid_argument("Mann-Whitney sample contains NaN");
    }
    std::vector<double> all(a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    return all;
}

double u_of(std::span<const double> ranks, std::size_t na) {
    double ra = 0.0;
    for (std::size_t i = 0; i < na; ++i) ra += ranks[i];
    return ra - static_cast<double>(na) * static_cast<double>(na + 1) / 2.0;
}

}  // namespace

MannWhitney mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    const auto all = pool(a, b);
    const auto ranks = midranks(all);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double n = na + nb;
    MannWhitney r;
    r.U = u_of(ranks, a.size());

    std::vector<double> sorted(all);
    std::sort(sorted.begin(), sorted.end());
    double ties = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        ties += t * t * t - t;
        i = j;
    }
    const double var = na * nb / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if (!(var > 0.0)) {
        r.p = 1.0;
        return r;
    }
    const double dev = std::max(std::abs(r.U - na * nb / 2.0) - 0.5, 0.0);
    const double z = dev / std::sqrt(var);
    r.p = std::min(1.0, std::erfc(z / std::numbers::sqrt2));
    return r;
}

MannWhitney mann_whitney_exact(std::span<const double> a, std::span<const double> b) {
    const auto all = pool(a, b);
    if (all.size() > 20) throw std::invalid_argument("exact Mann-Whitney limited to 20 observations");
    const auto ranks = midranks(all);
    const std::size_t na = a.size();
    const std::size_t n = all.size();
    const double centre = static_cast<double>(na) * static_cast<double>(n - na) / 2.0;
    MannWhitney r;
    r.U = u_of(ranks, na);
    const double observed = std::abs(r.U - centre);
    const double offset = static_cast<double>(na) * static_cast<double>(na + 1) / 2.0;

    // walk every subset of size na through a selection mask
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(na), true);
    std::uint64_t total = 0, extreme = 0;
    do {
        double ra = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (pick[i]) ra += ranks[i];
        }
        ++total;
        if (std::abs(ra - offset - centre) >= observed - 1e-9) ++extreme;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    r.p = static_cast<double>(extreme) / static_cast<double>(total);
    return r;
}

}  // namespace lgmd::harness
