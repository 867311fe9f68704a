#pragma once

#include <span>
#include <vector>

namespace lgmd::harness {

struct MannWhitney {
    double U = 0.0;  // U of the first sample
    double p = 1.0;  // two-sided
};

/// Midranks (1-based) of the pooled values.
std::vector<double> midranks(std::span<const double> pooled);

/// U = R_a - n_a (n_a + 1) / 2 with midranks for ties; p from the normal
/// approximation with tie-corrected variance and continuity correction.
/// p is 1 when every value is tied.
MannWhitney mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Same U, p from enumerating every split of the pooled midranks (two-sided,
/// |U - n_a n_b / 2| at least as large as observed). Limited to n_a + n_b <= 20.
MannWhitney mann_whitney_exact(std::span<const double> a, std::span<const double> b);

}  // namespace lgmd::harness
