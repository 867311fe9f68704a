#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lgmd/optimizers/bounds.hpp"

namespace lgmd::opt {

using Rng = std::mt19937_64;
using Population = std::vector<std::vector<double>>;

struct Candidate {
    std::vector<double> x;
    std::optional<double> fitness;
};

enum class Strategy : std::uint8_t { Rand1Bin = 0, RandToBest2Bin = 1, Rand2Bin = 2, CurrToRand1 = 3 };
inline constexpr std::size_t kStrategyCount = 4;

std::string to_string(Strategy s);
/// Distinct random indices (besides the target) each strategy consumes.
std::size_t random_indices_needed(Strategy s);

struct DeConfig {
    std::size_t NP = 0;  // 0: ceil(10 d / 3)
    double F = 0.6607;
    double CR = 0.9426;

    void validate() const;
};

std::size_t default_population_size(std::size_t dims);

/// NP points uniform within `bounds`.
Population de_init(const Bounds& bounds, std::size_t NP, Rng& rng);
Population de_init(const Bounds& bounds, std::size_t NP, std::uint64_t seed);

/// Donor from explicit indices `r` (not clipped). K is the curr-to-rand
/// combination coefficient and is ignored by the other strategies.
std::vector<double> donor(Strategy s, const Population& pop, std::size_t i, std::size_t best,
                          std::span<const std::size_t> r, double F, double K = 0.0);

/// Samples `count` distinct indices in [0, NP) that differ from `i`.
std::vector<std::size_t> sample_distinct(std::size_t NP, std::size_t i, std::size_t count, Rng& rng);

/// Donor with freshly sampled indices, clipped to `bounds`.
std::vector<double> mutate(Strategy s, const Population& pop, std::size_t best, std::size_t i, double F,
                           const Bounds& bounds, Rng& rng);

/// Binomial crossover; component `forced` always comes from the donor.
std::vector<double> crossover_bin(std::span<const double> parent, std::span<const double> donor, double CR,
                                  std::size_t forced, Rng& rng);
std::vector<double> crossover_bin(std::span<const double> parent, std::span<const double> donor, double CR,
                                  Rng& rng);

/// True iff the trial strictly beats the parent; NaN never wins.
bool trial_wins(double parent_fitness, double trial_fitness);
const Candidate& select(const Candidate& parent, const Candidate& trial);

struct SadeConfig {
    std::size_t NP = 0;  // 0: ceil(10 d / 3)
    std::size_t LP = 3;  // learning period in generations
    double epsilon = 0.01;

    void validate() const;
};

struct SadeState {
    std::size_t LP = 3;
    double epsilon = 0.01;
    std::size_t generation = 0;  // completed generations
    std::array<double, kStrategyCount> p{0.25, 0.25, 0.25, 0.25};

    struct GenerationMemory {
        std::array<std::uint64_t, kStrategyCount> success{};
        std::array<std::uint64_t, kStrategyCount> failure{};
        std::array<std::vector<double>, kStrategyCount> successful_cr;
    };
    std::deque<GenerationMemory> history;  // last LP completed generations
    GenerationMemory current;

    explicit SadeState(std::size_t lp = 3, double eps = 0.01) : LP(lp), epsilon(eps) {}

    bool learning() const { return generation < LP; }
    /// Median of the successful CR values remembered for `s` (0.5 when none).
    double median_cr(Strategy s) const;
};

/// F ~ N(0.5, 0.3) resampled into (0, 1.4]; CR ~ N(0.5, 0.3) while learning,
/// N(median_cr, 0.1) afterwards, resampled into [0, 1].
std::pair<double, double> sade_sample_rates(const SadeState& state, Strategy s, Rng& rng);

void sade_update(SadeState& state, Strategy s, bool improved, double cr_used);

/// Closes a generation: rolls the memory window and recomputes p once the
/// learning period is over.
void sade_end_generation(SadeState& state);

Strategy sade_select_strategy(const SadeState& state, Rng& rng);

}  // namespace lgmd::opt
