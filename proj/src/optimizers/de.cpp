#include "lgmd/optimizers/de.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lgmd::opt {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Rand1Bin: return "rand1bin";
        case Strategy::RandToBest2Bin: return "randtobest2bin";
        case Strategy::Rand2Bin: return "rand2bin";
        case Strategy::CurrToRand1: return "currtorand1";
    }
    return "?";
}

std::size_t random_indices_needed(Strategy s) {
    switch (s) {
        case Strategy::Rand1Bin: return 3;
        case Strategy::RandToBest2Bin: return 4;
        case Strategy::Rand2Bin: return 5;
        case Strategy::CurrToRand1: return 3;
    }
    return 5;
}

void DeConfig::validate() const {
    if (NP != 0 && NP < 4) throw std::invalid_argument("DE needs NP >= 4");
    if (!(F >= 0.0 && F <= 2.0)) throw std::invalid_argument("DE F must lie in [0, 2]");
    if (!(CR >= 0.0 && CR <= 1.0)) throw std::invalid_argument("DE CR must lie in [0, 1]");
}

void SadeConfig::validate() const {
    if (NP != 0 && NP < 6) throw std::invalid_argument("SADE needs NP >= 6");
    if (LP == 0) throw std::invalid_argument("SADE LP must be positive");
    if (!(epsilon > 0.0 && epsilon < 0.25)) throw std::invalid_argument("SADE epsilon must lie in (0, 0.25)");
}

std::size_t default_population_size(std::size_t dims) { return (10 * dims + 2) / 3; }

Population de_init(const Bounds& bounds, std::size_t NP, Rng& rng) {
    if (NP < 4) throw std::invalid_argument("population needs at least 4 members");
    Population pop(NP, std::vector<double>(bounds.size()));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& x : pop) {
        for (std::size_t d = 0; d < x.size(); ++d) {
            x[d] = std::min(bounds.lower[d] + u(rng) * bounds.width(d), bounds.upper[d]);
        }
    }
    return pop;
}

Population de_init(const Bounds& bounds, std::size_t NP, std::uint64_t seed) {
    Rng rng(seed);
    return de_init(bounds, NP, rng);
}

std::vector<double> donor(Strategy s, const Population& pop, std::size_t i, std::size_t best,
                          std::span<const std::size_t> r, double F, double K) {
    if (r.size() < random_indices_needed(s)) throw std::invalid_argument("not enough random indices");
    const auto& xi = pop[i];
    std::vector<double> v(xi.size());
    for (std::size_t d = 0; d < v.size(); ++d) {
        auto at = [&](std::size_t k) { return pop[r[k]][d]; };
        switch (s) {
            case Strategy::Rand1Bin: v[d] = at(0) + F * (at(1) - at(2)); break;
            case Strategy::RandToBest2Bin:
                v[d] = xi[d] + F * (pop[best][d] - xi[d]) + F * (at(0) - at(1)) + F * (at(2) - at(3));
                break;
            case Strategy::Rand2Bin: v[d] = at(0) + F * (at(1) - at(2)) + F * (at(3) - at(4)); break;
            case Strategy::CurrToRand1: v[d] = xi[d] + K * (at(0) - xi[d]) + F * (at(1) - at(2)); break;
        }
    }
    return v;
}

std::vector<std::size_t> sample_distinct(std::size_t NP, std::size_t i, std::size_t count, Rng& rng) {
    if (count + 1 > NP) throw std::invalid_argument("population too small for the strategy");
    std::vector<std::size_t> out;
    std::uniform_int_distribution<std::size_t> pick(0, NP - 1);
    while (out.size() < count) {
        const std::size_t r = pick(rng);
        if (r == i || std::find(out.begin(), out.end(), r) != out.end()) continue;
        out.push_back(r);
    }
    return out;
}

std::vector<double> mutate(Strategy s, const Population& pop, std::size_t best, std::size_t i, double F,
                           const Bounds& bounds, Rng& rng) {
    const auto r = sample_distinct(pop.size(), i, random_indices_needed(s), rng);
    double K = 0.0;
    if (s == Strategy::CurrToRand1) K = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    auto v = donor(s, pop, i, best, r, F, K);
    bounds.clip(v);
    return v;
}

std::vector<double> crossover_bin(std::span<const double> parent, std::span<const double> donor, double CR,
                                  std::size_t forced, Rng& rng) {
    std::vector<double> trial(parent.begin(), parent.end());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t d = 0; d < trial.size(); ++d) {
        if (u(rng) < CR || d == forced) trial[d] = donor[d];
    }
    return trial;
}

std::vector<double> crossover_bin(std::span<const double> parent, std::span<const double> donor, double CR,
                                  Rng& rng) {
    const std::size_t forced = std::uniform_int_distribution<std::size_t>(0, parent.size() - 1)(rng);
    return crossover_bin(parent, donor, CR, forced, rng);
}

bool trial_wins(double parent_fitness, double trial_fitness) { return trial_fitness > parent_fitness; }

const Candidate& select(const Candidate& parent, const Candidate& trial) {
    if (!trial.fitness) return parent;
    if (!parent.fitness) return std::isnan(*trial.fitness) ? parent : trial;
    return trial_wins(*parent.fitness, *trial.fitness) ? trial : parent;
}

double SadeState::median_cr(Strategy s) const {
    std::vector<double> all;
    for (const auto& g : history) {
        const auto& v = g.successful_cr[static_cast<std::size_t>(s)];
        all.insert(all.end(), v.begin(), v.end());
    }
    if (all.empty()) return 0.5;
    std::sort(all.begin(), all.end());
    const std::size_t n = all.size();
    return n % 2 ? all[n / 2] : 0.5 * (all[n / 2 - 1] + all[n / 2]);
}

std::pair<double, double> sade_sample_rates(const SadeState& state, Strategy s, Rng& rng) {
    std::normal_distribution<double> f_dist(0.5, 0.3);
    double F = 0.0;
    do {
        F = f_dist(rng);
    } while (!(F > 0.0 && F <= 1.4));
    std::normal_distribution<double> cr_dist = state.learning() ? std::normal_distribution<double>(0.5, 0.3)
                                                                : std::normal_distribution<double>(state.median_cr(s), 0.1);
    double CR = 0.0;
    do {
        CR = cr_dist(rng);
    } while (!(CR >= 0.0 && CR <= 1.0));
    return {F, CR};
}

void sade_update(SadeState& state, Strategy s, bool improved, double cr_used) {
    const auto k = static_cast<std::size_t>(s);
    if (improved) {
        ++state.current.success[k];
        state.current.successful_cr[k].push_back(cr_used);
    } else {
        ++state.current.failure[k];
    }
}

void sade_end_generation(SadeState& state) {
    state.history.push_back(std::move(state.current));
    state.current = {};
    while (state.history.size() > state.LP) state.history.pop_front();
    ++state.generation;
    if (state.learning()) return;

    std::array<double, kStrategyCount> rate{};
    double total = 0.0;
    for (std::size_t k = 0; k < kStrategyCount; ++k) {
        std::uint64_t ns = 0, nf = 0;
        for (const auto& g : state.history) {
            ns += g.success[k];
            nf += g.failure[k];
        }
        rate[k] = ns + nf == 0 ? 0.0 : static_cast<double>(ns) / static_cast<double>(ns + nf);
        total += rate[k];
    }
    for (std::size_t k = 0; k < kStrategyCount; ++k) {
        state.p[k] = total == 0.0 ? 1.0 / kStrategyCount
                                  : state.epsilon + (1.0 - kStrategyCount * state.epsilon) * rate[k] / total;
    }
}

Strategy sade_select_strategy(const SadeState& state, Rng& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < kStrategyCount; ++k) {
        acc += state.p[k];
        if (u < acc) return static_cast<Strategy>(k);
    }
    return static_cast<Strategy>(kStrategyCount - 1);
}

}  // namespace lgmd::opt
