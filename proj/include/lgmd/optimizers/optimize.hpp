#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgmd/optimizers/acquisition.hpp"
#include "lgmd/optimizers/bounds.hpp"
#include "lgmd/optimizers/de.hpp"

namespace lgmd::opt {

enum class Method { DE, SADE, BO };

std::string to_string(Method m);
Method parse_method(const std::string& text);

using Objective = std::function<double(std::span<const double>)>;
/// Candidates in, fitnesses out, same order.
using BatchEvaluator = std::function<std::vector<double>(const std::vector<std::vector<double>>&)>;

/// Runs `objective` over a batch on up to `threads` worker threads. An
/// exception thrown by the objective is reported as NaN.
BatchEvaluator parallel_evaluator(Objective objective, unsigned threads);

struct BoConfig {
    AcquisitionConfig acquisition;
    std::size_t init_points = 0;  // 0: 3 d
    ProposalOptions proposal;
    std::size_t gp_restarts = 4;
    std::size_t refit_every = 1;  // hyper-parameter refits every k proposals
};

struct OptimizerConfig {
    Method method = Method::SADE;
    std::uint64_t budget = 1000;
    std::optional<std::uint64_t> patience;  // default 3 NP
    std::optional<double> target;           // stop once the best fitness reaches it
    std::uint64_t seed = 0;
    DeConfig de;
    SadeConfig sade;
    BoConfig bo;

    void validate() const;
    std::size_t population_size(std::size_t dims) const;
    std::uint64_t effective_patience(std::size_t dims) const;
};

struct EvaluationRecord {
    std::uint64_t index = 0;
    std::uint64_t generation = 0;  // 0: initialisation
    std::vector<double> x;
    double fitness = 0.0;  // -inf when failed
    bool failed = false;
    std::string strategy;  // "init", DE strategy name or acquisition
    double F = 0.0;        // NaN when unused
    double CR = 0.0;
};

struct GenerationRecord {
    std::uint64_t generation = 0;
    double best = 0.0;
    double mean = 0.0;       // over finite fitnesses of the population
    double mean_F = 0.0;     // rates used by this generation's trials
    double mean_CR = 0.0;
    std::array<double, kStrategyCount> p{};  // SADE probabilities in force
};

enum class StopReason { Budget, Patience, Target };

struct OptimizerRun {
    OptimizerConfig config;
    Bounds bounds;
    std::vector<EvaluationRecord> evaluations;
    std::vector<GenerationRecord> generations;
    std::vector<double> best_x;
    double best_fitness = 0.0;
    std::uint64_t failed = 0;
    StopReason stop = StopReason::Budget;
};

OptimizerRun optimize(const BatchEvaluator& evaluate, const Bounds& bounds, const OptimizerConfig& config);

/// Header, one line per evaluation and one per generation.
std::string to_record(const OptimizerRun& run);
void write_record(const std::filesystem::path& file, const OptimizerRun& run);

}  // namespace lgmd::opt
