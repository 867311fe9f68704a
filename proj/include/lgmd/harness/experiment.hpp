#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lgmd/event_stream.hpp"
#include "lgmd/harness/config.hpp"
#include "lgmd/harness/stats.hpp"
#include "lgmd/neuro_sim.hpp"
#include "lgmd/objective.hpp"
#include "lgmd/optimizers/optimize.hpp"

namespace lgmd::harness {

// ---------------------------------------------------------------------------
// stimuli

/// circleFast, circleSlow, squareFast, squareSlow, composite, trainMix.
std::vector<std::string> preset_names();

struct StimulusConfig {
    std::string preset = "trainMix";
    std::filesystem::path recording;  // overrides the preset when set
    Resolution resolution{32, 32};
    double contrast_threshold = 0.03;
    double noise_rate_hz = 0.0;
    std::size_t intervals = 0;  // 0: preset default
};

/// Loom presets alternate rest and loom; `intervals` counts both kinds.
EventRecording make_preset(const std::string& name, Resolution resolution, double contrast_threshold,
                           double noise_rate_hz, std::uint64_t seed, std::size_t intervals = 0);
EventRecording make_stimulus(const StimulusConfig& config, std::uint64_t seed);

// ---------------------------------------------------------------------------
// configuration

struct ModelConfig {
    Variant variant = Variant::LGMD;
    double clamp = 0.05;
    double post_sign = -1.0;

    PlasticityParams plastic_defaults() const;
};

struct MethodSpec {
    std::string label;  // DE, SADE, BO-EI, BO-PI, BO-UCB
    opt::Method method = opt::Method::SADE;
    opt::AcquisitionKind acquisition = opt::AcquisitionKind::EI;
};

MethodSpec parse_method_label(const std::string& label);

struct ExperimentConfig {
    StimulusConfig stimulus;
    ModelConfig model;
    ClassifierConfig classifier;
    ScoreConstants score;
    opt::OptimizerConfig optimizer;
    std::string method_label = "SADE";
    std::size_t repeats = 1;
    std::vector<std::string> evaluate_presets;  // re-test the best candidate on these
    std::vector<std::string> compare_methods{"DE", "SADE", "BO-EI", "BO-PI", "BO-UCB"};
    std::vector<double> clamp_values{0.0, 0.01, 0.05, 0.1, 0.25, 0.5, 1.0};
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::filesystem::path out = "runs";

    void validate() const;
};

/// Throws ConfigError for malformed values and unknown keys.
ExperimentConfig experiment_from_ini(const IniFile& ini);
ExperimentConfig load_experiment(const std::filesystem::path& file);
/// Complete effective configuration; invented defaults carry "# not from paper".
std::string to_text(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// evaluation

FitnessReport evaluate_params(const Hyperparams& params, ModelFlags flags, const EventRecording& recording,
                              const ClassifierConfig& classifier, const ScoreConstants& score,
                              BoundsPolicy policy = BoundsPolicy::SearchSpace, SimulationResult* result = nullptr);

/// x -> F_Acc on `recording`; a diverging simulation yields NaN.
opt::Objective make_objective(const EventRecording& recording, const ExperimentConfig& config);

/// "name value" lines: variant, every search dimension, clamp and post_sign.
std::string params_to_text(const Hyperparams& params, Variant variant);
std::pair<Hyperparams, Variant> params_from_text(const std::string& text);

/// Creates <out>/<name>-NNN with the first free NNN; ConfigError when the
/// output location is not writable.
std::filesystem::path allocate_run_dir(const std::filesystem::path& out, const std::string& name);

// ---------------------------------------------------------------------------
// experiments

struct RepeatOutcome {
    std::uint64_t seed = 0;
    opt::OptimizerRun run;
    Hyperparams best;
    FitnessReport train_report;
    std::vector<std::pair<std::string, FitnessReport>> tests;
};

struct ExperimentOutcome {
    std::filesystem::path dir;
    std::vector<RepeatOutcome> repeats;
};

std::uint64_t repeat_seed(std::uint64_t master, std::size_t repeat);

/// Runs config.repeats optimisations into `dir` (created by the caller).
ExperimentOutcome run_experiment(const ExperimentConfig& config, const std::filesystem::path& dir);

inline constexpr std::array<const char*, 6> kComparisonMetrics{"Fit", "Eva", "Acc", "Sen", "Pre", "Spe"};

struct PairTest {
    std::string a, b;
    std::array<std::optional<MannWhitney>, 6> tests;  // empty when unavailable
};

struct ComparisonReport {
    std::vector<std::string> labels;
    std::vector<std::array<double, 6>> means;
    std::vector<std::vector<std::array<double, 6>>> samples;  // [method][repeat]
    std::vector<PairTest> pairs;  // every ordered pair a != b

    std::string summary_table() const;
    std::string significance_table() const;
};

ComparisonReport compare_samples(const std::vector<std::string>& labels,
                                 const std::vector<std::vector<std::array<double, 6>>>& samples);
ComparisonReport compare_optimizers(const ExperimentConfig& config, const std::filesystem::path& dir);

struct ClampRow {
    std::string label;  // "c" rows or the non-plastic baseline
    double c = 0.0;
    FitnessReport report;
};

/// Re-evaluates `params` (plastic variant) for every clamp value and adds
/// the non-plastic baseline as the last row.
std::vector<ClampRow> clamp_sweep(const Hyperparams& params, Variant variant, const EventRecording& recording,
                                  const ExperimentConfig& config, const std::vector<double>& values);
std::string clamp_table(const std::vector<ClampRow>& rows);

struct ExportResult {
    std::vector<std::filesystem::path> written;
    std::vector<std::string> missing;
};

/// Writes columnar plot data for an optimize/compare/simulate run directory.
ExportResult export_plots(const std::filesystem::path& run_dir, const std::filesystem::path& dest);

/// Simulates `params` on `recording` and writes spike trains, trace,
/// weight snapshots and the fitness record into `dir`.
FitnessReport simulate_to_dir(const Hyperparams& params, Variant variant, const EventRecording& recording,
                              const ExperimentConfig& config, const std::filesystem::path& dir);

}  // namespace lgmd::harness
