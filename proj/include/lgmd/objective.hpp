#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgmd/event_stream.hpp"
#include "lgmd/neuro_sim.hpp"

namespace lgmd {

struct ClassifierConfig {
    double SL = 4.0;         // spikes per window
    double window_ms = 50.0;

    void validate() const;
    Timestamp window_us() const;
};

struct ScoreConstants {
    double k = 1.0;
    double l = 10.0;
    double c_pen = 1.0;
    double V_spk = 0.0;       // mV
    double V_r_obj = -73.12;  // mV
    double reward_sign = 1.0;  // +1: k exp(t/dt) + 1, -1: k exp(-t/dt) + 1

    void validate() const;
};

struct ConfusionCounts {
    std::uint64_t TP = 0, TN = 0, FP = 0, FN = 0;
    std::uint64_t total() const { return TP + TN + FP + FN; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Metrics {
    double Acc = 0.0, Sen = 0.0, Pre = 0.0, Spe = 0.0;
    friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct FitnessReport {
    double score = 0.0;
    double sseos = 0.0;
    double F = 0.0;
    double Acc = 0.0;
    double F_Acc = 0.0;
    ConfusionCounts confusion;
    Metrics metrics;
    friend bool operator==(const FitnessReport&, const FitnessReport&) = default;
};

class ObjectiveError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Spikes with t in the closed range [t, t + window]. `train` is sorted by time.
std::size_t spike_rate(std::span<const Spike> train, Timestamp t, Timestamp window);

/// Largest closed-window count over window starts inside [start, end),
/// counting only spikes that also fall inside [start, end).
std::size_t max_spike_rate(std::span<const Spike> train, Timestamp start, Timestamp end, Timestamp window);

/// One decision per label interval: looming iff the interval's max windowed
/// spike count is strictly above SL.
std::vector<bool> classify(const SimulationResult& result, std::span<const LabelInterval> labels,
                           const ClassifierConfig& config);

ConfusionCounts confusion(const std::vector<bool>& predicted, const std::vector<bool>& truth);
ConfusionCounts confusion(const std::vector<bool>& predicted, std::span<const LabelInterval> labels);

/// Ratios whose denominator is zero are reported as 1.
Metrics metrics(const ConfusionCounts& counts);

double reward(double t_ms, double interval_ms, const ScoreConstants& k);
/// Two linear segments from c_pen at the interval edges to l at its midpoint.
double punishment(double t_ms, double interval_ms, const ScoreConstants& k);

/// Sum of rewards for LGMD spikes inside looming intervals minus the sum of
/// punishments for spikes inside non-looming intervals.
double score(const SimulationResult& result, std::span<const LabelInterval> labels, const ScoreConstants& k);

/// Negated squared error between the spike-normalised LGMD trace and the
/// ideal trace (V_spk while looming, V_r_obj otherwise).
double sseos(const SimulationResult& result, std::span<const LabelInterval> labels, const ScoreConstants& k);

double f_acc(double F, double Acc);

FitnessReport evaluate(const SimulationResult& result, std::span<const LabelInterval> labels,
                       const ClassifierConfig& classifier, const ScoreConstants& constants);

/// Flat "key value" lines.
std::string to_text(const FitnessReport& report);
FitnessReport fitness_report_from_text(const std::string& text);

}  // namespace lgmd
