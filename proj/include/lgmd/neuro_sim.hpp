#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgmd/event_stream.hpp"
#include "lgmd/optimizers/bounds.hpp"
#include "lgmd/plasticity.hpp"

namespace lgmd {

/// Fixed membrane constants (pF, nS, mV).
struct NeuronConstants {
    double C = 124.2;
    double g_L = 60.05;
    double E_L = -73.12;
    double V_T = -3.98;
    double Delta_T = 6.71;
    double V_r = -73.12;

    void validate() const;
};

struct AdaptationParams {
    double a = 1.0;       // sub-threshold coupling, pA per mV
    double b = 40.0;      // spike-triggered increment, pA
    double tau_w = 30.0;  // ms
};

struct PlasticityParams {
    double tau_pre = 10.0;  // ms
    double tau_post = 10.0;
    double delta_pre = 0.01;
    double delta_post = 0.01;
    double c = 0.05;          // weights clamped to [1 - c, 1 + c]
    double post_sign = -1.0;  // sign applied to delta_post
};

/// Network hyper-parameters; time constants in ms, injections in pA.
struct Hyperparams {
    double tau_e = 5.0;
    double tau_iA = 5.0;
    double tau_iB = 5.0;
    double q_eP = 1200.0;
    double q_eS = 3000.0;
    double q_eIP = 150.0;
    double q_eIS = 200.0;
    double q_eL = 200.0;
    double inhA_S = 0.5;
    double inhB_S = 0.5;
    double inhA_L = 0.5;
    std::optional<AdaptationParams> adaptation;
    std::optional<PlasticityParams> plasticity;
};

struct ModelFlags {
    bool adaptation = false;
    bool plasticity = false;
    friend bool operator==(const ModelFlags&, const ModelFlags&) = default;
};

enum class Variant { LGMD, A, P, AP };

ModelFlags flags_of(Variant variant);
std::string to_string(Variant variant);
Variant parse_variant(const std::string& text);

/// Search-space dimension names in optimiser order: the eleven base
/// parameters, then [a, b, tau_w] with adaptation, then
/// [tau_pre, tau_post, delta_pre, delta_post] with plasticity.
std::vector<std::string> parameter_names(ModelFlags flags);

/// Optimisation bounds of the search space for `flags`.
opt::Bounds search_bounds(ModelFlags flags);

/// Decodes a search-space vector. Plasticity settings not in the search
/// space (clamp, post sign) come from `plastic_defaults`.
Hyperparams hyperparams_from_vector(std::span<const double> x, ModelFlags flags,
                                    const PlasticityParams& plastic_defaults = {});
std::vector<double> hyperparams_to_vector(const Hyperparams& params, ModelFlags flags);

/// Hand-selected parameter sets reported for the four model variants.
Hyperparams reference_params(Variant variant);

class ParamError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SimulationDiverged : public std::runtime_error {
public:
    SimulationDiverged(std::uint64_t step, const std::string& where);
    std::uint64_t step() const { return step_; }

private:
    std::uint64_t step_;
};

enum class BoundsPolicy {
    SearchSpace,  // every optimised field must lie in search_bounds()
    Physical,     // only positivity / range constraints
};

/// Throws ParamError naming every offending field.
void validate_params(const Hyperparams& params, ModelFlags flags, BoundsPolicy policy);

enum class Layer : std::uint8_t { P = 0, S = 1, IP = 2, IS = 3, LGMD = 4 };
inline constexpr std::size_t kLayerCount = 5;
std::string to_string(Layer layer);

enum class SynapseKind : std::uint8_t { Excitatory, InhibitoryA, InhibitoryB };

struct NeuronState {
    double V = 0.0;
    double I_e = 0.0;
    double I_iA = 0.0;
    double I_iB = 0.0;
    double I_ad = 0.0;
};

struct Connection {
    std::uint32_t pre = 0;
    std::uint32_t post = 0;
    double base_weight = 1.0;
};

struct SynapseGroup {
    Layer source = Layer::P;
    Layer target = Layer::S;
    SynapseKind kind = SynapseKind::Excitatory;
    double q = 0.0;
    std::vector<Connection> connections;     // sorted by pre
    std::vector<std::uint32_t> pre_offsets;  // CSR index into connections
    bool plastic = false;
    std::vector<PlasticState> plastic_state;  // parallel to connections when plastic
    StdpRule rule;

    std::span<const Connection> outgoing(std::uint32_t pre) const {
        return std::span<const Connection>(connections).subspan(pre_offsets[pre],
                                                                pre_offsets[pre + 1] - pre_offsets[pre]);
    }
};

struct Spike {
    Timestamp t = 0;
    std::uint32_t neuron = 0;
    friend bool operator==(const Spike&, const Spike&) = default;
};

struct WeightSnapshot {
    Timestamp t = 0;
    std::vector<double> p_to_ip;  // row-major over the P layer
    double ip_to_lgmd = 1.0;
    double is_to_lgmd = 1.0;
    friend bool operator==(const WeightSnapshot&, const WeightSnapshot&) = default;
};

struct SimulationResult {
    Timestamp dt = 100;
    Resolution resolution;
    std::array<std::vector<Spike>, kLayerCount> spikes;
    std::vector<double> lgmd_trace;  // mV, one sample per step
    std::vector<WeightSnapshot> snapshots;

    const std::vector<Spike>& layer(Layer l) const { return spikes[static_cast<std::size_t>(l)]; }
    friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

/// Per-step integration settings shared by every neuron of a network.
struct NeuronDynamics {
    NeuronConstants constants;
    double dt_ms = 0.1;
    double decay_e = 0.0;  // Euler factors (1 - dt / tau)
    double decay_iA = 0.0;
    double decay_iB = 0.0;
    bool adaptation = false;
    AdaptationParams adapt;

    NeuronDynamics(const NeuronConstants& c, const Hyperparams& p, ModelFlags flags, double dt_ms);
};

inline constexpr double kExpArgumentCap = 20.0;
inline constexpr double kCurrentFloor = 1e-9;  // pA; smaller synaptic currents are flushed to 0

/// One forward-Euler step of a single neuron. Returns true on a spike, in
/// which case `pre_reset_v` receives the membrane value that crossed V_T.
bool integrate_neuron(NeuronState& s, const NeuronDynamics& d, double& pre_reset_v);

/// Euler fixed point of an unstimulated neuron (V slightly above E_L
/// because of the exponential term).
NeuronState resting_state(const NeuronDynamics& d);

/// Clock-driven LGMD network: P and S grids, IP and IS pooling neurons and
/// the LGMD output neuron.
class Network {
public:
    Network(Resolution resolution, const NeuronConstants& constants, const Hyperparams& params,
            ModelFlags flags, Timestamp dt = 100);

    Resolution resolution() const { return resolution_; }
    ModelFlags flags() const { return flags_; }
    const Hyperparams& params() const { return params_; }
    const NeuronConstants& constants() const { return dynamics_.constants; }
    Timestamp dt() const { return dt_; }
    std::uint64_t step_index() const { return step_; }
    Timestamp now() const { return step_ * dt_; }

    std::size_t layer_size(Layer l) const;
    NeuronState state(Layer l, std::size_t i) const;
    void set_state(Layer l, std::size_t i, const NeuronState& s);
    const std::vector<SynapseGroup>& synapse_groups() const { return groups_; }
    const SynapseGroup* find_group(Layer source, Layer target, SynapseKind kind) const;

    /// Advances one step. Events must lie in [now, now + dt).
    const std::array<std::vector<std::uint32_t>, kLayerCount>& step(std::span<const DvsEvent> events);
    /// Membrane value of the LGMD neuron recorded for the last step.
    double lgmd_sample() const { return lgmd_sample_; }

    WeightSnapshot weight_snapshot() const;

private:
    struct LayerState {
        std::vector<double> V, I_e, I_iA, I_iB, I_ad;
        std::vector<std::uint8_t> quiet;  // last update was a no-op and currents are zero
        void resize(std::size_t n, const NeuronState& rest);
    };

    void add_group(SynapseGroup group, std::size_t pre_count);
    void update_layer(Layer l);
    void deliver(SynapseGroup& group, std::span<const std::uint32_t> pre_spikes, Timestamp t);
    void post_spikes(SynapseGroup& group, std::span<const std::uint32_t> post_spikes, Timestamp t);
    void inject(Layer l, std::uint32_t i, SynapseKind kind, double amount);

    Resolution resolution_;
    Hyperparams params_;
    ModelFlags flags_;
    Timestamp dt_;
    NeuronDynamics dynamics_;
    std::array<LayerState, kLayerCount> layers_;
    std::vector<SynapseGroup> groups_;
    std::array<std::vector<std::uint32_t>, kLayerCount> fired_;
    std::uint64_t step_ = 0;
    double lgmd_sample_ = 0.0;
};

/// Builds the network after validating `params` against `policy`.
Network build_network(Resolution resolution, const NeuronConstants& constants, const Hyperparams& params,
                      ModelFlags flags, BoundsPolicy policy = BoundsPolicy::SearchSpace);

/// Simulates the whole recording at the network's time step.
SimulationResult run(Network& network, const EventRecording& recording);

/// Spike times (ms) of one neuron under a constant injected current,
/// integrated with the same Euler step the network uses.
std::vector<double> simulate_constant_drive(const NeuronConstants& constants,
                                            const std::optional<AdaptationParams>& adaptation,
                                            double current_pA, double duration_ms, double dt_ms,
                                            std::vector<double>* trace = nullptr);

// export helpers (plain text / raw binary for external plotting)
void write_spike_train(const std::filesystem::path& file, const std::vector<Spike>& spikes);
void write_trace(const std::filesystem::path& file, const std::vector<double>& trace);
std::vector<double> read_trace(const std::filesystem::path& file);
void write_weight_snapshots(const std::filesystem::path& file, const std::vector<WeightSnapshot>& snapshots,
                            Resolution resolution);

}  // namespace lgmd
