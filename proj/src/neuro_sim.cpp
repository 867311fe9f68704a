#include "lgmd/neuro_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "lgmd/util.hpp"

namespace lgmd {

void NeuronConstants::validate() const {
    std::vector<std::string> bad;
    if (!(C > 0.0)) bad.push_back("C");
    if (!(g_L > 0.0)) bad.push_back("g_L");
    if (!(Delta_T > 0.0)) bad.push_back("Delta_T");
    if (!(E_L < V_T)) bad.push_back("E_L/V_T");
    if (!(V_r <= E_L)) bad.push_back("V_r");
    if (!bad.empty()) {
        std::string msg = "invalid neuron constants:";
        for (const auto& b : bad) msg += " " + b;
        throw ParamError(msg);
    }
}

ModelFlags flags_of(Variant v) {
    switch (v) {
        case Variant::LGMD: return {false, false};
        case Variant::A: return {true, false};
        case Variant::P: return {false, true};
        case Variant::AP: return {true, true};
    }
    return {};
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::LGMD: return "LGMD";
        case Variant::A: return "A";
        case Variant::P: return "P";
        case Variant::AP: return "AP";
    }
    return "LGMD";
}

Variant parse_variant(const std::string& text) {
    if (text == "LGMD" || text == "lgmd") return Variant::LGMD;
    if (text == "A" || text == "a") return Variant::A;
    if (text == "P" || text == "p") return Variant::P;
    if (text == "AP" || text == "ap") return Variant::AP;
    throw ParamError("unknown model variant '" + text + "'");
}

std::string to_string(Layer l) {
    static const char* names[] = {"P", "S", "IP", "IS", "LGMD"};
    return names[static_cast<std::size_t>(l)];
}

namespace {

struct Dim {
    const char* name;
    double lo, hi;
};

constexpr Dim kBaseDims[] = {
    {"tau_e", 1, 10},      {"tau_iA", 1, 20},    {"tau_iB", 1, 25},     {"q_eP", 1014, 1363},
    {"q_eS", 2000, 5000},  {"q_eIP", 84, 230},   {"q_eIS", 119, 270},   {"q_eL", 29, 472},
    {"inhA_S", 0.04, 1.22}, {"inhB_S", 0.24, 1.5}, {"inhA_L", 0.019, 1.3},
};
constexpr Dim kAdaptDims[] = {{"a", 1, 8}, {"b", 40, 141}, {"tau_w", 1, 150}};
constexpr Dim kPlasticDims[] = {
    {"tau_pre", 1, 25}, {"tau_post", 1, 25}, {"delta_pre", 1e-16, 0.05}, {"delta_post", 1e-16, 0.05}};

std::vector<Dim> dims_for(ModelFlags flags) {
    std::vector<Dim> dims(std::begin(kBaseDims), std::end(kBaseDims));
    if (flags.adaptation) dims.insert(dims.end(), std::begin(kAdaptDims), std::end(kAdaptDims));
    if (flags.plasticity) dims.insert(dims.end(), std::begin(kPlasticDims), std::end(kPlasticDims));
    return dims;
}

}  // namespace

std::vector<std::string> parameter_names(ModelFlags flags) {
    std::vector<std::string> out;
    for (const auto& d : dims_for(flags)) out.emplace_back(d.name);
    return out;
}

opt::Bounds search_bounds(ModelFlags flags) {
    std::vector<double> lo, hi;
    std::vector<std::string> names;
    for (const auto& d : dims_for(flags)) {
        names.emplace_back(d.name);
        lo.push_back(d.lo);
        hi.push_back(d.hi);
    }
    return opt::Bounds(std::move(lo), std::move(hi), std::move(names));
}

Hyperparams hyperparams_from_vector(std::span<const double> x, ModelFlags flags,
                                    const PlasticityParams& plastic_defaults) {
    const std::size_t expected = dims_for(flags).size();
    if (x.size() != expected) {
        throw ParamError("expected " + std::to_string(expected) + " parameters, got " + std::to_string(x.size()));
    }
    Hyperparams p;
    std::size_t i = 0;
    for (double* field : {&p.tau_e, &p.tau_iA, &p.tau_iB, &p.q_eP, &p.q_eS, &p.q_eIP, &p.q_eIS, &p.q_eL,
                          &p.inhA_S, &p.inhB_S, &p.inhA_L}) {
        *field = x[i++];
    }
    if (flags.adaptation) {
        p.adaptation = AdaptationParams{x[i], x[i + 1], x[i + 2]};
        i += 3;
    }
    if (flags.plasticity) {
        PlasticityParams pl = plastic_defaults;
        pl.tau_pre = x[i];
        pl.tau_post = x[i + 1];
        pl.delta_pre = x[i + 2];
        pl.delta_post = x[i + 3];
        p.plasticity = pl;
    }
    return p;
}

std::vector<double> hyperparams_to_vector(const Hyperparams& p, ModelFlags flags) {
    std::vector<double> x{p.tau_e, p.tau_iA, p.tau_iB, p.q_eP,   p.q_eS,  p.q_eIP,
                          p.q_eIS, p.q_eL,   p.inhA_S, p.inhB_S, p.inhA_L};
    if (flags.adaptation) {
        if (!p.adaptation) throw ParamError("adaptation enabled but no adaptation parameters");
        x.insert(x.end(), {p.adaptation->a, p.adaptation->b, p.adaptation->tau_w});
    }
    if (flags.plasticity) {
        if (!p.plasticity) throw ParamError("plasticity enabled but no plasticity parameters");
        x.insert(x.end(), {p.plasticity->tau_pre, p.plasticity->tau_post, p.plasticity->delta_pre,
                           p.plasticity->delta_post});
    }
    return x;
}

Hyperparams reference_params(Variant variant) {
    const ModelFlags flags = flags_of(variant);
    Hyperparams p;
    p.tau_e = 5.87;
    p.tau_iA = 3.57;
    p.tau_iB = 4.20;
    p.q_eP = 1014.0;
    p.q_eS = 4635.3;
    p.q_eIP = 84.26;
    p.q_eIS = 168.11;
    p.q_eL = flags.adaptation ? 100.0 : 80.0;
    p.inhA_S = 1.19;
    p.inhB_S = 1.50;
    p.inhA_L = 0.14;
    if (flags.adaptation) p.adaptation = AdaptationParams{0.79, 14.51, 30.0};
    if (flags.plasticity) p.plasticity = PlasticityParams{1.56, 10.03, 0.031, 0.027, 0.05, -1.0};
    return p;
}

SimulationDiverged::SimulationDiverged(std::uint64_t step, const std::string& where)
    : std::runtime_error("simulation diverged at step " + std::to_string(step) + " (" + where + ")"),
      step_(step) {}

void validate_params(const Hyperparams& p, ModelFlags flags, BoundsPolicy policy) {
    std::vector<std::string> bad;
    if (flags.adaptation && !p.adaptation) bad.push_back("adaptation block missing");
    if (flags.plasticity && !p.plasticity) bad.push_back("plasticity block missing");
    if (bad.empty()) {
        const auto x = hyperparams_to_vector(p, flags);
        const auto names = parameter_names(flags);
        const auto bounds = search_bounds(flags);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const bool finite = std::isfinite(x[i]);
            if (policy == BoundsPolicy::SearchSpace) {
                if (!finite || x[i] < bounds.lower[i] || x[i] > bounds.upper[i]) bad.push_back(names[i]);
            } else {
                // time constants and q's must be positive, ratios and deltas non-negative
                const bool ok = finite && (names[i].rfind("tau", 0) == 0 ? x[i] > 0.0 : x[i] >= 0.0);
                if (!ok) bad.push_back(names[i]);
            }
        }
        if (flags.plasticity) {
            const double c = p.plasticity->c;
            if (!(c >= 0.0 && c <= 1.0)) bad.push_back("c");
            if (!(p.plasticity->post_sign == 1.0 || p.plasticity->post_sign == -1.0)) bad.push_back("post_sign");
        }
    }
    if (!bad.empty()) {
        std::string msg = "parameters out of bounds:";
        for (const auto& b : bad) msg += " " + b;
        throw ParamError(msg);
    }
}

// ---------------------------------------------------------------------------
// single-neuron dynamics

NeuronDynamics::NeuronDynamics(const NeuronConstants& c, const Hyperparams& p, ModelFlags flags, double dt)
    : constants(c),
      dt_ms(dt),
      decay_e(1.0 - dt / p.tau_e),
      decay_iA(1.0 - dt / p.tau_iA),
      decay_iB(1.0 - dt / p.tau_iB),
      adaptation(flags.adaptation) {
    if (flags.adaptation) adapt = p.adaptation.value();
}

namespace {

inline double flush(double i) { return std::abs(i) < kCurrentFloor ? 0.0 : i; }

SynapseGroup make_group(Layer from, Layer to, SynapseKind kind, double q) {
    SynapseGroup g;
    g.source = from;
    g.target = to;
    g.kind = kind;
    g.q = q;
    return g;
}

}  // namespace

bool integrate_neuron(NeuronState& s, const NeuronDynamics& d, double& pre_reset_v) {
    const NeuronConstants& k = d.constants;
    const double current = s.I_e - s.I_iA - s.I_iB - s.I_ad;
    const double arg = std::min((s.V - k.V_T) / k.Delta_T, kExpArgumentCap);
    const double dv = d.dt_ms * (-k.g_L * (s.V - k.E_L) + k.g_L * k.Delta_T * std::exp(arg) + current) / k.C;
    if (d.adaptation) {
        s.I_ad += d.dt_ms * (d.adapt.a * (s.V - k.E_L) - s.I_ad) / d.adapt.tau_w;
    }
    s.V += dv;
    s.I_e = flush(s.I_e * d.decay_e);
    s.I_iA = flush(s.I_iA * d.decay_iA);
    s.I_iB = flush(s.I_iB * d.decay_iB);
    if (s.V > k.V_T) {
        pre_reset_v = s.V;
        s.V = k.V_r;
        if (d.adaptation) s.I_ad += d.adapt.b;
        return true;
    }
    return false;
}

NeuronState resting_state(const NeuronDynamics& d) {
    NeuronState s;
    s.V = d.constants.E_L;
    double ignored = 0.0;
    for (int i = 0; i < 2'000'000; ++i) {
        const NeuronState before = s;
        integrate_neuron(s, d, ignored);
        if (s.V == before.V && s.I_ad == before.I_ad) break;
    }
    return s;
}

std::vector<double> simulate_constant_drive(const NeuronConstants& constants,
                                            const std::optional<AdaptationParams>& adaptation,
                                            double current_pA, double duration_ms, double dt_ms,
                                            std::vector<double>* trace) {
    Hyperparams p;
    p.adaptation = adaptation;
    const NeuronDynamics d(constants, p, ModelFlags{adaptation.has_value(), false}, dt_ms);
    NeuronState s;
    s.V = constants.E_L;
    std::vector<double> spikes;
    const auto steps = static_cast<std::size_t>(std::llround(duration_ms / dt_ms));
    if (trace) trace->clear();
    for (std::size_t n = 0; n < steps; ++n) {
        s.I_e = current_pA;
        double v = 0.0;
        const bool spiked = integrate_neuron(s, d, v);
        if (spiked) spikes.push_back(static_cast<double>(n + 1) * dt_ms);
        if (trace) trace->push_back(spiked ? v : s.V);
    }
    return spikes;
}

// ---------------------------------------------------------------------------
// network

void Network::LayerState::resize(std::size_t n, const NeuronState& rest) {
    V.assign(n, rest.V);
    I_e.assign(n, 0.0);
    I_iA.assign(n, 0.0);
    I_iB.assign(n, 0.0);
    I_ad.assign(n, rest.I_ad);
    quiet.assign(n, 1);
}

Network::Network(Resolution resolution, const NeuronConstants& constants, const Hyperparams& params,
                 ModelFlags flags, Timestamp dt)
    : resolution_(resolution),
      params_(params),
      flags_(flags),
      dt_(dt),
      dynamics_(constants, params, flags, static_cast<double>(dt) * 1e-3) {
    if (resolution.width < 3 || resolution.height < 3) throw ParamError("resolution must be at least 3x3");
    const NeuronState rest = resting_state(dynamics_);
    const std::size_t n = resolution.pixels();
    layers_[0].resize(n, rest);
    layers_[1].resize(n, rest);
    for (std::size_t l = 2; l < kLayerCount; ++l) layers_[l].resize(1, rest);
    lgmd_sample_ = rest.V;

    const int w = resolution.width;
    const int h = resolution.height;
    SynapseGroup centre = make_group(Layer::P, Layer::S, SynapseKind::Excitatory, params.q_eS);
    SynapseGroup ring_a = make_group(Layer::P, Layer::S, SynapseKind::InhibitoryA, params.inhA_S * params.q_eS);
    SynapseGroup ring_b = make_group(Layer::P, Layer::S, SynapseKind::InhibitoryB, params.inhB_S * params.q_eS);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto pre = static_cast<std::uint32_t>(y * w + x);
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int tx = x + dx;
                    const int ty = y + dy;
                    if (tx < 0 || ty < 0 || tx >= w || ty >= h) continue;  // truncated at the border
                    const Connection c{pre, static_cast<std::uint32_t>(ty * w + tx), 1.0};
                    if (dx == 0 && dy == 0) {
                        centre.connections.push_back(c);
                    } else if (dx == 0 || dy == 0) {
                        ring_a.connections.push_back(c);
                    } else {
                        ring_b.connections.push_back(c);
                    }
                }
            }
        }
    }
    add_group(std::move(centre), n);
    add_group(std::move(ring_a), n);
    add_group(std::move(ring_b), n);

    auto pooled = [](Layer from, Layer to, SynapseKind kind, double q, std::size_t count) {
        SynapseGroup g = make_group(from, to, kind, q);
        for (std::size_t i = 0; i < count; ++i) g.connections.push_back({static_cast<std::uint32_t>(i), 0, 1.0});
        return g;
    };
    SynapseGroup p_ip = pooled(Layer::P, Layer::IP, SynapseKind::Excitatory, params.q_eIP, n);
    SynapseGroup s_is = pooled(Layer::S, Layer::IS, SynapseKind::Excitatory, params.q_eIS, n);
    SynapseGroup is_l = pooled(Layer::IS, Layer::LGMD, SynapseKind::Excitatory, params.q_eL, 1);
    SynapseGroup ip_l = pooled(Layer::IP, Layer::LGMD, SynapseKind::InhibitoryA, params.inhA_L * params.q_eL, 1);
    if (flags.plasticity) {
        const PlasticityParams& pl = params.plasticity.value();
        const StdpRule rule{pl.tau_pre, pl.tau_post, pl.delta_pre, pl.delta_post, pl.post_sign, pl.c};
        for (SynapseGroup* g : {&p_ip, &is_l, &ip_l}) {
            g->plastic = true;
            g->rule = rule;
            g->plastic_state.assign(g->connections.size(), PlasticState{});
        }
    }
    add_group(std::move(p_ip), n);
    add_group(std::move(s_is), n);
    add_group(std::move(is_l), 1);
    add_group(std::move(ip_l), 1);
}

void Network::add_group(SynapseGroup group, std::size_t pre_count) {
    std::stable_sort(group.connections.begin(), group.connections.end(),
                     [](const Connection& a, const Connection& b) { return a.pre < b.pre; });
    group.pre_offsets.assign(pre_count + 1, 0);
    for (const auto& c : group.connections) ++group.pre_offsets[c.pre + 1];
    for (std::size_t i = 0; i < pre_count; ++i) group.pre_offsets[i + 1] += group.pre_offsets[i];
    groups_.push_back(std::move(group));
}

std::size_t Network::layer_size(Layer l) const { return layers_[static_cast<std::size_t>(l)].V.size(); }

NeuronState Network::state(Layer l, std::size_t i) const {
    const auto& L = layers_[static_cast<std::size_t>(l)];
    return {L.V.at(i), L.I_e.at(i), L.I_iA.at(i), L.I_iB.at(i), L.I_ad.at(i)};
}

void Network::set_state(Layer l, std::size_t i, const NeuronState& s) {
    auto& L = layers_[static_cast<std::size_t>(l)];
    L.V.at(i) = s.V;
    L.I_e[i] = s.I_e;
    L.I_iA[i] = s.I_iA;
    L.I_iB[i] = s.I_iB;
    L.I_ad[i] = s.I_ad;
    L.quiet[i] = 0;
}

const SynapseGroup* Network::find_group(Layer source, Layer target, SynapseKind kind) const {
    for (const auto& g : groups_) {
        if (g.source == source && g.target == target && g.kind == kind) return &g;
    }
    return nullptr;
}

void Network::inject(Layer l, std::uint32_t i, SynapseKind kind, double amount) {
    auto& L = layers_[static_cast<std::size_t>(l)];
    switch (kind) {
        case SynapseKind::Excitatory: L.I_e[i] += amount; break;
        case SynapseKind::InhibitoryA: L.I_iA[i] += amount; break;
        case SynapseKind::InhibitoryB: L.I_iB[i] += amount; break;
    }
    L.quiet[i] = 0;
}

void Network::update_layer(Layer l) {
    const auto li = static_cast<std::size_t>(l);
    auto& L = layers_[li];
    auto& fired = fired_[li];
    const std::size_t n = L.V.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (L.quiet[i]) {
            if (l == Layer::LGMD) lgmd_sample_ = L.V[i];
            continue;
        }
        NeuronState s{L.V[i], L.I_e[i], L.I_iA[i], L.I_iB[i], L.I_ad[i]};
        double v_crossed = 0.0;
        const bool spiked = integrate_neuron(s, dynamics_, v_crossed);
        if (!std::isfinite(s.V) || !std::isfinite(s.I_ad) || !std::isfinite(s.I_e) || !std::isfinite(s.I_iA) ||
            !std::isfinite(s.I_iB) || (spiked && !std::isfinite(v_crossed))) {
            throw SimulationDiverged(step_, to_string(l) + " neuron " + std::to_string(i));
        }
        L.quiet[i] = !spiked && s.V == L.V[i] && s.I_ad == L.I_ad[i] && s.I_e == 0.0 && s.I_iA == 0.0 &&
                     s.I_iB == 0.0;
        L.V[i] = s.V;
        L.I_e[i] = s.I_e;
        L.I_iA[i] = s.I_iA;
        L.I_iB[i] = s.I_iB;
        L.I_ad[i] = s.I_ad;
        if (spiked) fired.push_back(static_cast<std::uint32_t>(i));
        if (l == Layer::LGMD) lgmd_sample_ = spiked ? v_crossed : s.V;
    }
}

void Network::deliver(SynapseGroup& g, std::span<const std::uint32_t> pre_spikes, Timestamp t) {
    for (const auto pre : pre_spikes) {
        const std::uint32_t begin = g.pre_offsets[pre];
        const std::uint32_t end = g.pre_offsets[pre + 1];
        for (std::uint32_t k = begin; k < end; ++k) {
            const Connection& c = g.connections[k];
            double w = c.base_weight;
            if (g.plastic) w *= apply_stdp_on_pre(g.plastic_state[k], g.rule, t);
            inject(g.target, c.post, g.kind, w * g.q);
        }
    }
}

void Network::post_spikes(SynapseGroup& g, std::span<const std::uint32_t> posts, Timestamp t) {
    if (!g.plastic || posts.empty()) return;
    // every pooled group has a single post neuron, but keep this general
    for (const auto post : posts) {
        for (std::size_t k = 0; k < g.connections.size(); ++k) {
            if (g.connections[k].post == post) apply_stdp_on_post(g.plastic_state[k], g.rule, t);
        }
    }
}

const std::array<std::vector<std::uint32_t>, kLayerCount>& Network::step(std::span<const DvsEvent> events) {
    const Timestamp t = now();
    for (auto& f : fired_) f.clear();
    const std::uint32_t w = resolution_.width;
    for (const auto& e : events) {
        if (e.t < t || e.t >= t + dt_) throw std::invalid_argument("event outside the current step window");
        inject(Layer::P, e.y * w + e.x, SynapseKind::Excitatory, params_.q_eP);
    }
    for (std::size_t l = 0; l < kLayerCount; ++l) update_layer(static_cast<Layer>(l));
    for (auto& g : groups_) {
        deliver(g, fired_[static_cast<std::size_t>(g.source)], t);
        post_spikes(g, fired_[static_cast<std::size_t>(g.target)], t);
    }
    ++step_;
    return fired_;
}

WeightSnapshot Network::weight_snapshot() const {
    WeightSnapshot snap;
    snap.t = now();
    const auto* p_ip = find_group(Layer::P, Layer::IP, SynapseKind::Excitatory);
    snap.p_to_ip.assign(layer_size(Layer::P), 1.0);
    if (p_ip && p_ip->plastic) {
        for (std::size_t k = 0; k < p_ip->connections.size(); ++k) {
            snap.p_to_ip[p_ip->connections[k].pre] = p_ip->plastic_state[k].w;
        }
    }
    const auto* ip_l = find_group(Layer::IP, Layer::LGMD, SynapseKind::InhibitoryA);
    const auto* is_l = find_group(Layer::IS, Layer::LGMD, SynapseKind::Excitatory);
    if (ip_l && ip_l->plastic) snap.ip_to_lgmd = ip_l->plastic_state[0].w;
    if (is_l && is_l->plastic) snap.is_to_lgmd = is_l->plastic_state[0].w;
    return snap;
}

Network build_network(Resolution resolution, const NeuronConstants& constants, const Hyperparams& params,
                      ModelFlags flags, BoundsPolicy policy) {
    constants.validate();
    validate_params(params, flags, policy);
    return Network(resolution, constants, params, flags);
}

SimulationResult run(Network& net, const EventRecording& rec) {
    if (!(rec.resolution == net.resolution())) {
        throw std::invalid_argument("recording resolution does not match the network");
    }
    SimulationResult result;
    result.dt = net.dt();
    result.resolution = net.resolution();
    const Timestamp dt = net.dt();
    const auto steps = static_cast<std::size_t>((rec.duration + dt - 1) / dt);
    result.lgmd_trace.reserve(steps);
    std::size_t next_label = 0;
    auto cursor = rec.events.begin();
    for (std::size_t n = 0; n < steps; ++n) {
        const Timestamp t = net.now();
        auto stop = cursor;
        while (stop != rec.events.end() && stop->t < t + dt) ++stop;
        const auto& fired = net.step(std::span<const DvsEvent>(cursor, stop));
        cursor = stop;
        for (std::size_t l = 0; l < kLayerCount; ++l) {
            for (const auto i : fired[l]) result.spikes[l].push_back({t, i});
        }
        result.lgmd_trace.push_back(net.lgmd_sample());
        if (net.flags().plasticity) {
            while (next_label < rec.labels.size() && rec.labels[next_label].end <= net.now()) {
                WeightSnapshot snap = net.weight_snapshot();
                snap.t = rec.labels[next_label].end;
                result.snapshots.push_back(std::move(snap));
                ++next_label;
            }
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// export

void write_spike_train(const std::filesystem::path& file, const std::vector<Spike>& spikes) {
    std::ostringstream os;
    for (const auto& s : spikes) os << s.t << ' ' << s.neuron << '\n';
    write_new_file(file, os.str());
}

void write_trace(const std::filesystem::path& file, const std::vector<double>& trace) {
    std::string bytes(trace.size() * sizeof(double), '\0');
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &trace[i], sizeof bits);
        for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
    }
    write_new_file(file, bytes);
}

std::vector<double> read_trace(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() % 8 != 0) throw std::runtime_error(file.string() + ": size is not a multiple of 8");
    std::vector<double> out(bytes.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= std::uint64_t{static_cast<unsigned char>(bytes[i * 8 + b])} << (8 * b);
        std::memcpy(&out[i], &bits, sizeof bits);
    }
    return out;
}

void write_weight_snapshots(const std::filesystem::path& file, const std::vector<WeightSnapshot>& snapshots,
                            Resolution res) {
    std::ostringstream os;
    for (const auto& s : snapshots) {
        os << "# t_us " << s.t << " ip_to_lgmd " << format_double(s.ip_to_lgmd) << " is_to_lgmd "
           << format_double(s.is_to_lgmd) << '\n';
        for (std::size_t y = 0; y < res.height; ++y) {
            for (std::size_t x = 0; x < res.width; ++x) {
                if (x) os << ' ';
                os << format_double(s.p_to_ip[y * res.width + x]);
            }
            os << '\n';
        }
    }
    write_new_file(file, os.str());
}

}  // namespace lgmd
