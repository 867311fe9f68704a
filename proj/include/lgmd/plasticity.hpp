#pragma once

#include <cmath>

#include "lgmd/event_stream.hpp"

namespace lgmd {

/// Trace-based STDP rule with weights clamped to [1 - c, 1 + c].
///
/// A pre spike adds delta_pre to the pre trace and the post trace to w; a
/// post spike adds post_sign * delta_post to the post trace and the pre
/// trace to w. With post_sign = -1 (the default) a post-then-pre pairing
/// depresses the synapse.
struct StdpRule {
    double tau_pre = 10.0;   // ms
    double tau_post = 10.0;  // ms
    double delta_pre = 0.01;
    double delta_post = 0.01;
    double post_sign = -1.0;
    double clamp = 0.05;

    double w_min() const { return 1.0 - clamp; }
    double w_max() const { return 1.0 + clamp; }
};

struct PlasticState {
    double w = 1.0;
    double a_pre = 0.0;
    double a_post = 0.0;
    Timestamp last_update = 0;  // µs; traces are exact at this time
};

/// Decays both traces analytically up to `now`.
inline void decay_traces(PlasticState& s, const StdpRule& rule, Timestamp now) {
    if (now == s.last_update) return;
    const double elapsed_ms = static_cast<double>(now - s.last_update) * 1e-3;
    s.a_pre *= std::exp(-elapsed_ms / rule.tau_pre);
    s.a_post *= std::exp(-elapsed_ms / rule.tau_post);
    s.last_update = now;
}

inline double clamp_weight(double w, const StdpRule& rule) {
    return w < rule.w_min() ? rule.w_min() : (w > rule.w_max() ? rule.w_max() : w);
}

/// Pre-synaptic spike at `now`; returns the weight used for the injection.
inline double apply_stdp_on_pre(PlasticState& s, const StdpRule& rule, Timestamp now) {
    decay_traces(s, rule, now);
    const double used = s.w;
    s.a_pre += rule.delta_pre;
    s.w = clamp_weight(s.w + s.a_post, rule);
    return used;
}

inline void apply_stdp_on_post(PlasticState& s, const StdpRule& rule, Timestamp now) {
    decay_traces(s, rule, now);
    s.a_post += rule.post_sign * rule.delta_post;
    s.w = clamp_weight(s.w + s.a_pre, rule);
}

}  // namespace lgmd
