#pragma once

// Independent reference implementations used as test oracles. None of these
// call into the library code they are compared against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace oracle {

struct Aeif {
    double C = 124.2, g_L = 60.05, E_L = -73.12, V_T = -3.98, Delta_T = 6.71, V_r = -73.12;
    std::optional<double> a, b, tau_w;  // adaptation when set
};

/// Classic RK4 on (V, w) with a fine fixed step; a spike is registered at the
/// end of the first step whose V exceeds V_T. Returns spike times in ms;
/// `samples` receives V after every `sample_every` steps.
inline std::vector<double> aeif_rk4(const Aeif& m, double current, double duration_ms, double h_ms,
                                    std::vector<double>* samples = nullptr, std::int64_t sample_every = 1) {
    const bool adapt = m.a.has_value();
    const auto f = [&](double V, double w, double& dV, double& dw) {
        const double arg = std::min((V - m.V_T) / m.Delta_T, 20.0);
        dV = (-m.g_L * (V - m.E_L) + m.g_L * m.Delta_T * std::exp(arg) - w + current) / m.C;
        dw = adapt ? (*m.a * (V - m.E_L) - w) / *m.tau_w : 0.0;
    };
    double V = m.E_L, w = 0.0;
    std::vector<double> spikes;
    const auto steps = static_cast<std::int64_t>(std::llround(duration_ms / h_ms));
    for (std::int64_t n = 0; n < steps; ++n) {
        double k1v, k1w, k2v, k2w, k3v, k3w, k4v, k4w;
        f(V, w, k1v, k1w);
        f(V + 0.5 * h_ms * k1v, w + 0.5 * h_ms * k1w, k2v, k2w);
        f(V + 0.5 * h_ms * k2v, w + 0.5 * h_ms * k2w, k3v, k3w);
        f(V + h_ms * k3v, w + h_ms * k3w, k4v, k4w);
        V += h_ms / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        w += h_ms / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
        if (V > m.V_T) {
            spikes.push_back(static_cast<double>(n + 1) * h_ms);
            V = m.V_r;
            if (adapt) w += *m.b;
        }
        if (samples && (n + 1) % sample_every == 0) samples->push_back(V);
    }
    return spikes;
}

struct StdpParams {
    double tau_pre, tau_post, delta_pre, delta_post, post_sign, c;
};

struct StdpEvent {
    double t_ms;
    bool pre;
};

/// Replays a pre/post spike sequence for one synapse. Traces are evaluated
/// as sums of exponentials over the full event history, not incrementally.
/// Returns w after every event.
inline std::vector<double> stdp_replay(const StdpParams& p, const std::vector<StdpEvent>& events) {
    std::vector<double> out;
    double w = 1.0;
    const auto trace = [&](std::size_t upto, bool pre_trace) {
        double sum = 0.0;
        for (std::size_t j = 0; j < upto; ++j) {
            if (events[j].pre != pre_trace) continue;
            const double dt = events[upto].t_ms - events[j].t_ms;
            sum += pre_trace ? p.delta_pre * std::exp(-dt / p.tau_pre)
                             : p.post_sign * p.delta_post * std::exp(-dt / p.tau_post);
        }
        return sum;
    };
    for (std::size_t i = 0; i < events.size(); ++i) {
        // the trace of the spiking side already includes its own increment,
        // but only the opposite trace moves w
        const double other = trace(i, !events[i].pre);
        w = std::clamp(w + other, 1.0 - p.c, 1.0 + p.c);
        out.push_back(w);
    }
    return out;
}

/// U of sample a by direct pair counting (ties count one half).
inline double u_pairs(const std::vector<double>& a, const std::vector<double>& b) {
    double u = 0.0;
    for (double x : a) {
        for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
    }
    return u;
}

/// Two-sided permutation p of U over every relabelling of the pooled sample.
inline double u_permutation_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pool(a);
    pool.insert(pool.end(), b.begin(), b.end());
    const std::size_t n = pool.size(), na = a.size();
    const double centre = static_cast<double>(na * b.size()) / 2.0;
    const double observed = std::abs(u_pairs(a, b) - centre);
    std::uint64_t total = 0, extreme = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != na) continue;
        std::vector<double> xa, xb;
        for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? xa : xb).push_back(pool[i]);
        ++total;
        if (std::abs(u_pairs(xa, xb) - centre) >= observed - 1e-9) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace oracle
