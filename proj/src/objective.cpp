#include "lgmd/objective.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "lgmd/util.hpp"

namespace lgmd {

void ClassifierConfig::validate() const {
    if (!(SL > 0.0)) throw ObjectiveError("SL must be positive");
    if (!(window_ms > 0.0)) throw ObjectiveError("window must be positive");
}

Timestamp ClassifierConfig::window_us() const { return static_cast<Timestamp>(std::llround(window_ms * 1000.0)); }

void ScoreConstants::validate() const {
    if (!(k > 0.0)) throw ObjectiveError("k must be positive");
    if (!(c_pen >= 0.0 && l >= c_pen)) throw ObjectiveError("need l >= c_pen >= 0");
    if (!std::isfinite(V_spk) || !std::isfinite(V_r_obj)) throw ObjectiveError("V_spk and V_r_obj must be finite");
    if (!(reward_sign == 1.0 || reward_sign == -1.0)) throw ObjectiveError("reward_sign must be +1 or -1");
}

namespace {

auto first_at_or_after(std::span<const Spike> train, Timestamp t) {
    return std::lower_bound(train.begin(), train.end(), t, [](const Spike& s, Timestamp v) { return s.t < v; });
}

const LabelInterval* enclosing(std::span<const LabelInterval> labels, Timestamp t) {
    auto it = std::upper_bound(labels.begin(), labels.end(), t,
                               [](Timestamp v, const LabelInterval& l) { return v < l.start; });
    if (it == labels.begin()) return nullptr;
    --it;
    return t < it->end ? &*it : nullptr;
}

}  // namespace

std::size_t spike_rate(std::span<const Spike> train, Timestamp t, Timestamp window) {
    const auto lo = first_at_or_after(train, t);
    const auto hi = std::upper_bound(lo, train.end(), t + window,
                                     [](Timestamp v, const Spike& s) { return v < s.t; });
    return static_cast<std::size_t>(hi - lo);
}

std::size_t max_spike_rate(std::span<const Spike> train, Timestamp start, Timestamp end, Timestamp window) {
    const auto lo = first_at_or_after(train, start);
    const auto hi = first_at_or_after(train, end);
    std::size_t best = 0;
    // the best window can always be slid right until it starts on a spike
    auto right = lo;
    for (auto left = lo; left != hi; ++left) {
        if (right < left) right = left;
        while (right != hi && right->t <= left->t + window) ++right;
        best = std::max(best, static_cast<std::size_t>(right - left));
    }
    return best;
}

std::vector<bool> classify(const SimulationResult& result, std::span<const LabelInterval> labels,
                           const ClassifierConfig& config) {
    config.validate();
    const auto& train = result.layer(Layer::LGMD);
    std::vector<bool> out;
    out.reserve(labels.size());
    for (const auto& l : labels) {
        const auto sr = max_spike_rate(train, l.start, l.end, config.window_us());
        out.push_back(static_cast<double>(sr) > config.SL);
    }
    return out;
}

ConfusionCounts confusion(const std::vector<bool>& predicted, const std::vector<bool>& truth) {
    if (predicted.size() != truth.size()) {
        throw ObjectiveError("prediction/label length mismatch: " + std::to_string(predicted.size()) + " vs " +
                             std::to_string(truth.size()));
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (truth[i]) {
            (predicted[i] ? c.TP : c.FN)++;
        } else {
            (predicted[i] ? c.FP : c.TN)++;
        }
    }
    return c;
}

ConfusionCounts confusion(const std::vector<bool>& predicted, std::span<const LabelInterval> labels) {
    std::vector<bool> truth;
    truth.reserve(labels.size());
    for (const auto& l : labels) truth.push_back(l.is_looming);
    return confusion(predicted, truth);
}

Metrics metrics(const ConfusionCounts& c) {
    auto ratio = [](std::uint64_t num, std::uint64_t den) {
        return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    return {ratio(c.TP + c.TN, c.total()), ratio(c.TP, c.TP + c.FN), ratio(c.TP, c.TP + c.FP),
            ratio(c.TN, c.TN + c.FP)};
}

double reward(double t_ms, double interval_ms, const ScoreConstants& k) {
    return k.k * std::exp(k.reward_sign * t_ms / interval_ms) + 1.0;
}

double punishment(double t_ms, double interval_ms, const ScoreConstants& k) {
    const double half = interval_ms / 2.0;
    if (t_ms <= half) return (k.l - k.c_pen) * (t_ms / half) + k.c_pen;
    return (k.l - k.c_pen) * (1.0 - (t_ms - half) / half) + k.c_pen;
}

double score(const SimulationResult& result, std::span<const LabelInterval> labels, const ScoreConstants& k) {
    double rewards = 0.0;
    double penalties = 0.0;
    for (const auto& s : result.layer(Layer::LGMD)) {
        const LabelInterval* l = enclosing(labels, s.t);
        if (!l) continue;
        const double t_ms = static_cast<double>(s.t - l->start) * 1e-3;
        const double len_ms = static_cast<double>(l->length()) * 1e-3;
        if (l->is_looming) {
            rewards += reward(t_ms, len_ms, k);
        } else {
            penalties += punishment(t_ms, len_ms, k);
        }
    }
    return rewards - penalties;
}

double sseos(const SimulationResult& result, std::span<const LabelInterval> labels, const ScoreConstants& k) {
    const auto& train = result.layer(Layer::LGMD);
    auto spike = train.begin();
    double sum = 0.0;
    for (std::size_t n = 0; n < result.lgmd_trace.size(); ++n) {
        const Timestamp t = n * result.dt;
        while (spike != train.end() && spike->t < t) ++spike;
        const bool spiked = spike != train.end() && spike->t == t;
        const double v = spiked ? k.V_spk : result.lgmd_trace[n];
        const LabelInterval* l = enclosing(labels, t);
        const double ideal = (l && l->is_looming) ? k.V_spk : k.V_r_obj;
        sum += (v - ideal) * (v - ideal);
    }
    return -sum;
}

double f_acc(double F, double Acc) {
    if (F > 0.0 && Acc == 1.0) return 2.0 * F;
    if (F > 0.0) return Acc * F;
    if (Acc == 1.0 && F < 0.0) return 0.0;
    return F;
}

FitnessReport evaluate(const SimulationResult& result, std::span<const LabelInterval> labels,
                       const ClassifierConfig& classifier, const ScoreConstants& constants) {
    constants.validate();
    FitnessReport r;
    r.score = score(result, labels, constants);
    r.sseos = sseos(result, labels, constants);
    r.F = (r.score + r.sseos) / 2.0;
    r.confusion = confusion(classify(result, labels, classifier), labels);
    r.metrics = metrics(r.confusion);
    r.Acc = r.metrics.Acc;
    r.F_Acc = f_acc(r.F, r.Acc);
    return r;
}

std::string to_text(const FitnessReport& r) {
    std::ostringstream os;
    os << "score " << format_double(r.score) << '\n'
       << "sseos " << format_double(r.sseos) << '\n'
       << "F " << format_double(r.F) << '\n'
       << "Acc " << format_double(r.Acc) << '\n'
       << "F_Acc " << format_double(r.F_Acc) << '\n'
       << "Sen " << format_double(r.metrics.Sen) << '\n'
       << "Pre " << format_double(r.metrics.Pre) << '\n'
       << "Spe " << format_double(r.metrics.Spe) << '\n'
       << "TP " << r.confusion.TP << '\n'
       << "TN " << r.confusion.TN << '\n'
       << "FP " << r.confusion.FP << '\n'
       << "FN " << r.confusion.FN << '\n';
    return os.str();
}

FitnessReport fitness_report_from_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto sp = t.find(' ');
        if (sp == std::string::npos) throw ObjectiveError("malformed fitness line: " + t);
        kv[t.substr(0, sp)] = trim(t.substr(sp + 1));
    }
    auto get = [&](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw ObjectiveError(std::string("fitness record lacks ") + key);
        return it->second;
    };
    FitnessReport r;
    r.score = parse_double(get("score"));
    r.sseos = parse_double(get("sseos"));
    r.F = parse_double(get("F"));
    r.Acc = parse_double(get("Acc"));
    r.F_Acc = parse_double(get("F_Acc"));
    r.metrics = {r.Acc, parse_double(get("Sen")), parse_double(get("Pre")), parse_double(get("Spe"))};
    r.confusion = {std::stoull(get("TP")), std::stoull(get("TN")), std::stoull(get("FP")), std::stoull(get("FN"))};
    return r;
}

}  // namespace lgmd
