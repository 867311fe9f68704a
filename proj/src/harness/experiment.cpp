#include "lgmd/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "lgmd/util.hpp"

namespace lgmd::harness {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// stimuli

namespace {

constexpr std::size_t kLoomIntervals = 10;
constexpr std::size_t kMixPartIntervals = 4;
constexpr double kFastSpeed = 30.0;  // edge speed per unit of scale
constexpr double kSlowSpeed = 10.0;
constexpr double kCompositeSeconds = 3.2;

double scale_of(Resolution r) { return std::min(r.width, r.height) / 32.0; }

EventRecording loom_preset(Shape shape, double speed_units, Resolution res, double threshold, double noise,
                           std::uint64_t seed, std::size_t intervals) {
    const double s = scale_of(res);
    StimulusSpec spec;
    spec.shape = shape;
    spec.trajectory = Trajectory::Loom;
    spec.speed = speed_units * s;
    spec.start_size = 2.0 * s;
    spec.end_size = 14.0 * s;
    spec.contrast_threshold = threshold;
    spec.noise_rate_hz = noise;
    spec.seed = seed;
    const double loom_s = (spec.end_size - spec.start_size) / spec.speed;
    const auto duration = static_cast<Timestamp>(std::llround(static_cast<double>(intervals) * loom_s * 1e6));
    return generate_stimulus(spec, res, duration);
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"circleFast", "circleSlow", "squareFast", "squareSlow", "composite", "trainMix"};
}

EventRecording make_preset(const std::string& name, Resolution res, double threshold, double noise,
                           std::uint64_t seed, std::size_t intervals) {
    if (res.width < 32 || res.height < 32) throw ConfigError("stimulus presets need at least 32x32 pixels");
    const std::size_t n = intervals ? intervals : kLoomIntervals;
    if (name == "circleFast") return loom_preset(Shape::Circle, kFastSpeed, res, threshold, noise, seed, n);
    if (name == "circleSlow") return loom_preset(Shape::Circle, kSlowSpeed, res, threshold, noise, seed, n);
    if (name == "squareFast") return loom_preset(Shape::Square, kFastSpeed, res, threshold, noise, seed, n);
    if (name == "squareSlow") return loom_preset(Shape::Square, kSlowSpeed, res, threshold, noise, seed, n);
    if (name == "composite") {
        if (intervals && intervals != 4) throw ConfigError("composite has exactly 4 intervals");
        return generate_composite(res, static_cast<Timestamp>(kCompositeSeconds * 1e6), threshold, noise, seed);
    }
    if (name == "trainMix") {
        const std::size_t part = intervals ? intervals / 2 : kMixPartIntervals;
        if (part == 0 || (intervals && intervals % 2)) throw ConfigError("trainMix needs an even interval count");
        const std::vector<EventRecording> parts{
            loom_preset(Shape::Circle, kFastSpeed, res, threshold, noise, derive_seed(seed, 0, 0), part),
            loom_preset(Shape::Square, kFastSpeed, res, threshold, noise, derive_seed(seed, 0, 1), part)};
        return concatenate(parts);
    }
    throw ConfigError("unknown stimulus preset '" + name + "'");
}

EventRecording make_stimulus(const StimulusConfig& c, std::uint64_t seed) {
    if (!c.recording.empty()) return load_recording(c.recording);
    return make_preset(c.preset, c.resolution, c.contrast_threshold, c.noise_rate_hz, seed, c.intervals);
}

// ---------------------------------------------------------------------------
// configuration

PlasticityParams ModelConfig::plastic_defaults() const {
    PlasticityParams p;
    p.c = clamp;
    p.post_sign = post_sign;
    return p;
}

MethodSpec parse_method_label(const std::string& label) {
    MethodSpec m;
    m.label = label;
    if (label == "DE") {
        m.method = opt::Method::DE;
    } else if (label == "SADE") {
        m.method = opt::Method::SADE;
    } else if (label.rfind("BO-", 0) == 0) {
        m.method = opt::Method::BO;
        try {
            m.acquisition = opt::parse_acquisition(label.substr(3));
        } catch (const std::exception&) {
            throw ConfigError("unknown acquisition in method '" + label + "'");
        }
    } else {
        throw ConfigError("unknown method '" + label + "' (DE, SADE, BO-EI, BO-PI, BO-UCB)");
    }
    return m;
}

void ExperimentConfig::validate() const {
    if (repeats < 1) throw ConfigError("run.repeats must be at least 1");
    if (threads < 1) throw ConfigError("run.threads must be at least 1");
    if (!stimulus.recording.empty() && !fs::exists(stimulus.recording)) {
        throw ConfigError("stimulus.recording not found: " + stimulus.recording.string());
    }
    if (stimulus.recording.empty()) {
        const auto names = preset_names();
        if (std::find(names.begin(), names.end(), stimulus.preset) == names.end()) {
            throw ConfigError("unknown stimulus preset '" + stimulus.preset + "'");
        }
    }
    if (stimulus.recording.empty() && (stimulus.resolution.width < 32 || stimulus.resolution.height < 32)) {
        throw ConfigError("stimulus presets need at least 32x32 pixels");
    }
    if (!(stimulus.contrast_threshold > 0.0 && stimulus.contrast_threshold < 1.0)) {
        throw ConfigError("stimulus.contrast_threshold must lie in (0, 1)");
    }
    if (!(stimulus.noise_rate_hz >= 0.0)) throw ConfigError("stimulus.noise_rate_hz must be non-negative");
    for (const auto& p : evaluate_presets) {
        const auto names = preset_names();
        if (std::find(names.begin(), names.end(), p) == names.end()) {
            throw ConfigError("unknown preset '" + p + "' in run.evaluate");
        }
    }
    if (!(model.clamp >= 0.0 && model.clamp <= 1.0)) throw ConfigError("model.clamp must lie in [0, 1]");
    if (model.post_sign != 1.0 && model.post_sign != -1.0) throw ConfigError("model.post_sign must be 1 or -1");
    parse_method_label(method_label);
    if (compare_methods.size() < 2) throw ConfigError("compare.methods needs at least two entries");
    for (const auto& m : compare_methods) parse_method_label(m);
    for (double c : clamp_values) {
        if (!(c >= 0.0 && c <= 1.0)) throw ConfigError("clamp_sweep.values must lie in [0, 1]");
    }
    try {
        classifier.validate();
        score.validate();
        optimizer.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

namespace {

class Reader {
public:
    explicit Reader(const IniFile& ini) : ini_(ini) {}

    std::optional<std::string> str(const std::string& section, const std::string& key) const {
        return ini_.get(section, key);
    }

    template <class T>
    void num(const std::string& section, const std::string& key, T& out) const {
        const auto v = ini_.get(section, key);
        if (!v) return;
        try {
            if constexpr (std::is_floating_point_v<T>) {
                out = parse_double(*v);
            } else {
                std::size_t used = 0;
                const long long n = std::stoll(*v, &used);
                if (used != v->size() || n < 0) throw std::invalid_argument("bad integer");
                out = static_cast<T>(n);
            }
        } catch (const std::exception&) {
            throw ConfigError(section + "." + key + ": not a valid number '" + *v + "'");
        }
    }

    template <class T>
    void opt_num(const std::string& section, const std::string& key, std::optional<T>& out) const {
        if (!ini_.has(section, key)) return;
        T v{};
        num(section, key, v);
        out = v;
    }

    std::vector<std::string> list(const std::string& section, const std::string& key) const {
        std::vector<std::string> out;
        const auto v = ini_.get(section, key);
        if (!v) return out;
        for (const auto& item : split(*v, ',')) {
            const auto t = trim(item);
            if (!t.empty()) out.push_back(t);
        }
        return out;
    }

private:
    const IniFile& ini_;
};

}  // namespace

ExperimentConfig experiment_from_ini(const IniFile& ini) {
    ExperimentConfig c;
    Reader r(ini);

    if (auto v = r.str("stimulus", "preset")) c.stimulus.preset = *v;
    if (auto v = r.str("stimulus", "recording")) c.stimulus.recording = *v;
    r.num("stimulus", "width", c.stimulus.resolution.width);
    r.num("stimulus", "height", c.stimulus.resolution.height);
    r.num("stimulus", "contrast_threshold", c.stimulus.contrast_threshold);
    r.num("stimulus", "noise_rate_hz", c.stimulus.noise_rate_hz);
    r.num("stimulus", "intervals", c.stimulus.intervals);

    if (auto v = r.str("model", "variant")) {
        try {
            c.model.variant = parse_variant(*v);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("model.variant: ") + e.what());
        }
    }
    r.num("model", "clamp", c.model.clamp);
    r.num("model", "post_sign", c.model.post_sign);

    r.num("objective", "SL", c.classifier.SL);
    r.num("objective", "window_ms", c.classifier.window_ms);
    r.num("objective", "k", c.score.k);
    r.num("objective", "l", c.score.l);
    r.num("objective", "c_pen", c.score.c_pen);
    r.num("objective", "V_spk", c.score.V_spk);
    r.num("objective", "V_r", c.score.V_r_obj);
    r.num("objective", "reward_sign", c.score.reward_sign);

    if (auto v = r.str("optimizer", "method")) c.method_label = *v;
    r.num("optimizer", "budget", c.optimizer.budget);
    r.opt_num("optimizer", "patience", c.optimizer.patience);
    r.opt_num("optimizer", "target", c.optimizer.target);
    r.num("optimizer", "NP", c.optimizer.de.NP);
    c.optimizer.sade.NP = c.optimizer.de.NP;
    r.num("optimizer", "F", c.optimizer.de.F);
    r.num("optimizer", "CR", c.optimizer.de.CR);
    r.num("optimizer", "LP", c.optimizer.sade.LP);
    r.num("optimizer", "epsilon", c.optimizer.sade.epsilon);
    r.num("optimizer", "init_points", c.optimizer.bo.init_points);
    r.num("optimizer", "zeta", c.optimizer.bo.acquisition.zeta);
    r.num("optimizer", "nu", c.optimizer.bo.acquisition.nu);
    r.num("optimizer", "delta", c.optimizer.bo.acquisition.delta);
    r.opt_num("optimizer", "kappa", c.optimizer.bo.acquisition.fixed_kappa);
    r.num("optimizer", "proposal_samples", c.optimizer.bo.proposal.samples);
    r.num("optimizer", "refine", c.optimizer.bo.proposal.refine);
    r.num("optimizer", "gp_restarts", c.optimizer.bo.gp_restarts);

    if (ini.has("compare", "methods")) c.compare_methods = r.list("compare", "methods");
    if (ini.has("clamp_sweep", "values")) {
        c.clamp_values.clear();
        for (const auto& v : r.list("clamp_sweep", "values")) {
            try {
                c.clamp_values.push_back(parse_double(v));
            } catch (const std::exception&) {
                throw ConfigError("clamp_sweep.values: not a number '" + v + "'");
            }
        }
    }

    r.num("run", "seed", c.seed);
    r.num("run", "repeats", c.repeats);
    r.num("run", "threads", c.threads);
    if (auto v = r.str("run", "out")) c.out = *v;
    if (ini.has("run", "evaluate")) c.evaluate_presets = r.list("run", "evaluate");

    const auto unused = ini.unused();
    if (!unused.empty()) {
        std::string msg = "unknown config key";
        msg += unused.size() > 1 ? "s:" : ":";
        for (const auto& k : unused) msg += " " + k;
        throw ConfigError(msg);
    }

    const auto m = parse_method_label(c.method_label);
    c.optimizer.method = m.method;
    c.optimizer.bo.acquisition.kind = m.acquisition;
    c.validate();
    return c;
}

ExperimentConfig load_experiment(const fs::path& file) { return experiment_from_ini(IniFile::load(file)); }

std::string to_text(const ExperimentConfig& c) {
    constexpr const char* nfp = "  # not from paper";
    const auto d = [](double v) { return format_double(v); };
    std::ostringstream os;
    os << "[stimulus]\n";
    if (c.stimulus.recording.empty()) {
        os << "preset = " << c.stimulus.preset << nfp << '\n';
    } else {
        os << "recording = " << c.stimulus.recording.string() << '\n';
    }
    os << "width = " << c.stimulus.resolution.width << nfp << '\n'
       << "height = " << c.stimulus.resolution.height << nfp << '\n'
       << "contrast_threshold = " << d(c.stimulus.contrast_threshold) << nfp << '\n'
       << "noise_rate_hz = " << d(c.stimulus.noise_rate_hz) << nfp << '\n'
       << "intervals = " << c.stimulus.intervals << nfp << '\n';

    os << "\n[model]\n"
       << "variant = " << to_string(c.model.variant) << '\n'
       << "clamp = " << d(c.model.clamp) << '\n'
       << "post_sign = " << d(c.model.post_sign) << nfp << '\n';

    os << "\n[objective]\n"
       << "SL = " << d(c.classifier.SL) << nfp << '\n'
       << "window_ms = " << d(c.classifier.window_ms) << nfp << '\n'
       << "k = " << d(c.score.k) << nfp << '\n'
       << "l = " << d(c.score.l) << nfp << '\n'
       << "c_pen = " << d(c.score.c_pen) << nfp << '\n'
       << "V_spk = " << d(c.score.V_spk) << nfp << '\n'
       << "V_r = " << d(c.score.V_r_obj) << '\n'
       << "reward_sign = " << d(c.score.reward_sign) << nfp << '\n';

    const auto& o = c.optimizer;
    os << "\n[optimizer]\n"
       << "method = " << c.method_label << '\n'
       << "budget = " << o.budget << nfp << '\n';
    if (o.patience) {
        os << "patience = " << *o.patience << nfp << '\n';
    } else {
        os << "# patience = 3 NP (default)\n";
    }
    if (o.target) os << "target = " << d(*o.target) << nfp << '\n';
    os << "NP = " << o.de.NP << "  # 0: ceil(10 d / 3)\n"
       << "F = " << d(o.de.F) << '\n'
       << "CR = " << d(o.de.CR) << '\n'
       << "LP = " << o.sade.LP << '\n'
       << "epsilon = " << d(o.sade.epsilon) << nfp << '\n'
       << "init_points = " << o.bo.init_points << "  # 0: 3 d" << nfp << '\n'
       << "zeta = " << d(o.bo.acquisition.zeta) << nfp << '\n'
       << "nu = " << d(o.bo.acquisition.nu) << nfp << '\n'
       << "delta = " << d(o.bo.acquisition.delta) << nfp << '\n';
    if (o.bo.acquisition.fixed_kappa) os << "kappa = " << d(*o.bo.acquisition.fixed_kappa) << nfp << '\n';
    os << "proposal_samples = " << o.bo.proposal.samples << nfp << '\n'
       << "refine = " << o.bo.proposal.refine << nfp << '\n'
       << "gp_restarts = " << o.bo.gp_restarts << nfp << '\n';

    os << "\n[compare]\nmethods = ";
    for (std::size_t i = 0; i < c.compare_methods.size(); ++i) os << (i ? ", " : "") << c.compare_methods[i];
    os << "\n\n[clamp_sweep]\nvalues = ";
    for (std::size_t i = 0; i < c.clamp_values.size(); ++i) os << (i ? ", " : "") << d(c.clamp_values[i]);
    os << nfp << "\n\n[run]\n"
       << "seed = " << c.seed << '\n'
       << "repeats = " << c.repeats << '\n'
       << "threads = " << c.threads << '\n'
       << "out = " << c.out.string() << '\n';
    if (!c.evaluate_presets.empty()) {
        os << "evaluate = ";
        for (std::size_t i = 0; i < c.evaluate_presets.size(); ++i) os << (i ? ", " : "") << c.evaluate_presets[i];
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// evaluation

FitnessReport evaluate_params(const Hyperparams& params, ModelFlags flags, const EventRecording& recording,
                              const ClassifierConfig& classifier, const ScoreConstants& score, BoundsPolicy policy,
                              SimulationResult* result) {
    Network net = build_network(recording.resolution, NeuronConstants{}, params, flags, policy);
    SimulationResult r = run(net, recording);
    const FitnessReport report = evaluate(r, recording.labels, classifier, score);
    if (result) *result = std::move(r);
    return report;
}

opt::Objective make_objective(const EventRecording& recording, const ExperimentConfig& config) {
    const ModelFlags flags = flags_of(config.model.variant);
    const PlasticityParams defaults = config.model.plastic_defaults();
    return [&recording, flags, defaults, classifier = config.classifier,
            score = config.score](std::span<const double> x) {
        try {
            const Hyperparams p = hyperparams_from_vector(x, flags, defaults);
            return evaluate_params(p, flags, recording, classifier, score).F_Acc;
        } catch (const SimulationDiverged&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
}

std::string params_to_text(const Hyperparams& params, Variant variant) {
    const ModelFlags flags = flags_of(variant);
    const auto names = parameter_names(flags);
    const auto x = hyperparams_to_vector(params, flags);
    std::ostringstream os;
    os << "variant " << to_string(variant) << '\n';
    for (std::size_t i = 0; i < names.size(); ++i) os << names[i] << ' ' << format_double(x[i]) << '\n';
    if (flags.plasticity) {
        os << "clamp " << format_double(params.plasticity->c) << '\n'
           << "post_sign " << format_double(params.plasticity->post_sign) << '\n';
    }
    return os.str();
}

std::pair<Hyperparams, Variant> params_from_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto sp = t.find(' ');
        if (sp == std::string::npos) throw ConfigError("params: expected 'name value', got '" + t + "'");
        kv[t.substr(0, sp)] = trim(t.substr(sp + 1));
    }
    const auto take = [&](const std::string& k) {
        const auto it = kv.find(k);
        if (it == kv.end()) throw ConfigError("params: missing '" + k + "'");
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    Variant variant;
    try {
        variant = parse_variant(take("variant"));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    const ModelFlags flags = flags_of(variant);
    PlasticityParams plastic;
    std::vector<double> x;
    try {
        for (const auto& name : parameter_names(flags)) x.push_back(parse_double(take(name)));
        if (flags.plasticity) {
            plastic.c = parse_double(take("clamp"));
            plastic.post_sign = parse_double(take("post_sign"));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    if (!kv.empty()) throw ConfigError("params: unexpected entry '" + kv.begin()->first + "'");
    return {hyperparams_from_vector(x, flags, plastic), variant};
}

fs::path allocate_run_dir(const fs::path& out, const std::string& name) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw ConfigError("cannot create output directory " + out.string());
    for (int i = 0; i < 1000; ++i) {
        char suffix[24];
        std::snprintf(suffix, sizeof suffix, "%03d", i);
        const fs::path dir = out / (name + "-" + suffix);
        if (fs::create_directory(dir, ec)) {
            const fs::path probe = dir / ".probe";
            std::ofstream f(probe);
            if (!f) throw ConfigError("output directory is not writable: " + dir.string());
            f.close();
            fs::remove(probe);
            return dir;
        }
        if (ec) throw ConfigError("cannot create " + dir.string() + ": " + ec.message());
    }
    throw ConfigError("no free run directory under " + out.string());
}

// ---------------------------------------------------------------------------
// experiments

std::uint64_t repeat_seed(std::uint64_t master, std::size_t repeat) { return derive_seed(master, 100, repeat); }

namespace {

std::uint64_t stimulus_seed(std::uint64_t master) { return derive_seed(master, 200, 0); }

std::string pad2(std::size_t i) {
    char b[16];
    std::snprintf(b, sizeof b, "%02zu", i);
    return b;
}

std::string metrics_cells(const FitnessReport& r) {
    std::ostringstream os;
    os << format_double(r.metrics.Acc) << ' ' << format_double(r.metrics.Sen) << ' ' << format_double(r.metrics.Pre)
       << ' ' << format_double(r.metrics.Spe);
    return os.str();
}

std::string summary_text(const ExperimentConfig& config, const std::vector<RepeatOutcome>& repeats) {
    std::ostringstream os;
    os << "# repeat seed fitness evaluations Acc Sen Pre Spe";
    for (const auto& p : config.evaluate_presets) os << ' ' << p << ":Acc " << p << ":Sen " << p << ":Pre " << p << ":Spe";
    os << '\n';
    for (std::size_t i = 0; i < repeats.size(); ++i) {
        const auto& r = repeats[i];
        os << i << ' ' << r.seed << ' ' << format_double(r.run.best_fitness) << ' ' << r.run.evaluations.size() << ' '
           << metrics_cells(r.train_report);
        for (const auto& [name, rep] : r.tests) os << ' ' << metrics_cells(rep);
        os << '\n';
    }
    return os.str();
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config, const fs::path& dir) {
    config.validate();
    write_new_file(dir / "config.txt", to_text(config));
    const EventRecording train = make_stimulus(config.stimulus, stimulus_seed(config.seed));
    const ModelFlags flags = flags_of(config.model.variant);
    const opt::Bounds bounds = search_bounds(flags);
    const opt::BatchEvaluator evaluator = opt::parallel_evaluator(make_objective(train, config), config.threads);

    std::vector<std::pair<std::string, EventRecording>> tests;
    for (const auto& name : config.evaluate_presets) {
        tests.emplace_back(name, make_preset(name, config.stimulus.resolution, config.stimulus.contrast_threshold,
                                             config.stimulus.noise_rate_hz, stimulus_seed(config.seed)));
    }

    ExperimentOutcome outcome;
    outcome.dir = dir;
    for (std::size_t i = 0; i < config.repeats; ++i) {
        RepeatOutcome rep;
        rep.seed = repeat_seed(config.seed, i);
        opt::OptimizerConfig oc = config.optimizer;
        oc.seed = rep.seed;
        rep.run = opt::optimize(evaluator, bounds, oc);
        rep.best = hyperparams_from_vector(rep.run.best_x, flags, config.model.plastic_defaults());
        rep.train_report = evaluate_params(rep.best, flags, train, config.classifier, config.score);
        for (const auto& [name, rec] : tests) {
            rep.tests.emplace_back(name, evaluate_params(rep.best, flags, rec, config.classifier, config.score));
        }

        const fs::path rdir = dir / ("repeat-" + pad2(i));
        fs::create_directory(rdir);
        opt::write_record(rdir / "run.txt", rep.run);
        write_new_file(rdir / "best_params.txt", params_to_text(rep.best, config.model.variant));
        std::string fit = to_text(rep.train_report);
        for (const auto& [name, r] : rep.tests) {
            fit += "\n[" + name + "]\n" + to_text(r);
        }
        write_new_file(rdir / "fitness.txt", fit);
        outcome.repeats.push_back(std::move(rep));
    }
    write_new_file(dir / "summary.txt", summary_text(config, outcome.repeats));
    return outcome;
}

// ---------------------------------------------------------------------------
// comparison

ComparisonReport compare_samples(const std::vector<std::string>& labels,
                                 const std::vector<std::vector<std::array<double, 6>>>& samples) {
    if (labels.size() != samples.size()) throw std::invalid_argument("labels and samples differ in size");
    ComparisonReport rep;
    rep.labels = labels;
    rep.samples = samples;
    for (const auto& s : samples) {
        std::array<double, 6> mean{};
        for (std::size_t m = 0; m < 6; ++m) {
            double sum = 0.0;
            std::size_t n = 0;
            for (const auto& row : s) {
                if (std::isfinite(row[m])) {
                    sum += row[m];
                    ++n;
                }
            }
            mean[m] = n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
        }
        rep.means.push_back(mean);
    }
    for (std::size_t a = 0; a < labels.size(); ++a) {
        for (std::size_t b = 0; b < labels.size(); ++b) {
            if (a == b) continue;
            PairTest pt;
            pt.a = labels[a];
            pt.b = labels[b];
            for (std::size_t m = 0; m < 6; ++m) {
                std::vector<double> xa, xb;
                for (const auto& row : samples[a]) {
                    if (!std::isnan(row[m])) xa.push_back(row[m]);
                }
                for (const auto& row : samples[b]) {
                    if (!std::isnan(row[m])) xb.push_back(row[m]);
                }
                if (xa.empty() || xb.empty()) continue;
                pt.tests[m] = mann_whitney_u(xa, xb);
            }
            rep.pairs.push_back(pt);
        }
    }
    return rep;
}

std::string ComparisonReport::summary_table() const {
    std::ostringstream os;
    os << "# method";
    for (const char* m : kComparisonMetrics) os << ' ' << m;
    os << '\n';
    for (std::size_t i = 0; i < labels.size(); ++i) {
        os << labels[i];
        for (double v : means[i]) os << ' ' << format_double(v);
        os << '\n';
    }
    return os.str();
}

std::string ComparisonReport::significance_table() const {
    std::ostringstream os;
    os << "# '+' marks p <= 0.05, '.' no significance, '?' unavailable\n";
    os << "# pair";
    for (const char* m : kComparisonMetrics) os << ' ' << m;
    os << '\n';
    for (const auto& p : pairs) {
        os << p.a << " vs " << p.b;
        for (const auto& t : p.tests) os << ' ' << (!t ? "?" : t->p <= 0.05 ? "+" : ".");
        os << '\n';
    }
    os << "# pair metric U p\n";
    for (const auto& p : pairs) {
        for (std::size_t m = 0; m < 6; ++m) {
            if (!p.tests[m]) continue;
            os << p.a << " vs " << p.b << ' ' << kComparisonMetrics[m] << ' ' << format_double(p.tests[m]->U) << ' '
               << format_double(p.tests[m]->p) << '\n';
        }
    }
    return os.str();
}

ComparisonReport compare_optimizers(const ExperimentConfig& config, const fs::path& dir) {
    config.validate();
    write_new_file(dir / "config.txt", to_text(config));
    std::vector<std::vector<std::array<double, 6>>> samples;
    for (const auto& label : config.compare_methods) {
        ExperimentConfig c = config;
        const MethodSpec m = parse_method_label(label);
        c.method_label = label;
        c.optimizer.method = m.method;
        c.optimizer.bo.acquisition.kind = m.acquisition;
        c.evaluate_presets.clear();
        const fs::path mdir = dir / label;
        fs::create_directory(mdir);
        std::vector<std::array<double, 6>> rows;
        try {
            const auto out = run_experiment(c, mdir);
            for (const auto& r : out.repeats) {
                const auto& mt = r.train_report.metrics;
                rows.push_back({r.run.best_fitness, static_cast<double>(r.run.evaluations.size()), mt.Acc, mt.Sen,
                                mt.Pre, mt.Spe});
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            write_new_file(mdir / "error.txt", std::string(e.what()) + '\n');
        }
        samples.push_back(std::move(rows));
    }
    ComparisonReport rep = compare_samples(config.compare_methods, samples);
    write_new_file(dir / "summary.txt", rep.summary_table());
    write_new_file(dir / "significance.txt", rep.significance_table());
    return rep;
}

// ---------------------------------------------------------------------------
// clamp sweep

std::vector<ClampRow> clamp_sweep(const Hyperparams& params, Variant variant, const EventRecording& recording,
                                  const ExperimentConfig& config, const std::vector<double>& values) {
    const ModelFlags flags = flags_of(variant);
    if (!flags.plasticity) throw ConfigError("clamp sweep needs a plastic variant (P or AP)");
    std::vector<ClampRow> rows;
    for (double c : values) {
        Hyperparams p = params;
        p.plasticity->c = c;
        rows.push_back({"c", c,
                        evaluate_params(p, flags, recording, config.classifier, config.score,
                                        BoundsPolicy::Physical)});
    }
    Hyperparams base = params;
    base.plasticity.reset();
    const ModelFlags base_flags{flags.adaptation, false};
    rows.push_back({"no-plasticity", 0.0,
                    evaluate_params(base, base_flags, recording, config.classifier, config.score,
                                    BoundsPolicy::Physical)});
    return rows;
}

std::string clamp_table(const std::vector<ClampRow>& rows) {
    std::ostringstream os;
    os << "# row c Acc Sen Pre Spe F_Acc\n";
    for (const auto& r : rows) {
        os << r.label << ' ' << (r.label == "c" ? format_double(r.c) : "-") << ' ' << metrics_cells(r.report) << ' '
           << format_double(r.report.F_Acc) << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// plot export

namespace {

std::string read_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string prefix_for(const fs::path& run_dir, const fs::path& file) {
    std::string rel = fs::relative(file.parent_path(), run_dir).generic_string();
    if (rel == ".") return "";
    std::replace(rel.begin(), rel.end(), '/', '_');
    return rel + "_";
}

void export_run_record(const fs::path& file, const std::string& prefix, const fs::path& dest, ExportResult& out) {
    std::istringstream in(read_file(file));
    std::string line, method;
    std::ostringstream fit, rate_F, rate_CR, strat, evals;
    std::size_t gens = 0, nevals = 0;
    double best = -std::numeric_limits<double>::infinity();
    fit << "# generation best mean\n";
    rate_F << "# generation mean_F\n";
    rate_CR << "# generation mean_CR\n";
    strat << "# generation p_rand1bin p_randtobest2bin p_rand2bin p_currtorand1\n";
    evals << "# evaluation fitness best_so_far\n";
    while (std::getline(in, line)) {
        const auto tok = split(line, ' ');
        if (tok.empty()) continue;
        if (tok[0] == "method" && tok.size() > 1) method = tok[1];
        if (tok[0] == "eval" && tok.size() > 3) {
            const double f = parse_double(tok[3]);
            best = std::max(best, f);
            evals << tok[1] << ' ' << tok[3] << ' ' << format_double(best) << '\n';
            ++nevals;
        }
        if (tok[0] == "generation" && tok.size() >= 10) {
            ++gens;
            fit << tok[1] << ' ' << tok[2] << ' ' << tok[3] << '\n';
            rate_F << tok[1] << ' ' << tok[4] << '\n';
            rate_CR << tok[1] << ' ' << tok[5] << '\n';
            strat << tok[1] << ' ' << tok[6] << ' ' << tok[7] << ' ' << tok[8] << ' ' << tok[9] << '\n';
        }
    }
    const auto emit = [&](const std::string& name, const std::string& body) {
        const fs::path f = dest / (prefix + name);
        write_new_file(f, body);
        out.written.push_back(f);
    };
    if (nevals) {
        emit("evaluations.txt", evals.str());
    } else {
        out.missing.push_back(prefix + "evaluations");
    }
    if (method == "BO") return;
    if (gens) {
        emit("fitness.txt", fit.str());
        emit("rate_F.txt", rate_F.str());
        emit("rate_CR.txt", rate_CR.str());
        if (method == "SADE") emit("strategy_p.txt", strat.str());
    } else {
        out.missing.push_back(prefix + "generations");
    }
}

void export_weights(const fs::path& file, const std::string& prefix, const fs::path& dest, ExportResult& out) {
    std::istringstream in(read_file(file));
    std::string line;
    std::ostringstream scalars, matrix;
    scalars << "# t_us ip_to_lgmd is_to_lgmd\n";
    std::size_t k = 0;
    const auto flush = [&] {
        if (k == 0) return;
        char name[48];
        std::snprintf(name, sizeof name, "weights_%03zu.txt", k - 1);
        const fs::path f = dest / (prefix + name);
        write_new_file(f, matrix.str());
        out.written.push_back(f);
        matrix.str("");
    };
    while (std::getline(in, line)) {
        if (line.rfind("# t_us ", 0) == 0) {
            flush();
            ++k;
            const auto tok = split(line, ' ');
            if (tok.size() >= 7) scalars << tok[2] << ' ' << tok[4] << ' ' << tok[6] << '\n';
            continue;
        }
        matrix << line << '\n';
    }
    flush();
    const fs::path f = dest / (prefix + "weights_scalar.txt");
    write_new_file(f, scalars.str());
    out.written.push_back(f);
}

}  // namespace

ExportResult export_plots(const fs::path& run_dir, const fs::path& dest) {
    if (!fs::is_directory(run_dir)) throw std::runtime_error("not a run directory: " + run_dir.string());
    ExportResult out;
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(run_dir)) {
        if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    bool any_run = false, any_spikes = false;
    for (const auto& f : files) {
        const std::string name = f.filename().string();
        const std::string prefix = prefix_for(run_dir, f);
        if (name == "run.txt") {
            any_run = true;
            export_run_record(f, prefix, dest, out);
        } else if (name.rfind("spikes_", 0) == 0 && f.extension() == ".txt") {
            any_spikes = true;
            std::istringstream in(read_file(f));
            std::ostringstream os;
            std::string line;
            while (std::getline(in, line)) {
                const auto tok = split(line, ' ');
                if (tok.size() != 2) continue;
                os << format_double(static_cast<double>(std::stoull(tok[0])) / 1000.0) << ' ' << tok[1] << '\n';
            }
            const fs::path dst = dest / (prefix + "raster_" + name.substr(7));
            write_new_file(dst, os.str());
            out.written.push_back(dst);
        } else if (name == "weights.txt") {
            export_weights(f, prefix, dest, out);
        }
    }
    if (!any_run && !any_spikes) out.missing.push_back("optimiser records and spike trains");
    return out;
}

// ---------------------------------------------------------------------------
// simulate

FitnessReport simulate_to_dir(const Hyperparams& params, Variant variant, const EventRecording& recording,
                              const ExperimentConfig& config, const fs::path& dir) {
    const ModelFlags flags = flags_of(variant);
    SimulationResult result;
    const FitnessReport report =
        evaluate_params(params, flags, recording, config.classifier, config.score, BoundsPolicy::Physical, &result);
    write_new_file(dir / "params.txt", params_to_text(params, variant));
    for (std::size_t l = 0; l < kLayerCount; ++l) {
        write_spike_train(dir / ("spikes_" + to_string(static_cast<Layer>(l)) + ".txt"), result.spikes[l]);
    }
    write_trace(dir / "trace.bin", result.lgmd_trace);
    if (flags.plasticity) write_weight_snapshots(dir / "weights.txt", result.snapshots, recording.resolution);
    write_new_file(dir / "fitness.txt", to_text(report));
    return report;
}

}  // namespace lgmd::harness
