#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "lgmd/harness/experiment.hpp"
#include "lgmd/util.hpp"

namespace fs = std::filesystem;
using namespace lgmd;
using namespace lgmd::harness;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
};

ExperimentConfig load(const Globals& g) {
    IniFile ini = g.config.empty() ? IniFile::parse("", "<defaults>") : IniFile::load(g.config);
    if (g.seed) ini.set("run", "seed", std::to_string(*g.seed));
    if (g.out) ini.set("run", "out", *g.out);
    if (g.threads) ini.set("run", "threads", std::to_string(*g.threads));
    return experiment_from_ini(ini);
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::pair<Hyperparams, Variant> params_or_reference(const std::string& file, const ExperimentConfig& cfg) {
    if (!file.empty()) return params_from_text(slurp(file));
    Hyperparams p = reference_params(cfg.model.variant);
    if (p.plasticity) {
        p.plasticity->c = cfg.model.clamp;
        p.plasticity->post_sign = cfg.model.post_sign;
    }
    return {p, cfg.model.variant};
}

EventRecording stimulus_of(const ExperimentConfig& cfg) {
    return make_stimulus(cfg.stimulus, derive_seed(cfg.seed, 200, 0));
}

void print_metrics(const std::string& label, const FitnessReport& r) {
    std::cout << label << " F_Acc " << format_double(r.F_Acc) << " Acc " << r.metrics.Acc << " Sen " << r.metrics.Sen
              << " Pre " << r.metrics.Pre << " Spe " << r.metrics.Spe << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LGMD looming-detector experiments"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "experiment config file")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--out", g.out, "output root directory");
    app.add_option("--threads", g.threads, "evaluation threads")->check(CLI::PositiveNumber);

    auto* gen = app.add_subcommand("gen-stimulus", "write the configured stimulus as a recording");
    auto* sim = app.add_subcommand("simulate", "simulate one parameter set and record spikes");
    std::string sim_params;
    sim->add_option("--params", sim_params, "parameter file (default: reference set of the variant)");
    auto* optz = app.add_subcommand("optimize", "repeated optimiser runs");
    auto* cmp = app.add_subcommand("compare", "compare optimisers with significance tests");
    auto* sweep = app.add_subcommand("clamp-sweep", "accuracy against the plasticity clamp");
    std::string sweep_params;
    sweep->add_option("--params", sweep_params, "parameter file of a P or AP candidate");
    auto* exp = app.add_subcommand("export-plots", "columnar plot data from a run directory");
    std::string run_dir;
    exp->add_option("run", run_dir, "run directory")->required()->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        const ExperimentConfig cfg = load(g);

        if (gen->parsed()) {
            const auto dir = allocate_run_dir(cfg.out, "gen-stimulus");
            write_new_file(dir / "config.txt", to_text(cfg));
            const auto rec = stimulus_of(cfg);
            save_recording(rec, dir / "stimulus.lgev");
            std::cout << dir.string() << '\n' << rec.events.size() << " events, " << rec.labels.size()
                      << " intervals\n";
        } else if (sim->parsed()) {
            const auto [params, variant] = params_or_reference(sim_params, cfg);
            validate_params(params, flags_of(variant), BoundsPolicy::Physical);
            const auto dir = allocate_run_dir(cfg.out, "simulate");
            write_new_file(dir / "config.txt", to_text(cfg));
            const auto rec = stimulus_of(cfg);
            const auto report = simulate_to_dir(params, variant, rec, cfg, dir);
            std::cout << dir.string() << '\n';
            print_metrics("LGMD", report);
        } else if (optz->parsed()) {
            const auto dir = allocate_run_dir(cfg.out, "optimize");
            const auto out = run_experiment(cfg, dir);
            std::cout << dir.string() << '\n';
            for (std::size_t i = 0; i < out.repeats.size(); ++i) {
                const auto& r = out.repeats[i];
                print_metrics("repeat " + std::to_string(i) + " evaluations " +
                                  std::to_string(r.run.evaluations.size()),
                              r.train_report);
                for (const auto& [name, t] : r.tests) print_metrics("  " + name, t);
            }
        } else if (cmp->parsed()) {
            const auto dir = allocate_run_dir(cfg.out, "compare");
            const auto rep = compare_optimizers(cfg, dir);
            std::cout << dir.string() << '\n' << rep.summary_table() << rep.significance_table();
        } else if (sweep->parsed()) {
            auto [params, variant] = params_or_reference(sweep_params, cfg);
            if (!flags_of(variant).plasticity) throw ConfigError("clamp sweep needs a P or AP parameter set");
            validate_params(params, flags_of(variant), BoundsPolicy::Physical);
            const auto dir = allocate_run_dir(cfg.out, "clamp-sweep");
            write_new_file(dir / "config.txt", to_text(cfg));
            write_new_file(dir / "params.txt", params_to_text(params, variant));
            const auto rec = stimulus_of(cfg);
            const auto rows = clamp_sweep(params, variant, rec, cfg, cfg.clamp_values);
            const auto table = clamp_table(rows);
            write_new_file(dir / "clamp.txt", table);
            std::cout << dir.string() << '\n' << table;
        } else if (exp->parsed()) {
            const auto dir = allocate_run_dir(cfg.out, "export-plots");
            const auto res = export_plots(run_dir, dir);
            std::string listing;
            for (const auto& f : res.written) listing += "written " + f.filename().string() + '\n';
            for (const auto& m : res.missing) listing += "missing " + m + '\n';
            write_new_file(dir / "export.txt", listing);
            std::cout << dir.string() << '\n' << res.written.size() << " files\n";
            if (!res.missing.empty()) {
                std::cerr << "warning: partial export, absent series:";
                for (const auto& m : res.missing) std::cerr << ' ' << m;
                std::cerr << '\n';
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParamError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
