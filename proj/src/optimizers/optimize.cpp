#include "lgmd/optimizers/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lgmd/util.hpp"

namespace lgmd::opt {

std::string to_string(Method m) {
    switch (m) {
        case Method::DE: return "DE";
        case Method::SADE: return "SADE";
        case Method::BO: return "BO";
    }
    return "SADE";
}

Method parse_method(const std::string& text) {
    if (text == "DE" || text == "de") return Method::DE;
    if (text == "SADE" || text == "sade") return Method::SADE;
    if (text == "BO" || text == "bo") return Method::BO;
    throw std::invalid_argument("unknown optimiser '" + text + "'");
}

BatchEvaluator parallel_evaluator(Objective objective, unsigned threads) {
    return [objective = std::move(objective), threads](const std::vector<std::vector<double>>& xs) {
        std::vector<double> out(xs.size(), std::numeric_limits<double>::quiet_NaN());
        auto one = [&](std::size_t i) {
            try {
                out[i] = objective(xs[i]);
            } catch (const std::exception&) {
                out[i] = std::numeric_limits<double>::quiet_NaN();
            }
        };
        const std::size_t workers = std::min<std::size_t>(std::max(threads, 1u), xs.size());
        if (workers <= 1) {
            for (std::size_t i = 0; i < xs.size(); ++i) one(i);
            return out;
        }
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < xs.size(); i = next++) one(i);
            });
        }
        for (auto& t : pool) t.join();
        return out;
    };
}

void OptimizerConfig::validate() const {
    if (budget == 0) throw std::invalid_argument("budget must be positive");
    if (patience && *patience == 0) throw std::invalid_argument("patience must be positive");
    de.validate();
    sade.validate();
    bo.acquisition.validate();
    if (bo.refit_every == 0) throw std::invalid_argument("refit_every must be positive");
    if (bo.proposal.samples == 0) throw std::invalid_argument("BO needs at least one proposal sample");
}

std::size_t OptimizerConfig::population_size(std::size_t dims) const {
    const std::size_t np = method == Method::SADE ? sade.NP : de.NP;
    const std::size_t minimum = method == Method::SADE ? 6 : 4;
    return np ? np : std::max(default_population_size(dims), minimum);
}

std::uint64_t OptimizerConfig::effective_patience(std::size_t dims) const {
    if (patience) return *patience;
    return 3 * std::max(default_population_size(dims), std::size_t{4});
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class Tracker {
public:
    Tracker(OptimizerRun& run, std::uint64_t budget, std::uint64_t patience, std::optional<double> target)
        : run_(run), budget_(budget), patience_(patience), target_(target) {
        run_.best_fitness = kNegInf;
    }

    std::uint64_t used() const { return run_.evaluations.size(); }
    std::uint64_t budget_left() const { return budget_ - used(); }
    std::uint64_t patience_left() const { return patience_ - stale_; }

    std::size_t batch_limit(std::size_t wanted, bool initialising) const {
        std::uint64_t m = std::min<std::uint64_t>(wanted, budget_left());
        if (!initialising) m = std::min(m, patience_left());
        return static_cast<std::size_t>(m);
    }

    bool done() {
        if (target_ && run_.best_fitness >= *target_) {
            run_.stop = StopReason::Target;
            return true;
        }
        if (budget_left() == 0) {
            run_.stop = StopReason::Budget;
            return true;
        }
        if (stale_ >= patience_) {
            run_.stop = StopReason::Patience;
            return true;
        }
        return false;
    }

    double record(const std::vector<double>& x, double raw, std::uint64_t generation, std::string strategy, double F,
                  double CR, bool initialising) {
        EvaluationRecord e;
        e.index = used();
        e.generation = generation;
        e.x = x;
        e.failed = !std::isfinite(raw);
        e.fitness = e.failed ? kNegInf : raw;
        e.strategy = std::move(strategy);
        e.F = F;
        e.CR = CR;
        if (e.failed) ++run_.failed;
        if (e.fitness > run_.best_fitness || run_.best_x.empty()) {
            const bool improved = e.fitness > run_.best_fitness;
            run_.best_fitness = e.fitness;
            run_.best_x = x;
            if (improved) stale_ = 0;
            else if (!initialising) ++stale_;
        } else if (!initialising) {
            ++stale_;
        }
        const double f = e.fitness;
        run_.evaluations.push_back(std::move(e));
        return f;
    }

private:
    OptimizerRun& run_;
    std::uint64_t budget_;
    std::uint64_t patience_;
    std::optional<double> target_;
    std::uint64_t stale_ = 0;
};

std::vector<double> evaluate_batch(const BatchEvaluator& evaluate, const std::vector<std::vector<double>>& xs) {
    if (xs.empty()) return {};
    auto out = evaluate(xs);
    if (out.size() != xs.size()) throw std::runtime_error("evaluator returned the wrong number of fitnesses");
    return out;
}

GenerationRecord summarise(std::uint64_t generation, const std::vector<double>& fitness, double F_sum, double CR_sum,
                           std::size_t trials, const std::array<double, kStrategyCount>& p) {
    GenerationRecord g;
    g.generation = generation;
    g.best = *std::max_element(fitness.begin(), fitness.end());
    double sum = 0.0;
    std::size_t n = 0;
    for (double f : fitness) {
        if (std::isfinite(f)) {
            sum += f;
            ++n;
        }
    }
    g.mean = n ? sum / static_cast<double>(n) : kNegInf;
    g.mean_F = trials ? F_sum / static_cast<double>(trials) : kNaN;
    g.mean_CR = trials ? CR_sum / static_cast<double>(trials) : kNaN;
    g.p = p;
    return g;
}

void run_de(const BatchEvaluator& evaluate, const Bounds& bounds, const OptimizerConfig& cfg, OptimizerRun& run) {
    const bool sade = cfg.method == Method::SADE;
    const std::size_t NP = cfg.population_size(bounds.size());
    Tracker tracker(run, cfg.budget, cfg.effective_patience(bounds.size()), cfg.target);
    Rng rng(derive_seed(cfg.seed, 1, 0));

    Population pop = de_init(bounds, NP, rng);
    const std::size_t m0 = tracker.batch_limit(NP, true);
    const std::vector<std::vector<double>> init(pop.begin(), pop.begin() + static_cast<std::ptrdiff_t>(m0));
    const auto raw0 = evaluate_batch(evaluate, init);
    std::vector<double> fit(NP, kNegInf);
    for (std::size_t i = 0; i < m0; ++i) fit[i] = tracker.record(pop[i], raw0[i], 0, "init", kNaN, kNaN, true);
    const std::array<double, kStrategyCount> uniform{0.25, 0.25, 0.25, 0.25};
    run.generations.push_back(summarise(0, fit, 0, 0, 0, uniform));
    if (m0 < NP) {
        run.stop = StopReason::Budget;
        return;
    }

    SadeState state(cfg.sade.LP, cfg.sade.epsilon);
    for (std::uint64_t gen = 1; !tracker.done(); ++gen) {
        const auto best = static_cast<std::size_t>(std::max_element(fit.begin(), fit.end()) - fit.begin());
        std::vector<std::vector<double>> trials(NP);
        std::vector<Strategy> used(NP, Strategy::Rand1Bin);
        std::vector<double> Fs(NP, cfg.de.F), CRs(NP, cfg.de.CR);
        for (std::size_t i = 0; i < NP; ++i) {
            if (sade) {
                used[i] = sade_select_strategy(state, rng);
                std::tie(Fs[i], CRs[i]) = sade_sample_rates(state, used[i], rng);
            }
            auto v = mutate(used[i], pop, best, i, Fs[i], bounds, rng);
            trials[i] = used[i] == Strategy::CurrToRand1 ? std::move(v) : crossover_bin(pop[i], v, CRs[i], rng);
        }
        const std::size_t m = tracker.batch_limit(NP, false);
        trials.resize(m);
        const auto raw = evaluate_batch(evaluate, trials);
        const auto p_in_force = state.p;
        double F_sum = 0.0, CR_sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const std::string tag = sade ? to_string(used[i]) : to_string(Strategy::Rand1Bin);
            const double CR_logged = used[i] == Strategy::CurrToRand1 ? kNaN : CRs[i];
            const double f = tracker.record(trials[i], raw[i], gen, tag, Fs[i], CR_logged, false);
            const bool improved = trial_wins(fit[i], f);
            if (sade) sade_update(state, used[i], improved, CRs[i]);
            if (improved) {
                pop[i] = trials[i];
                fit[i] = f;
            }
            F_sum += Fs[i];
            CR_sum += CRs[i];
        }
        run.generations.push_back(summarise(gen, fit, F_sum, CR_sum, m, sade ? p_in_force : uniform));
        if (sade) sade_end_generation(state);
    }
}

void run_bo(const BatchEvaluator& evaluate, const Bounds& bounds, const OptimizerConfig& cfg, OptimizerRun& run) {
    const std::size_t d = bounds.size();
    Tracker tracker(run, cfg.budget, cfg.effective_patience(d), cfg.target);
    Rng rng(derive_seed(cfg.seed, 3, 0));
    const std::size_t n0 = cfg.bo.init_points ? cfg.bo.init_points : 3 * d;

    std::vector<std::vector<double>> unit;
    std::vector<double> ys;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    {
        const std::size_t m = tracker.batch_limit(n0, true);
        std::vector<std::vector<double>> us(m, std::vector<double>(d)), xs;
        for (auto& p : us) {
            for (auto& c : p) c = u(rng);
            xs.push_back(bounds.from_unit(p));
        }
        const auto raw = evaluate_batch(evaluate, xs);
        for (std::size_t i = 0; i < m; ++i) {
            ys.push_back(tracker.record(xs[i], raw[i], 0, "init", kNaN, kNaN, true));
            unit.push_back(bounds.to_unit(xs[i]));
        }
    }
    const std::string tag = to_string(cfg.bo.acquisition.kind);
    std::optional<GpHyper> hyper;
    for (std::size_t t = 1; !tracker.done(); ++t) {
        double worst = std::numeric_limits<double>::infinity();
        for (double y : ys) {
            if (std::isfinite(y)) worst = std::min(worst, y);
        }
        std::vector<double> fitted(ys);
        for (double& y : fitted) {
            if (!std::isfinite(y)) y = std::isfinite(worst) ? worst : 0.0;
        }
        GpFitOptions fo;
        fo.restarts = cfg.bo.gp_restarts;
        fo.seed = derive_seed(cfg.seed, 4, t);
        if (hyper && (t - 1) % cfg.bo.refit_every != 0) {
            fo.optimise_hyper = false;
            fo.fixed = *hyper;
        }
        std::vector<double> proposal;
        try {
            const GpModel model = gp_fit(unit, fitted, fo);
            hyper = model.hyper;
            proposal = bo_propose(model, cfg.bo.acquisition, t, rng, cfg.bo.proposal);
        } catch (const GpFitError&) {
            proposal.assign(d, 0.0);
            for (auto& c : proposal) c = u(rng);
        }
        const auto x = bounds.from_unit(proposal);
        const auto raw = evaluate_batch(evaluate, {x});
        ys.push_back(tracker.record(x, raw[0], t, tag, kNaN, kNaN, false));
        unit.push_back(bounds.to_unit(x));
    }
}

}  // namespace

OptimizerRun optimize(const BatchEvaluator& evaluate, const Bounds& bounds, const OptimizerConfig& config) {
    config.validate();
    bounds.check();
    OptimizerRun run;
    run.config = config;
    run.bounds = bounds;
    if (config.method == Method::BO) {
        run_bo(evaluate, bounds, config, run);
    } else {
        run_de(evaluate, bounds, config, run);
    }
    return run;
}

std::string to_record(const OptimizerRun& run) {
    const auto& c = run.config;
    std::ostringstream os;
    os << "# lgmd optimiser run\n";
    os << "method " << to_string(c.method) << '\n';
    os << "seed " << c.seed << '\n';
    os << "budget " << c.budget << '\n';
    os << "patience " << c.effective_patience(run.bounds.size()) << '\n';
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(run.bounds.hash()));
    if (c.target) os << "target " << format_double(*c.target) << '\n';
    os << "bounds_hash " << hash << '\n';
    if (c.method == Method::BO) {
        const auto& a = c.bo.acquisition;
        os << "acquisition " << to_string(a.kind) << '\n'
           << "zeta " << format_double(a.zeta) << '\n'
           << "nu " << format_double(a.nu) << '\n'
           << "delta " << format_double(a.delta) << '\n'
           << "kappa " << (a.fixed_kappa ? format_double(*a.fixed_kappa) : "schedule") << '\n'
           << "init_points " << (c.bo.init_points ? c.bo.init_points : 3 * run.bounds.size()) << '\n';
    } else {
        os << "NP " << c.population_size(run.bounds.size()) << '\n';
        if (c.method == Method::DE) {
            os << "F " << format_double(c.de.F) << '\n' << "CR " << format_double(c.de.CR) << '\n';
        } else {
            os << "LP " << c.sade.LP << '\n' << "epsilon " << format_double(c.sade.epsilon) << '\n';
        }
    }
    for (std::size_t i = 0; i < run.bounds.size(); ++i) {
        os << "dim " << i << ' ' << run.bounds.names[i] << ' ' << format_double(run.bounds.lower[i]) << ' '
           << format_double(run.bounds.upper[i]) << '\n';
    }
    os << "# eval index generation fitness failed strategy F CR x...\n";
    for (const auto& e : run.evaluations) {
        os << "eval " << e.index << ' ' << e.generation << ' ' << format_double(e.fitness) << ' ' << e.failed << ' '
           << e.strategy << ' ' << format_double(e.F) << ' ' << format_double(e.CR);
        for (double v : e.x) os << ' ' << format_double(v);
        os << '\n';
    }
    os << "# generation index best mean mean_F mean_CR p_rand1bin p_randtobest2bin p_rand2bin p_currtorand1\n";
    for (const auto& g : run.generations) {
        os << "generation " << g.generation << ' ' << format_double(g.best) << ' ' << format_double(g.mean) << ' '
           << format_double(g.mean_F) << ' ' << format_double(g.mean_CR);
        for (double p : g.p) os << ' ' << format_double(p);
        os << '\n';
    }
    os << "evaluations " << run.evaluations.size() << '\n';
    os << "failed " << run.failed << '\n';
    os << "stop " << (run.stop == StopReason::Budget ? "budget" : run.stop == StopReason::Patience ? "patience" : "target")
       << '\n';
    os << "best " << format_double(run.best_fitness);
    for (double v : run.best_x) os << ' ' << format_double(v);
    os << '\n';
    return os.str();
}

void write_record(const std::filesystem::path& file, const OptimizerRun& run) { write_new_file(file, to_record(run)); }

}  // namespace lgmd::opt
