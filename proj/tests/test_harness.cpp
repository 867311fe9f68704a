#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "lgmd/harness/experiment.hpp"
#include "lgmd/util.hpp"
#include "oracles.hpp"

using namespace lgmd;
using namespace lgmd::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "lgmd_test_harness" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& f) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
    }
    return out;
}

std::size_t plus_cells(const std::string& table) {
    std::istringstream in(table);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') n += static_cast<std::size_t>(std::count(line.begin(), line.end(), '+'));
    }
    return n;
}

std::size_t data_rows(const fs::path& f) {
    std::istringstream in(slurp(f));
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) n += !line.empty() && line[0] != '#';
    return n;
}

ExperimentConfig tiny(const fs::path& out, const std::string& variant = "AP") {
    std::ostringstream ini;
    ini << "[stimulus]\npreset = circleFast\nintervals = 2\n"
        << "[model]\nvariant = " << variant << "\n"
        << "[optimizer]\nmethod = SADE\nbudget = 24\nNP = 6\n"
        << "[run]\nseed = 3\nrepeats = 2\nevaluate = squareFast\nout = " << out.string() << "\n";
    return experiment_from_ini(IniFile::parse(ini.str()));
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LGMD_CLI) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("Mann-Whitney U") {
    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    CHECK(mann_whitney_u(a, b).U == 0.0);
    CHECK(mann_whitney_u(b, a).U == 9.0);
    CHECK(mann_whitney_u(a, a).p > 0.9);
    const std::vector<double> same{2, 2, 2};
    CHECK(mann_whitney_u(same, same).p == 1.0);
    const std::vector<double> c{1, 2, 3, 4}, d{2, 3, 4, 5};
    CHECK(mann_whitney_u(c, d).U == oracle::u_pairs(c, d));
    CHECK(mann_whitney_exact(c, d).p == doctest::Approx(oracle::u_permutation_p(c, d)).epsilon(1e-12));
    CHECK(midranks(std::vector<double>{3, 1, 3, 2}) == std::vector<double>{3.5, 1, 3.5, 2});
}

TEST_CASE("Mann-Whitney against pair counting and permutation enumeration") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> v(0, 6);
    for (std::size_t na = 1; na <= 8; ++na) {
        for (std::size_t nb = 1; nb <= 8; ++nb) {
            std::vector<double> a(na), b(nb);
            for (auto& x : a) x = v(rng);
            for (auto& x : b) x = v(rng) + 0.5 * (rng() % 2);
            const auto approx = mann_whitney_u(a, b);
            const auto exact = mann_whitney_exact(a, b);
            CHECK(approx.U == oracle::u_pairs(a, b));
            CHECK(exact.U == approx.U);
            CHECK(exact.p == doctest::Approx(oracle::u_permutation_p(a, b)).epsilon(1e-12));
            CHECK(approx.p >= 0.0);
            CHECK(approx.p <= 1.0);
            const auto swapped = mann_whitney_u(b, a);
            CHECK(swapped.U == static_cast<double>(na * nb) - approx.U);
            CHECK(swapped.p == doctest::Approx(approx.p).epsilon(1e-12));
        }
    }
}

TEST_CASE("comparison tables") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<std::array<double, 6>> s(10);
    for (auto& r : s) {
        for (auto& x : r) x = n(rng);
    }
    auto shifted = s;
    for (auto& r : shifted) r[0] += 100.0;
    const auto self = compare_samples({"A", "B"}, {s, s});
    CHECK(plus_cells(self.significance_table()) == 0);
    const auto diff = compare_samples({"A", "B"}, {s, shifted});
    CHECK(plus_cells(diff.significance_table()) == 2);
    for (const auto* m : kComparisonMetrics) CHECK(diff.summary_table().find(m) != std::string::npos);
    REQUIRE(diff.pairs.size() == 2);
    for (std::size_t k = 0; k < 6; ++k) {
        REQUIRE(diff.pairs[0].tests[k].has_value());
        CHECK(diff.pairs[0].tests[k]->p == doctest::Approx(diff.pairs[1].tests[k]->p));
        CHECK(diff.pairs[0].tests[k]->p >= 0.0);
        CHECK(diff.pairs[0].tests[k]->p <= 1.0);
    }
}

TEST_CASE("configuration parsing") {
    const auto c = experiment_from_ini(IniFile::parse("[model]\nvariant = P  # plastic\nclamp = 0.1\n[run]\nrepeats = 3\n"));
    CHECK(c.model.variant == Variant::P);
    CHECK(c.model.clamp == 0.1);
    CHECK(c.repeats == 3);
    const std::string text = to_text(c);
    CHECK(text.find("# not from paper") != std::string::npos);
    CHECK(to_text(experiment_from_ini(IniFile::parse(text))) == text);

    CHECK_THROWS_AS(experiment_from_ini(IniFile::parse("[model]\nvarient = P\n")), ConfigError);
    CHECK_THROWS_AS(experiment_from_ini(IniFile::parse("[run]\nrepeats = 0\n")), ConfigError);
    CHECK_THROWS_AS(experiment_from_ini(IniFile::parse("[optimizer]\nmethod = BO-XX\n")), ConfigError);
    CHECK_THROWS_AS(experiment_from_ini(IniFile::parse("[stimulus]\nrecording = /nonexistent.lgev\n")), ConfigError);
    CHECK_THROWS_AS(experiment_from_ini(IniFile::parse("[stimulus]\nwidth = 16\n")), ConfigError);
}

TEST_CASE("parameter files round trip") {
    for (auto v : {Variant::LGMD, Variant::A, Variant::P, Variant::AP}) {
        const Hyperparams p = reference_params(v);
        const auto [back, variant] = params_from_text(params_to_text(p, v));
        CHECK(variant == v);
        CHECK(params_to_text(back, variant) == params_to_text(p, v));
        CHECK(hyperparams_to_vector(back, flags_of(v)) == hyperparams_to_vector(p, flags_of(v)));
    }
    const std::string ap = params_to_text(reference_params(Variant::AP), Variant::AP);
    for (const char* key : {"a ", "b ", "tau_w ", "tau_pre ", "tau_post "}) CHECK(ap.find(std::string("\n") + key) != std::string::npos);
    CHECK(search_bounds(flags_of(Variant::LGMD)).size() == 11);
}

TEST_CASE("run directories") {
    const auto root = scratch("dirs");
    const auto a = allocate_run_dir(root, "optimize");
    const auto b = allocate_run_dir(root, "optimize");
    CHECK(a != b);
    CHECK(fs::is_directory(a));
    CHECK(fs::is_directory(b));
    write_new_file(root / "plain", "x");
    CHECK_THROWS_AS(allocate_run_dir(root / "plain" / "sub", "optimize"), ConfigError);
    CHECK_THROWS(write_new_file(root / "plain", "y"));
}

TEST_CASE("clamp sweep") {
    const auto cfg = tiny(scratch("clamp"), "AP");
    const auto rec = make_preset("circleFast", {32, 32}, 0.03, 0.0, 1, 2);
    Hyperparams p = reference_params(Variant::AP);
    p.q_eL = 2000.0;
    p.inhA_S = 0.25;
    p.inhB_S = 0.125;
    const std::vector<double> values{0.0, 0.05, 0.5};
    const auto rows = clamp_sweep(p, Variant::AP, rec, cfg, values);
    REQUIRE(rows.size() == values.size() + 1);
    for (std::size_t i = 0; i < values.size(); ++i) CHECK(rows[i].c == values[i]);
    CHECK(rows[0].report == rows.back().report);
    const auto table = clamp_table(rows);
    CHECK(table.find("0.05") != std::string::npos);
}

TEST_CASE("experiment records, determinism and plot export") {
    const auto root = scratch("experiment");
    const auto cfg = tiny(root);
    const auto d1 = allocate_run_dir(root, "optimize");
    const auto d2 = allocate_run_dir(root, "optimize");
    const auto o1 = run_experiment(cfg, d1);
    run_experiment(cfg, d2);
    CHECK(tree(d1) == tree(d2));
    REQUIRE(o1.repeats.size() == 2);
    CHECK(o1.repeats[0].seed != o1.repeats[1].seed);
    CHECK(fs::exists(d1 / "summary.txt"));
    CHECK(slurp(d1 / "repeat-00" / "best_params.txt").find("tau_pre") != std::string::npos);

    const auto dest = root / "export";
    fs::create_directories(dest);
    const auto res = export_plots(d1, dest);
    CHECK(res.missing.empty());
    const auto gens = o1.repeats[0].run.generations.size();
    REQUIRE(gens > 0);
    for (const char* f : {"fitness.txt", "rate_F.txt", "rate_CR.txt", "strategy_p.txt"}) {
        CHECK(data_rows(dest / (std::string("repeat-00_") + f)) == gens);
    }
    std::istringstream sp(slurp(dest / "repeat-00_strategy_p.txt"));
    std::string line;
    while (std::getline(sp, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        double g, sum = 0.0, x;
        row >> g;
        while (row >> x) sum += x;
        CHECK(std::abs(sum - 1.0) < 1e-9);
    }
    CHECK(data_rows(dest / "repeat-00_evaluations.txt") == o1.repeats[0].run.evaluations.size());

    const auto empty = root / "nothing";
    fs::create_directories(empty);
    CHECK(!export_plots(empty, dest).missing.empty());
}

TEST_CASE("simulation records and rasters") {
    const auto root = scratch("simulate");
    const auto cfg = tiny(root, "P");
    const auto rec = make_preset("circleFast", {32, 32}, 0.03, 0.0, 1, 2);
    Hyperparams p = reference_params(Variant::P);
    const auto dir = allocate_run_dir(root, "simulate");
    SimulationResult r;
    evaluate_params(p, flags_of(Variant::P), rec, cfg.classifier, cfg.score, BoundsPolicy::Physical, &r);
    simulate_to_dir(p, Variant::P, rec, cfg, dir);
    const auto dest = root / "export";
    fs::create_directories(dest);
    export_plots(dir, dest);
    for (std::size_t l = 0; l < kLayerCount; ++l) {
        const std::string name = "raster_" + to_string(static_cast<Layer>(l)) + ".txt";
        CHECK(data_rows(dest / name) == r.spikes[l].size());
    }
    CHECK(fs::exists(dest / "weights_scalar.txt"));
    CHECK(data_rows(dest / "weights_scalar.txt") == r.snapshots.size());
}

TEST_CASE("command line exit codes") {
    const auto root = scratch("cli");
    write_new_file(root / "bad.ini", "[model]\nnope = 1\n");
    write_new_file(root / "ok.ini", "[stimulus]\npreset = circleFast\nintervals = 2\n");
    CHECK(run_cli("--config " + (root / "bad.ini").string() + " --out " + root.string() + " gen-stimulus") == 2);
    CHECK(run_cli("--config " + (root / "ok.ini").string() + " --out " + root.string() + " gen-stimulus") == 0);
    CHECK(run_cli("--config " + (root / "ok.ini").string() + " --out " + root.string() + " simulate") == 0);
    CHECK(run_cli("--out " + root.string() + " export-plots " + (root / "absent").string()) == 2);
    CHECK(run_cli("no-such-command") == 2);
    write_new_file(root / "file", "x");
    CHECK(run_cli("--config " + (root / "ok.ini").string() + " --out " + (root / "file").string() + " gen-stimulus") ==
          2);
}
