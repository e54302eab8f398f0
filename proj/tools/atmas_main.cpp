#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "atmas/config.hpp"

namespace fs = std::filesystem;
using namespace atmas;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::string out_dir = "results";
    std::string tag;  // empty: timestamp
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--seed", opts.seed, "override the seed (sweeps: run this single seed)");
    cmd->add_option("--out", opts.out_dir, "output root directory")->capture_default_str();
    cmd->add_option("--tag", opts.tag, "run tag; defaults to a timestamp");
}

std::string timestamp_tag() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    localtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
    return buf;
}

fs::path run_dir(const CommonOpts& opts, const std::string& experiment) {
    fs::path dir = fs::path(opts.out_dir) / experiment /
                   (opts.tag.empty() ? timestamp_tag() : opts.tag);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    std::cout << "wrote " << path.string() << "\n";
}

eval::ExperimentSpec load_spec(const CommonOpts& opts, eval::ExperimentKind kind) {
    eval::ExperimentSpec spec;
    if (!opts.config_path.empty())
        spec = config::experiment_from_json(config::load_json_file(opts.config_path));
    spec.kind = kind;
    if (opts.seed) spec.seeds = {*opts.seed};
    return spec;
}

sim::SimConfig load_sim(const CommonOpts& opts) {
    sim::SimConfig cfg;
    if (!opts.config_path.empty())
        cfg = config::sim_from_json(config::load_json_file(opts.config_path));
    if (opts.seed) cfg.seed = *opts.seed;
    return cfg;
}

int cmd_sweep(const CommonOpts& opts, eval::ExperimentKind kind, const std::string& name) {
    eval::ExperimentSpec spec = load_spec(opts, kind);
    // smaller default grid for the quadratic combo study
    if (kind == eval::ExperimentKind::FactorComboSweep && opts.config_path.empty()) {
        spec.n_mu = 10;
        spec.n_windows = 300;
    }
    if (kind != eval::ExperimentKind::IllegalAccessSweep && opts.config_path.empty() &&
        !opts.seed)
        spec.seeds = {1, 2, 3};

    std::vector<eval::ResultRow> rows;
    switch (kind) {
        case eval::ExperimentKind::IllegalAccessSweep:
            rows = eval::run_illegal_access_sweep(spec);
            break;
        case eval::ExperimentKind::FactorCountSweep:
            rows = eval::run_factor_count_sweep(spec);
            break;
        case eval::ExperimentKind::FactorComboSweep:
            rows = eval::run_factor_combo_sweep(spec);
            break;
        case eval::ExperimentKind::ProtocolSuite:
            throw std::logic_error("not a sweep");
    }
    fs::path dir = run_dir(opts, name);
    write_file(dir / "rows.csv", eval::rows_to_csv(rows));
    write_file(dir / "summary.csv", eval::summary_to_csv(rows));
    if (kind == eval::ExperimentKind::FactorComboSweep)
        write_file(dir / "ranking.csv", eval::combo_ranking_csv(rows));
    return 0;
}

int cmd_protocol_suite(const CommonOpts& opts) {
    sim::SimConfig cfg = load_sim(opts);
    auto results = sim::run_security_properties(cfg.seed);

    std::string csv = "property,passed,detail\n";
    bool all_passed = true;
    for (const auto& r : results) {
        std::string detail = r.detail;
        for (auto& c : detail)
            if (c == ',') c = ';';
        csv += r.name + "," + (r.passed ? "1" : "0") + "," + detail + "\n";
        all_passed = all_passed && r.passed;
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
    }

    fs::path dir = run_dir(opts, "protocol-suite");
    write_file(dir / "properties.csv", csv);
    // honest-run evidence alongside the verdicts
    sim::SimulationReport rep = sim::run(cfg);
    write_file(dir / "events.jsonl", rep.event_log_text());
    write_file(dir / "summary.csv", rep.summary_csv());
    return all_passed ? 0 : 3;
}

int cmd_simulate(const CommonOpts& opts) {
    sim::SimConfig cfg = load_sim(opts);
    sim::SimulationReport rep = sim::run(cfg);
    fs::path dir = run_dir(opts, "simulate");
    write_file(dir / "events.jsonl", rep.event_log_text());
    write_file(dir / "summary.csv", rep.summary_csv());
    std::cout << rep.authenticated_count() << " of " << rep.sessions.size()
              << " sessions authenticated\n";
    return 0;
}

int cmd_gen_dataset(const CommonOpts& opts, int n_mu, int n_windows, double fraction) {
    scenario::ScenarioConfig sc;
    if (!opts.config_path.empty())
        sc = config::scenario_from_json(config::load_json_file(opts.config_path));
    uint64_t seed = opts.seed.value_or(1);
    auto ds = scenario::generate_dataset(sc, n_mu, n_windows, fraction, seed);
    fs::path dir = run_dir(opts, "gen-dataset");
    write_file(dir / "dataset.csv", scenario::to_csv(ds));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-phase multi-factor authentication simulator and experiment runner"};
    app.require_subcommand(1);

    CommonOpts opts;
    int n_mu = 20;
    int n_windows = 1000;
    double fraction = 0.5;

    auto* suite = app.add_subcommand("protocol-suite",
                                     "run the adversary scenarios for every security property");
    add_common(suite, opts);
    auto* simulate = app.add_subcommand("simulate", "run one simulation and dump its artifacts");
    add_common(simulate, opts);
    auto* illegal = app.add_subcommand("sweep-illegal",
                                       "accuracy across illegal access fractions");
    add_common(illegal, opts);
    auto* factors = app.add_subcommand("sweep-factors", "accuracy across cumulative factor sets");
    add_common(factors, opts);
    auto* combos = app.add_subcommand("sweep-combos", "accuracy across all three-factor combos");
    add_common(combos, opts);
    auto* gen = app.add_subcommand("gen-dataset", "emit one labeled window dataset as CSV");
    add_common(gen, opts);
    gen->add_option("--n-mu", n_mu, "mobile users")->capture_default_str();
    gen->add_option("--windows", n_windows, "windows per MU")->capture_default_str();
    gen->add_option("--fraction", fraction, "spoofed fraction")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (suite->parsed()) return cmd_protocol_suite(opts);
        if (simulate->parsed()) return cmd_simulate(opts);
        if (illegal->parsed())
            return cmd_sweep(opts, eval::ExperimentKind::IllegalAccessSweep, "sweep-illegal");
        if (factors->parsed())
            return cmd_sweep(opts, eval::ExperimentKind::FactorCountSweep, "sweep-factors");
        if (combos->parsed())
            return cmd_sweep(opts, eval::ExperimentKind::FactorComboSweep, "sweep-combos");
        if (gen->parsed()) return cmd_gen_dataset(opts, n_mu, n_windows, fraction);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
