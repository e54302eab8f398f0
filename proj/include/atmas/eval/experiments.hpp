#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atmas/ml/baselines.hpp"
#include "atmas/ml/metrics.hpp"
#include "atmas/scenario/dataset.hpp"

namespace atmas::eval {

enum class ExperimentKind {
    IllegalAccessSweep,
    FactorCountSweep,
    FactorComboSweep,
    ProtocolSuite,
};

// Train/test protocol shared by all sweeps: per-MU models, stratified 70/30
// splits, one result row per (cell, seed), mean over seeds in the summary.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::IllegalAccessSweep;
    scenario::ScenarioConfig scenario;
    int n_mu = 20;
    int n_windows = 1000;
    std::vector<ml::Algorithm> algorithms{ml::Algorithm::RandomForest};
    std::vector<double> illegal_fractions{0.1, 0.2, 0.3, 0.4, 0.5};
    double fixed_fraction = 0.5;  // used by the factor sweeps
    std::vector<uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    ml::ForestHyperparams forest;
    double train_fraction = 0.7;

    void validate() const;
};

struct ResultRow {
    std::string algorithm;
    std::string factors;  // e.g. "1-9" (cumulative range) or "1+2+4" (combo)
    double illegal_fraction = 0.0;
    uint64_t seed = 0;
    std::string status;  // ok | degenerate | failed
    double acc = 0.0;    // meaningless unless status != failed
    ml::ConfusionMatrix cm;
};

// Cumulative sets {1}, {1,2}, ..., {1..9}.
std::vector<std::vector<int>> cumulative_factor_sets();
// All C(9,3) = 84 three-factor combinations in lexicographic order.
std::vector<std::vector<int>> three_factor_combos();
std::string factors_label(const std::vector<int>& factors);

// One (algorithm, factor set, fraction, seed) cell: generate the dataset,
// train one model per MU, pool the test confusion counts. Single-class
// training data falls back to the majority-class predictor with status
// "degenerate"; any other error yields status "failed".
ResultRow evaluate_cell(const ExperimentSpec& spec, ml::Algorithm algorithm,
                        const std::vector<int>& active_factors, double illegal_fraction,
                        uint64_t seed);

std::vector<ResultRow> run_illegal_access_sweep(const ExperimentSpec& spec);
std::vector<ResultRow> run_factor_count_sweep(const ExperimentSpec& spec);
std::vector<ResultRow> run_factor_combo_sweep(const ExperimentSpec& spec);

// rows.csv: one line per cell and seed. summary.csv: seed-mean per cell,
// only over non-failed rows.
std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::string summary_to_csv(const std::vector<ResultRow>& rows);

// Combo-sweep ranking: seed-mean per factor set, sorted best first (ties by
// label), with a flag column marking sets that include factor 1.
std::string combo_ranking_csv(const std::vector<ResultRow>& rows);

}  // namespace atmas::eval
