#include "atmas/eval/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "atmas/ml/preprocess.hpp"
#include "atmas/rng.hpp"

namespace atmas::eval {

void ExperimentSpec::validate() const {
    scenario.validate();
    if (n_mu <= 0) throw std::invalid_argument("ExperimentSpec: n_mu must be positive");
    if (n_windows <= 0) throw std::invalid_argument("ExperimentSpec: n_windows must be positive");
    if (algorithms.empty()) throw std::invalid_argument("ExperimentSpec: no algorithms");
    if (seeds.empty()) throw std::invalid_argument("ExperimentSpec: no seeds");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("ExperimentSpec: train_fraction must be in (0, 1)");
    for (double f : illegal_fractions)
        if (!(f >= 0.0 && f <= 0.95))
            throw std::invalid_argument("ExperimentSpec: illegal fraction outside [0, 0.95]");
    if (!(fixed_fraction >= 0.0 && fixed_fraction <= 0.95))
        throw std::invalid_argument("ExperimentSpec: fixed_fraction outside [0, 0.95]");
    forest.validate();
}

std::vector<std::vector<int>> cumulative_factor_sets() {
    std::vector<std::vector<int>> sets;
    std::vector<int> cur;
    for (int f = 1; f <= 9; ++f) {
        cur.push_back(f);
        sets.push_back(cur);
    }
    return sets;
}

std::vector<std::vector<int>> three_factor_combos() {
    std::vector<std::vector<int>> combos;
    for (int a = 1; a <= 7; ++a)
        for (int b = a + 1; b <= 8; ++b)
            for (int c = b + 1; c <= 9; ++c) combos.push_back({a, b, c});
    return combos;
}

std::string factors_label(const std::vector<int>& factors) {
    // Contiguous runs from 1 print as a range so the cumulative sweep reads
    // as 1-1, 1-2, ..., 1-9; everything else joins with '+'.
    bool contiguous_from_1 = !factors.empty() && factors.front() == 1;
    for (size_t i = 0; contiguous_from_1 && i < factors.size(); ++i)
        if (factors[i] != static_cast<int>(i) + 1) contiguous_from_1 = false;
    if (contiguous_from_1) return "1-" + std::to_string(factors.back());
    std::string out;
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i) out += '+';
        out += std::to_string(factors[i]);
    }
    return out;
}

namespace {

struct Split {
    std::vector<uint32_t> train;
    std::vector<uint32_t> test;
};

// Stratified split: shuffle each class independently, put the first
// round(train_fraction * class size) of each into the train side.
Split stratified_split(const scenario::LabeledWindow* windows, int n, double train_fraction,
                       Rng& rng) {
    std::vector<uint32_t> by_class[2];
    for (int w = 0; w < n; ++w)
        by_class[windows[w].label == scenario::WindowLabel::Spoof ? 1 : 0].push_back(
            static_cast<uint32_t>(w));
    Split split;
    for (auto& cls : by_class) {
        for (size_t i = cls.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(i) - 1));
            std::swap(cls[i - 1], cls[j]);
        }
        size_t n_train = static_cast<size_t>(
            std::llround(train_fraction * static_cast<double>(cls.size())));
        n_train = std::min(n_train, cls.size());
        split.train.insert(split.train.end(), cls.begin(), cls.begin() + n_train);
        split.test.insert(split.test.end(), cls.begin() + n_train, cls.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

void encode_subset(const scenario::LabeledWindow* windows, const std::vector<uint32_t>& idx,
                   const std::vector<int>& active, ml::FeatureMatrix& X, std::vector<int>& y) {
    X = ml::FeatureMatrix(idx.size(), ml::encoded_width(active));
    y.clear();
    y.reserve(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) {
        ml::encode_factors(windows[idx[i]].factors, active, X.row(i));
        y.push_back(windows[idx[i]].label == scenario::WindowLabel::Spoof ? 1 : 0);
    }
}

}  // namespace

ResultRow evaluate_cell(const ExperimentSpec& spec, ml::Algorithm algorithm,
                        const std::vector<int>& active_factors, double illegal_fraction,
                        uint64_t seed) {
    ResultRow row;
    row.algorithm = ml::algorithm_name(algorithm);
    row.factors = factors_label(active_factors);
    row.illegal_fraction = illegal_fraction;
    row.seed = seed;
    row.status = "ok";
    try {
        scenario::Dataset ds = scenario::generate_dataset(spec.scenario, spec.n_mu,
                                                          spec.n_windows, illegal_fraction, seed);
        bool degenerate = false;
        for (int mu = 0; mu < spec.n_mu; ++mu) {
            const scenario::LabeledWindow* base =
                ds.rows.data() + static_cast<size_t>(mu) * spec.n_windows;
            Rng split_rng(derive_seed(seed, "eval/split", static_cast<uint64_t>(mu)));
            Split split = stratified_split(base, spec.n_windows, spec.train_fraction, split_rng);

            ml::FeatureMatrix Xtr, Xte;
            std::vector<int> ytr, yte;
            encode_subset(base, split.train, active_factors, Xtr, ytr);
            encode_subset(base, split.test, active_factors, Xte, yte);

            int label_sum = 0;
            for (int v : ytr) label_sum += v;
            if (label_sum == 0 || label_sum == static_cast<int>(ytr.size())) {
                // Single-class training data: majority-class predictor.
                degenerate = true;
                int majority = label_sum == 0 ? 0 : 1;
                for (int actual : yte) row.cm.add(actual, majority);
                continue;
            }

            auto stats = ml::fit_preprocess(Xtr, ml::onehot_flags(active_factors));
            ml::FeatureMatrix Ptr = ml::apply_preprocess(stats, Xtr);
            ml::FeatureMatrix Pte = ml::apply_preprocess(stats, Xte);

            uint64_t model_seed = derive_seed(seed, "eval/model", static_cast<uint64_t>(mu));
            ml::AnyModel model =
                ml::train_model(algorithm, Ptr, ytr, active_factors, spec.forest, model_seed);
            for (size_t i = 0; i < Pte.rows; ++i) {
                int predicted = model.predict_score(Pte.row(i)) > 0.5 ? 1 : 0;
                row.cm.add(yte[i], predicted);
            }
        }
        row.acc = ml::compute_accuracy(row.cm);
        if (degenerate) row.status = "degenerate";
    } catch (const std::exception&) {
        row.status = "failed";
        row.acc = 0.0;
        row.cm = {};
    }
    return row;
}

namespace {

struct Cell {
    ml::Algorithm algorithm;
    std::vector<int> factors;
    double fraction;
    uint64_t seed;
};

std::vector<ResultRow> run_cells(const ExperimentSpec& spec, const std::vector<Cell>& cells) {
    std::vector<ResultRow> rows(cells.size());
#pragma omp parallel for schedule(dynamic)
    for (int64_t i = 0; i < static_cast<int64_t>(cells.size()); ++i) {
        const Cell& c = cells[static_cast<size_t>(i)];
        rows[static_cast<size_t>(i)] =
            evaluate_cell(spec, c.algorithm, c.factors, c.fraction, c.seed);
    }
    return rows;
}

}  // namespace

std::vector<ResultRow> run_illegal_access_sweep(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<Cell> cells;
    auto all = ml::all_factors();
    for (ml::Algorithm alg : spec.algorithms)
        for (double fraction : spec.illegal_fractions)
            for (uint64_t seed : spec.seeds) cells.push_back({alg, all, fraction, seed});
    return run_cells(spec, cells);
}

std::vector<ResultRow> run_factor_count_sweep(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<Cell> cells;
    for (ml::Algorithm alg : spec.algorithms)
        for (const auto& set : cumulative_factor_sets())
            for (uint64_t seed : spec.seeds) cells.push_back({alg, set, spec.fixed_fraction, seed});
    return run_cells(spec, cells);
}

std::vector<ResultRow> run_factor_combo_sweep(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<Cell> cells;
    for (ml::Algorithm alg : spec.algorithms)
        for (const auto& set : three_factor_combos())
            for (uint64_t seed : spec.seeds) cells.push_back({alg, set, spec.fixed_fraction, seed});
    return run_cells(spec, cells);
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::string out = "algorithm,factors,illegal_fraction,seed,status,acc,tp,fp,tn,fn\n";
    for (const auto& r : rows) {
        out += r.algorithm;
        out += ',';
        out += r.factors;
        out += ',';
        out += format_double(r.illegal_fraction);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += r.status;
        out += ',';
        out += r.status == "failed" ? std::string() : format_double(r.acc);
        out += ',';
        out += std::to_string(r.cm.tp);
        out += ',';
        out += std::to_string(r.cm.fp);
        out += ',';
        out += std::to_string(r.cm.tn);
        out += ',';
        out += std::to_string(r.cm.fn);
        out += '\n';
    }
    return out;
}

std::string summary_to_csv(const std::vector<ResultRow>& rows) {
    // Aggregate over seeds in first-appearance order of (algorithm, factors,
    // fraction); the sweeps emit cells in a fixed order so this is stable.
    struct Agg {
        std::string algorithm;
        std::string factors;
        double fraction = 0.0;
        double acc_sum = 0.0;
        int n = 0;
    };
    std::vector<Agg> aggs;
    for (const auto& r : rows) {
        Agg* slot = nullptr;
        for (auto& a : aggs)
            if (a.algorithm == r.algorithm && a.factors == r.factors &&
                a.fraction == r.illegal_fraction) {
                slot = &a;
                break;
            }
        if (!slot) {
            aggs.push_back({r.algorithm, r.factors, r.illegal_fraction, 0.0, 0});
            slot = &aggs.back();
        }
        if (r.status != "failed") {
            slot->acc_sum += r.acc;
            slot->n += 1;
        }
    }
    std::string out = "algorithm,factors,illegal_fraction,mean_acc,n_seeds\n";
    for (const auto& a : aggs) {
        out += a.algorithm;
        out += ',';
        out += a.factors;
        out += ',';
        out += format_double(a.fraction);
        out += ',';
        out += a.n > 0 ? format_double(a.acc_sum / a.n) : std::string();
        out += ',';
        out += std::to_string(a.n);
        out += '\n';
    }
    return out;
}

std::string combo_ranking_csv(const std::vector<ResultRow>& rows) {
    struct Agg {
        std::string factors;
        double acc_sum = 0.0;
        int n = 0;
    };
    std::vector<Agg> aggs;
    for (const auto& r : rows) {
        if (r.status == "failed") continue;
        auto slot = std::find_if(aggs.begin(), aggs.end(),
                                 [&](const Agg& a) { return a.factors == r.factors; });
        if (slot == aggs.end()) {
            aggs.push_back({r.factors, 0.0, 0});
            slot = std::prev(aggs.end());
        }
        slot->acc_sum += r.acc;
        slot->n += 1;
    }
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& a : aggs)
        if (a.n > 0) ranked.push_back({a.acc_sum / a.n, a.factors});
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::string out = "rank,factors,mean_acc,contains_f1\n";
    for (size_t i = 0; i < ranked.size(); ++i) {
        bool has_f1 = ranked[i].second == "1-1" || ranked[i].second.starts_with("1-") ||
                      ranked[i].second.starts_with("1+");
        out += std::to_string(i + 1);
        out += ',';
        out += ranked[i].second;
        out += ',';
        out += format_double(ranked[i].first);
        out += ',';
        out += has_f1 ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace atmas::eval
