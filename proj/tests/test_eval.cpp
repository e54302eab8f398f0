#include <cmath>
#include <set>
#include <sstream>

#include "atmas/eval/experiments.hpp"
#include "doctest.h"

using namespace atmas;
using eval::ExperimentSpec;

namespace {

ExperimentSpec tiny_spec() {
    ExperimentSpec spec;
    spec.n_mu = 3;
    spec.n_windows = 40;
    spec.illegal_fractions = {0.5};
    spec.seeds = {1, 2};
    spec.forest.n_trees = 15;
    spec.forest.max_depth = 8;
    return spec;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& csv) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (line.ends_with(',')) fields.push_back("");
        rows.push_back(fields);
    }
    return rows;
}

}  // namespace

TEST_CASE("factor set enumerations") {
    auto cumulative = eval::cumulative_factor_sets();
    REQUIRE(cumulative.size() == 9);
    for (size_t k = 0; k < cumulative.size(); ++k) {
        REQUIRE(cumulative[k].size() == k + 1);
        for (size_t i = 0; i < cumulative[k].size(); ++i)
            CHECK(cumulative[k][i] == static_cast<int>(i) + 1);
    }

    auto combos = eval::three_factor_combos();
    REQUIRE(combos.size() == 84);
    std::set<std::vector<int>> distinct(combos.begin(), combos.end());
    CHECK(distinct.size() == 84);
    for (size_t i = 0; i + 1 < combos.size(); ++i) {
        REQUIRE(combos[i].size() == 3);
        CHECK(combos[i] < combos[i + 1]);  // lexicographic
    }
    CHECK(combos.front() == std::vector<int>{1, 2, 3});
    CHECK(combos.back() == std::vector<int>{7, 8, 9});
}

TEST_CASE("factor labels") {
    CHECK(eval::factors_label({1}) == "1-1");
    CHECK(eval::factors_label({1, 2, 3}) == "1-3");
    CHECK(eval::factors_label({1, 2, 3, 4, 5, 6, 7, 8, 9}) == "1-9");
    CHECK(eval::factors_label({1, 3, 4}) == "1+3+4");
    CHECK(eval::factors_label({2, 5, 9}) == "2+5+9");
}

TEST_CASE("evaluate_cell is deterministic and accounts for every test row") {
    auto spec = tiny_spec();
    auto factors = eval::cumulative_factor_sets().back();
    auto a = eval::evaluate_cell(spec, ml::Algorithm::RandomForest, factors, 0.5, 7);
    auto b = eval::evaluate_cell(spec, ml::Algorithm::RandomForest, factors, 0.5, 7);

    CHECK(a.status == "ok");
    CHECK(a.acc == b.acc);
    CHECK(a.cm.tp == b.cm.tp);
    CHECK(a.cm.fp == b.cm.fp);
    CHECK(a.cm.tn == b.cm.tn);
    CHECK(a.cm.fn == b.cm.fn);
    CHECK(a.acc >= 0.0);
    CHECK(a.acc <= 1.0);

    // 70/30 stratified split over 40 windows: 20 + 20 per class at fraction
    // 0.5, 14 of each in train, 6 + 6 in test, per MU
    int total = a.cm.tp + a.cm.fp + a.cm.tn + a.cm.fn;
    CHECK(total == spec.n_mu * 12);
}

TEST_CASE("an all-legitimate cell degrades to a perfect grant policy") {
    auto spec = tiny_spec();
    auto row = eval::evaluate_cell(spec, ml::Algorithm::RandomForest,
                                   eval::cumulative_factor_sets().back(), 0.0, 3);
    CHECK(row.status == "degenerate");
    CHECK(row.acc == 1.0);
    CHECK(row.cm.tp == 0);
    CHECK(row.cm.fp == 0);
    CHECK(row.cm.fn == 0);
    CHECK(row.cm.tn == spec.n_mu * 12);
}

TEST_CASE("a broken scenario yields a failed row instead of a crash") {
    auto spec = tiny_spec();
    spec.scenario.window_s = -1.0;
    auto row = eval::evaluate_cell(spec, ml::Algorithm::RandomForest, {1, 2, 3}, 0.5, 1);
    CHECK(row.status == "failed");

    auto csv = eval::rows_to_csv({row});
    auto rows = parse_csv(csv);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][4] == "failed");
    CHECK(rows[1][5] == "");  // acc column left blank
}

TEST_CASE("illegal access sweep emits one row per cell and stable csvs") {
    auto spec = tiny_spec();
    auto rows = eval::run_illegal_access_sweep(spec);
    REQUIRE(rows.size() == spec.illegal_fractions.size() * spec.seeds.size());
    for (const auto& r : rows) {
        CHECK(r.algorithm == "forest");
        CHECK(r.factors == "1-9");
        CHECK((r.status == "ok" || r.status == "degenerate"));
    }

    auto again = eval::run_illegal_access_sweep(spec);
    CHECK(eval::rows_to_csv(rows) == eval::rows_to_csv(again));
    CHECK(eval::summary_to_csv(rows) == eval::summary_to_csv(again));
}

TEST_CASE("summary aggregates the seed mean per cell") {
    auto spec = tiny_spec();
    auto rows = eval::run_illegal_access_sweep(spec);
    auto table = parse_csv(eval::rows_to_csv(rows));
    auto summary = parse_csv(eval::summary_to_csv(rows));

    REQUIRE(summary.size() == 2);
    CHECK(summary[0] == std::vector<std::string>{"algorithm", "factors", "illegal_fraction",
                                                 "mean_acc", "n_seeds"});
    REQUIRE(summary[1].size() == 5);
    CHECK(summary[1][4] == "2");

    double mean = 0.0;
    for (size_t i = 1; i < table.size(); ++i) mean += std::stod(table[i][5]);
    mean /= static_cast<double>(table.size() - 1);
    CHECK(std::abs(std::stod(summary[1][3]) - mean) < 1e-5);
}

TEST_CASE("factor count sweep walks the cumulative sets") {
    auto spec = tiny_spec();
    spec.seeds = {1};
    spec.fixed_fraction = 0.5;
    auto rows = eval::run_factor_count_sweep(spec);
    REQUIRE(rows.size() == 9);
    for (size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].factors == "1-" + std::to_string(k + 1));
        CHECK(rows[k].illegal_fraction == 0.5);
    }
}

TEST_CASE("factor combo sweep walks all 84 triples and ranks them") {
    auto spec = tiny_spec();
    spec.seeds = {1};
    spec.n_windows = 30;
    spec.forest.n_trees = 10;
    auto rows = eval::run_factor_combo_sweep(spec);
    REQUIRE(rows.size() == 84);
    std::set<std::string> labels;
    for (const auto& r : rows) labels.insert(r.factors);
    CHECK(labels.size() == 84);
    CHECK(labels.contains("1-3"));  // {1,2,3} prints as a contiguous range
    CHECK(labels.contains("7+8+9"));

    auto ranking = parse_csv(eval::combo_ranking_csv(rows));
    REQUIRE(ranking.size() == 85);
    CHECK(ranking[0] == std::vector<std::string>{"rank", "factors", "mean_acc", "contains_f1"});
    int with_f1 = 0;
    double prev = 2.0;
    for (size_t i = 1; i < ranking.size(); ++i) {
        CHECK(ranking[i][0] == std::to_string(i));
        double acc = std::stod(ranking[i][2]);
        CHECK(acc <= prev);
        prev = acc;
        if (ranking[i][3] == "1") ++with_f1;
    }
    CHECK(with_f1 == 28);  // C(8,2) triples include factor 1
}
