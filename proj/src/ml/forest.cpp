#include "atmas/ml/forest.hpp"

#include <cmath>
#include <stdexcept>

namespace atmas::ml {

double ForestModel::predict_score(const double* row) const {
    int64_t votes = 0;
    for (const auto& t : trees) votes += t.predict(row);
    return static_cast<double>(votes) / static_cast<double>(trees.size());
}

double ForestModel::predict_score(const std::vector<double>& row) const {
    if (row.size() != n_features)
        throw std::invalid_argument("predict: feature dimension mismatch");
    return predict_score(row.data());
}

void ForestHyperparams::validate() const {
    if (n_trees < 1) throw std::invalid_argument("ForestHyperparams: n_trees must be positive");
    if (max_depth < 1) throw std::invalid_argument("ForestHyperparams: max_depth must be positive");
    if (feature_subset == 0 || feature_subset < -1)
        throw std::invalid_argument("ForestHyperparams: feature_subset must be positive or -1");
    if (min_samples_split < 2)
        throw std::invalid_argument("ForestHyperparams: min_samples_split must be at least 2");
}

int resolve_feature_subset(const ForestHyperparams& hp, size_t n_features) {
    if (hp.feature_subset > 0) return hp.feature_subset;
    return std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_features)))));
}

namespace {

ForestModel train_impl(const FeatureMatrix& X, const std::vector<int>& y,
                       const std::vector<int>& active_factors, const ForestHyperparams& hp,
                       uint64_t seed, bool parallel) {
    if (X.rows == 0) throw std::invalid_argument("train_forest: empty training set");
    if (y.size() != X.rows) throw std::invalid_argument("train_forest: label count mismatch");
    if (hp.n_trees < 1) throw std::invalid_argument("train_forest: need at least one tree");
    bool has0 = false, has1 = false;
    for (int label : y) {
        has0 |= label == 0;
        has1 |= label == 1;
    }
    if (!has0 || !has1)
        throw std::domain_error("train_forest: training data is single-class");

    ForestModel m;
    m.params = hp;
    m.active_factors = active_factors;
    m.n_features = X.cols;
    m.trees.resize(static_cast<size_t>(hp.n_trees));
    m.tree_seeds.resize(static_cast<size_t>(hp.n_trees));
    for (int t = 0; t < hp.n_trees; ++t)
        m.tree_seeds[static_cast<size_t>(t)] =
            derive_seed(seed, "forest/tree", static_cast<uint64_t>(t));

    TreeTrainConfig tc;
    tc.max_depth = hp.max_depth;
    tc.min_samples_split = hp.min_samples_split;
    tc.feature_candidates = resolve_feature_subset(hp, X.cols);

    auto build_one = [&](int t) {
        Rng rng(m.tree_seeds[static_cast<size_t>(t)]);
        std::vector<uint32_t> boot(X.rows);
        for (size_t i = 0; i < X.rows; ++i)
            boot[i] = static_cast<uint32_t>(
                rng.uniform_int(0, static_cast<int64_t>(X.rows) - 1));
        m.trees[static_cast<size_t>(t)] = train_tree(X, y, tc, rng, &boot);
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int t = 0; t < hp.n_trees; ++t) build_one(t);
    } else {
        for (int t = 0; t < hp.n_trees; ++t) build_one(t);
    }
    return m;
}

}  // namespace

ForestModel train_forest(const FeatureMatrix& X, const std::vector<int>& y,
                         const std::vector<int>& active_factors, const ForestHyperparams& hp,
                         uint64_t seed) {
    return train_impl(X, y, active_factors, hp, seed, true);
}

ForestModel train_forest_serial(const FeatureMatrix& X, const std::vector<int>& y,
                                const std::vector<int>& active_factors,
                                const ForestHyperparams& hp, uint64_t seed) {
    return train_impl(X, y, active_factors, hp, seed, false);
}

}  // namespace atmas::ml
