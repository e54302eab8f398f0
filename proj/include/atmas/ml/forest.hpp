#pragma once

#include <cstdint>
#include <vector>

#include "atmas/ml/tree.hpp"

namespace atmas::ml {

struct ForestHyperparams {
    int n_trees = 100;
    int max_depth = 12;
    // Random feature candidates per node; -1 means floor(sqrt(columns)),
    // clamped to at least 1.
    int feature_subset = -1;
    int min_samples_split = 2;

    void validate() const;
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    ForestHyperparams params;
    std::vector<int> active_factors;
    std::vector<uint64_t> tree_seeds;
    size_t n_features = 0;

    // Fraction of trees voting class 1; invariant to tree order.
    double predict_score(const double* row) const;
    double predict_score(const std::vector<double>& row) const;  // checks dimension
};

int resolve_feature_subset(const ForestHyperparams& hp, size_t n_features);

// Bagged trees; tree t draws its bootstrap and node features from a stream
// derived from (seed, t), so results do not depend on thread count. The
// default entry point parallelizes across trees; the serial variant is the
// reference implementation and must produce an identical model.
// Throws std::domain_error when training labels are single-class.
ForestModel train_forest(const FeatureMatrix& X, const std::vector<int>& y,
                         const std::vector<int>& active_factors, const ForestHyperparams& hp,
                         uint64_t seed);
ForestModel train_forest_serial(const FeatureMatrix& X, const std::vector<int>& y,
                                const std::vector<int>& active_factors,
                                const ForestHyperparams& hp, uint64_t seed);

}  // namespace atmas::ml
