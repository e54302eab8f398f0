#pragma once

#include <string>

#include "atmas/ml/forest.hpp"

namespace atmas::ml {

enum class Algorithm {
    RandomForest,
    DecisionTree,
    KNearestNeighbors,
    LogisticRegression,
};

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct KnnModel {
    int k = 5;
    FeatureMatrix train;
    std::vector<int> labels;
    size_t n_features = 0;

    // Fraction of spoof labels among the k nearest training rows; distance
    // ties break to the lower row index.
    double predict_score(const double* row) const;
};

struct LogRegModel {
    std::vector<double> weights;
    double bias = 0.0;
    size_t n_features = 0;

    double predict_score(const double* row) const;  // sigmoid probability
};

KnnModel train_knn(const FeatureMatrix& X, const std::vector<int>& y, int k = 5);
LogRegModel train_logreg(const FeatureMatrix& X, const std::vector<int>& y, int epochs = 500,
                         double learning_rate = 0.1);
DecisionTree train_decision_tree(const FeatureMatrix& X, const std::vector<int>& y,
                                 int max_depth = 12);

// One trained classifier of any supported kind, for experiment plumbing.
struct AnyModel {
    Algorithm kind = Algorithm::RandomForest;
    ForestModel forest;
    DecisionTree tree;
    KnnModel knn;
    LogRegModel logreg;

    double predict_score(const double* row) const;
};

AnyModel train_model(Algorithm kind, const FeatureMatrix& X, const std::vector<int>& y,
                     const std::vector<int>& active_factors, const ForestHyperparams& hp,
                     uint64_t seed);

}  // namespace atmas::ml
