#include "atmas/ml/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace atmas::ml {

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::RandomForest: return "forest";
        case Algorithm::DecisionTree: return "tree";
        case Algorithm::KNearestNeighbors: return "knn";
        case Algorithm::LogisticRegression: return "logreg";
    }
    throw std::invalid_argument("unknown algorithm");
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "forest") return Algorithm::RandomForest;
    if (name == "tree") return Algorithm::DecisionTree;
    if (name == "knn") return Algorithm::KNearestNeighbors;
    if (name == "logreg") return Algorithm::LogisticRegression;
    throw std::invalid_argument("unknown algorithm name: " + name);
}

double KnnModel::predict_score(const double* row) const {
    const size_t n = train.rows;
    const size_t kk = std::min(static_cast<size_t>(k), n);
    // Insertion into a fixed-size best list; (distance, index) ordering makes
    // ties deterministic.
    std::vector<std::pair<double, size_t>> best;
    best.reserve(kk + 1);
    for (size_t i = 0; i < n; ++i) {
        double d2 = 0;
        const double* t = train.row(i);
        for (size_t c = 0; c < train.cols; ++c) {
            const double d = row[c] - t[c];
            d2 += d * d;
        }
        const std::pair<double, size_t> cand{d2, i};
        if (best.size() < kk || cand < best.back()) {
            best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
            if (best.size() > kk) best.pop_back();
        }
    }
    int64_t spoof = 0;
    for (const auto& [d2, i] : best) spoof += labels[i];
    return static_cast<double>(spoof) / static_cast<double>(kk);
}

double LogRegModel::predict_score(const double* row) const {
    double z = bias;
    for (size_t c = 0; c < weights.size(); ++c) z += weights[c] * row[c];
    return 1.0 / (1.0 + std::exp(-z));
}

KnnModel train_knn(const FeatureMatrix& X, const std::vector<int>& y, int k) {
    if (X.rows == 0 || y.size() != X.rows) throw std::invalid_argument("train_knn: bad inputs");
    if (k < 1) throw std::invalid_argument("train_knn: k must be positive");
    KnnModel m;
    m.k = k;
    m.train = X;
    m.labels = y;
    m.n_features = X.cols;
    return m;
}

LogRegModel train_logreg(const FeatureMatrix& X, const std::vector<int>& y, int epochs,
                         double learning_rate) {
    if (X.rows == 0 || y.size() != X.rows) throw std::invalid_argument("train_logreg: bad inputs");
    LogRegModel m;
    m.n_features = X.cols;
    m.weights.assign(X.cols, 0.0);
    std::vector<double> grad(X.cols);
    const double inv_n = 1.0 / static_cast<double>(X.rows);
    for (int e = 0; e < epochs; ++e) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0.0;
        for (size_t r = 0; r < X.rows; ++r) {
            const double err = m.predict_score(X.row(r)) - static_cast<double>(y[r]);
            const double* row = X.row(r);
            for (size_t c = 0; c < X.cols; ++c) grad[c] += err * row[c];
            grad_b += err;
        }
        for (size_t c = 0; c < X.cols; ++c) m.weights[c] -= learning_rate * grad[c] * inv_n;
        m.bias -= learning_rate * grad_b * inv_n;
    }
    return m;
}

DecisionTree train_decision_tree(const FeatureMatrix& X, const std::vector<int>& y,
                                 int max_depth) {
    TreeTrainConfig tc;
    tc.max_depth = max_depth;
    tc.feature_candidates = 0;  // every feature: no randomness involved
    Rng rng(0);
    return train_tree(X, y, tc, rng);
}

double AnyModel::predict_score(const double* row) const {
    switch (kind) {
        case Algorithm::RandomForest: return forest.predict_score(row);
        case Algorithm::DecisionTree: return tree.predict_proba(row);
        case Algorithm::KNearestNeighbors: return knn.predict_score(row);
        case Algorithm::LogisticRegression: return logreg.predict_score(row);
    }
    throw std::logic_error("unreachable");
}

AnyModel train_model(Algorithm kind, const FeatureMatrix& X, const std::vector<int>& y,
                     const std::vector<int>& active_factors, const ForestHyperparams& hp,
                     uint64_t seed) {
    AnyModel m;
    m.kind = kind;
    switch (kind) {
        case Algorithm::RandomForest:
            m.forest = train_forest(X, y, active_factors, hp, seed);
            break;
        case Algorithm::DecisionTree:
            m.tree = train_decision_tree(X, y, hp.max_depth);
            break;
        case Algorithm::KNearestNeighbors:
            m.knn = train_knn(X, y);
            break;
        case Algorithm::LogisticRegression:
            m.logreg = train_logreg(X, y);
            break;
    }
    return m;
}

}  // namespace atmas::ml
