#pragma once

#include <cstdint>
#include <vector>

#include "atmas/ml/preprocess.hpp"
#include "atmas/rng.hpp"

namespace atmas::ml {

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int64_t count0 = 0;  // class counts of the training rows reaching the node
    int64_t count1 = 0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // preorder, node 0 is the root
    size_t n_features = 0;

    // Fraction of class-1 training rows in the reached leaf.
    double predict_proba(const double* row) const;
    int predict(const double* row) const;  // majority vote, ties go to class 0
};

struct TreeTrainConfig {
    int max_depth = 12;
    int min_samples_split = 2;
    // Number of random feature candidates per node; 0 means every feature
    // (the plain decision-tree baseline).
    int feature_candidates = 0;
};

// Grows a binary tree with axis-aligned splits minimizing weighted Gini
// impurity. Candidate features are evaluated in ascending index order and a
// split must strictly improve, so ties break to the lowest feature index and
// then the lowest threshold. sample_indices (with repetition allowed) selects
// the training subset; nullptr trains on every row.
DecisionTree train_tree(const FeatureMatrix& X, const std::vector<int>& y,
                        const TreeTrainConfig& cfg, Rng& rng,
                        const std::vector<uint32_t>* sample_indices = nullptr);

}  // namespace atmas::ml
