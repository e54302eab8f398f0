#include "atmas/ml/tree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace atmas::ml {

double DecisionTree::predict_proba(const double* row) const {
    int i = 0;
    while (nodes[static_cast<size_t>(i)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<size_t>(i)];
        i = row[n.feature] <= n.threshold ? n.left : n.right;
    }
    const TreeNode& leaf = nodes[static_cast<size_t>(i)];
    return static_cast<double>(leaf.count1) / static_cast<double>(leaf.count0 + leaf.count1);
}

int DecisionTree::predict(const double* row) const { return predict_proba(row) > 0.5 ? 1 : 0; }

namespace {

// Tree builder over per-feature presorted position arrays. Each node works on
// the range [lo, hi) of every order[f] array; a chosen split stably partitions
// all of them, which keeps each feature sorted within both children and makes
// a full build O(features x rows x depth).
struct TreeBuilder {
    const TreeTrainConfig& cfg;
    Rng& rng;
    size_t n_features;
    size_t n_samples;
    // column-major gathered values: vals[f * n_samples + pos]
    std::vector<double> vals;
    std::vector<int> labels;                  // per sample position
    std::vector<std::vector<uint32_t>> order;  // per feature, positions sorted by value
    std::vector<uint8_t> goes_left;            // scratch, per position
    std::vector<uint32_t> scratch;             // partition buffer
    std::vector<int> feature_pool;             // candidate sampling scratch
    std::vector<TreeNode> nodes;

    static double gini(int64_t c0, int64_t c1) {
        const double n = static_cast<double>(c0 + c1);
        const double p0 = static_cast<double>(c0) / n;
        const double p1 = static_cast<double>(c1) / n;
        return 1.0 - p0 * p0 - p1 * p1;
    }

    // Picks the node's candidate feature set, ascending so evaluation order
    // is the documented tie-break order.
    void pick_candidates(std::vector<int>& out) {
        out.clear();
        const int d = static_cast<int>(n_features);
        const int k = cfg.feature_candidates <= 0 ? d : std::min(cfg.feature_candidates, d);
        if (k == d) {
            for (int f = 0; f < d; ++f) out.push_back(f);
            return;
        }
        std::iota(feature_pool.begin(), feature_pool.end(), 0);
        for (int i = 0; i < k; ++i) {
            const int j = static_cast<int>(rng.uniform_int(i, d - 1));
            std::swap(feature_pool[static_cast<size_t>(i)], feature_pool[static_cast<size_t>(j)]);
            out.push_back(feature_pool[static_cast<size_t>(i)]);
        }
        std::sort(out.begin(), out.end());
    }

    int build(size_t lo, size_t hi, int depth, int64_t c0, int64_t c1) {
        const int node_id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes.back().count0 = c0;
        nodes.back().count1 = c1;

        const int64_t n = static_cast<int64_t>(hi - lo);
        if (c0 == 0 || c1 == 0 || depth >= cfg.max_depth || n < cfg.min_samples_split)
            return node_id;

        std::vector<int> candidates;
        pick_candidates(candidates);

        const double parent = gini(c0, c1);
        double best_gain = 1e-12;
        int best_feature = -1;
        double best_threshold = 0.0;

        for (int f : candidates) {
            const double* v = vals.data() + static_cast<size_t>(f) * n_samples;
            const uint32_t* ord = order[static_cast<size_t>(f)].data();
            int64_t l0 = 0, l1 = 0;
            for (size_t i = lo; i + 1 < hi; ++i) {
                const uint32_t pos = ord[i];
                if (labels[pos] == 0) ++l0; else ++l1;
                const double a = v[pos];
                const double b = v[ord[i + 1]];
                if (a == b) continue;
                const int64_t nl = l0 + l1, nr = n - nl;
                const double score = (static_cast<double>(nl) * gini(l0, l1) +
                                      static_cast<double>(nr) * gini(c0 - l0, c1 - l1)) /
                                     static_cast<double>(n);
                const double gain = parent - score;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = f;
                    // Midpoint can round up to b for adjacent doubles, which
                    // would leak value-b rows into the left child; fall back
                    // to a so the realized partition matches the scored one.
                    double thr = a + (b - a) / 2.0;
                    if (!(thr < b)) thr = a;
                    best_threshold = thr;
                }
            }
        }
        if (best_feature < 0) return node_id;

        // Mark sides once, then stably partition every feature's range.
        const double* bv = vals.data() + static_cast<size_t>(best_feature) * n_samples;
        int64_t nl = 0, lc0 = 0, lc1 = 0;
        for (size_t i = lo; i < hi; ++i) {
            const uint32_t pos = order[static_cast<size_t>(best_feature)][i];
            const bool left = bv[pos] <= best_threshold;
            goes_left[pos] = left;
            if (left) {
                ++nl;
                if (labels[pos] == 0) ++lc0; else ++lc1;
            }
        }
        for (size_t f = 0; f < n_features; ++f) {
            uint32_t* ord = order[f].data();
            size_t nexta = 0, nextb = 0;
            for (size_t i = lo; i < hi; ++i) {
                const uint32_t pos = ord[i];
                if (goes_left[pos]) ord[lo + nexta++] = pos;
                else scratch[nextb++] = pos;
            }
            std::copy(scratch.begin(), scratch.begin() + static_cast<long>(nextb),
                      ord + lo + nexta);
        }

        const size_t mid = lo + static_cast<size_t>(nl);
        const int left_id = build(lo, mid, depth + 1, lc0, lc1);
        const int right_id = build(mid, hi, depth + 1, c0 - lc0, c1 - lc1);
        nodes[static_cast<size_t>(node_id)].feature = best_feature;
        nodes[static_cast<size_t>(node_id)].threshold = best_threshold;
        nodes[static_cast<size_t>(node_id)].left = left_id;
        nodes[static_cast<size_t>(node_id)].right = right_id;
        return node_id;
    }
};

}  // namespace

DecisionTree train_tree(const FeatureMatrix& X, const std::vector<int>& y,
                        const TreeTrainConfig& cfg, Rng& rng,
                        const std::vector<uint32_t>* sample_indices) {
    if (X.rows == 0 || X.cols == 0) throw std::invalid_argument("train_tree: empty matrix");
    if (y.size() != X.rows) throw std::invalid_argument("train_tree: label count mismatch");
    for (int label : y)
        if (label != 0 && label != 1)
            throw std::invalid_argument("train_tree: labels must be 0 or 1");

    std::vector<uint32_t> ids;
    if (sample_indices) {
        ids = *sample_indices;
        for (uint32_t id : ids)
            if (id >= X.rows) throw std::invalid_argument("train_tree: sample index out of range");
    } else {
        ids.resize(X.rows);
        std::iota(ids.begin(), ids.end(), 0u);
    }
    if (ids.empty()) throw std::invalid_argument("train_tree: empty sample");

    TreeBuilder b{cfg, rng, X.cols, ids.size(), {}, {}, {}, {}, {}, {}, {}};
    b.vals.resize(X.cols * ids.size());
    b.labels.resize(ids.size());
    int64_t c0 = 0, c1 = 0;
    for (size_t pos = 0; pos < ids.size(); ++pos) {
        b.labels[pos] = y[ids[pos]];
        if (b.labels[pos] == 0) ++c0; else ++c1;
        const double* row = X.row(ids[pos]);
        for (size_t f = 0; f < X.cols; ++f) b.vals[f * ids.size() + pos] = row[f];
    }
    b.order.resize(X.cols);
    for (size_t f = 0; f < X.cols; ++f) {
        auto& ord = b.order[f];
        ord.resize(ids.size());
        std::iota(ord.begin(), ord.end(), 0u);
        const double* v = b.vals.data() + f * ids.size();
        std::stable_sort(ord.begin(), ord.end(),
                         [v](uint32_t a, uint32_t bb) { return v[a] < v[bb]; });
    }
    b.goes_left.resize(ids.size());
    b.scratch.resize(ids.size());
    b.feature_pool.resize(X.cols);
    b.nodes.reserve(64);
    b.build(0, ids.size(), 0, c0, c1);

    DecisionTree tree;
    tree.nodes = std::move(b.nodes);
    tree.n_features = X.cols;
    return tree;
}

}  // namespace atmas::ml
