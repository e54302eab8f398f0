#pragma once

#include <cstdint>
#include <stdexcept>

namespace atmas::ml {

// Positive class is Spoof (label 1).
struct ConfusionMatrix {
    int64_t tp = 0;
    int64_t fp = 0;
    int64_t tn = 0;
    int64_t fn = 0;

    int64_t total() const { return tp + fp + tn + fn; }

    void add(int actual, int predicted) {
        if (actual == 1)
            predicted == 1 ? ++tp : ++fn;
        else
            predicted == 1 ? ++fp : ++tn;
    }
};

inline double compute_accuracy(const ConfusionMatrix& cm) {
    const int64_t total = cm.total();
    if (total <= 0) throw std::domain_error("compute_accuracy: empty confusion matrix");
    return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(total);
}

}  // namespace atmas::ml
