#pragma once

#include <cstdint>
#include <vector>

#include "atmas/scenario/dataset.hpp"

namespace atmas::ml {

// Row-major dense feature matrix.
struct FeatureMatrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> data;

    FeatureMatrix() = default;
    FeatureMatrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& at(size_t r, size_t c) { return data[r * cols + c]; }
    double at(size_t r, size_t c) const { return data[r * cols + c]; }
    double* row(size_t r) { return data.data() + r * cols; }
    const double* row(size_t r) const { return data.data() + r * cols; }
};

// Factor encoding: factors contribute columns in ascending factor order.
// Factor 2 (service type) expands to a 3-column one-hot block, factor 7
// (position) to two columns, everything else to one.
std::vector<int> all_factors();
size_t factor_width(int factor);
size_t encoded_width(const std::vector<int>& active_factors);
void encode_factors(const scenario::FactorVector& f, const std::vector<int>& active_factors,
                    double* out);
std::vector<uint8_t> onehot_flags(const std::vector<int>& active_factors);

// Encodes windows into a matrix; labels_out receives 0/1 labels when given.
FeatureMatrix encode_windows(const std::vector<scenario::LabeledWindow>& windows,
                             const std::vector<int>& active_factors,
                             std::vector<int>* labels_out = nullptr);

struct ColumnStats {
    bool onehot = false;  // one-hot columns bypass the numeric pipeline
    double clip_lo = 0.0;
    double clip_hi = 0.0;
    double mean = 0.0;    // of the raw training column
    double stddev = 0.0;  // population stddev of the raw training column
    double zmin = 0.0;    // z-score range of the clipped training column
    double zmax = 0.0;
};

struct PreprocessStats {
    std::vector<int> active_factors;
    std::vector<ColumnStats> columns;
};

// Fit on training data only. Clip bounds are the nearest-rank 5th and 95th
// percentiles; mean/stddev come from the raw column; the z range of the
// clipped column defines the final min-max scale. stddev = 0 makes the
// z-score 0, and a collapsed z range maps the column to the constant 0.5.
PreprocessStats fit_preprocess(const FeatureMatrix& train,
                               const std::vector<uint8_t>& onehot_cols);
PreprocessStats fit_preprocess(const std::vector<scenario::FactorVector>& train,
                               const std::vector<int>& active_factors);

// clip -> z-score -> scale to [0,1], per column; one-hot columns pass through.
void apply_preprocess_row(const PreprocessStats& stats, const double* in, double* out);
FeatureMatrix apply_preprocess(const PreprocessStats& stats, const FeatureMatrix& raw);
std::vector<double> apply_preprocess(const PreprocessStats& stats,
                                     const scenario::FactorVector& f);

}  // namespace atmas::ml
