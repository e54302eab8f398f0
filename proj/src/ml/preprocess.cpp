#include "atmas/ml/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace atmas::ml {

std::vector<int> all_factors() { return {1, 2, 3, 4, 5, 6, 7, 8, 9}; }

size_t factor_width(int factor) {
    switch (factor) {
        case 2: return 3;
        case 7: return 2;
        default:
            if (factor < 1 || factor > 9) throw std::invalid_argument("factor out of range");
            return 1;
    }
}

size_t encoded_width(const std::vector<int>& active_factors) {
    size_t w = 0;
    for (int f : active_factors) w += factor_width(f);
    return w;
}

void encode_factors(const scenario::FactorVector& f, const std::vector<int>& active_factors,
                    double* out) {
    size_t i = 0;
    for (int factor : active_factors) {
        switch (factor) {
            case 1: out[i++] = f.f1_traffic_volume; break;
            case 2:
                for (int s = 0; s < scenario::kNumServiceTypes; ++s)
                    out[i++] = f.f2_service_type == s ? 1.0 : 0.0;
                break;
            case 3: out[i++] = f.f3_uplink_rate; break;
            case 4: out[i++] = f.f4_sinuosity; break;
            case 5: out[i++] = static_cast<double>(f.f5_bs_index); break;
            case 6: out[i++] = f.f6_bs_distance_km; break;
            case 7:
                out[i++] = f.f7_position.x;
                out[i++] = f.f7_position.y;
                break;
            case 8: out[i++] = f.f8_heading_azimuth_deg; break;
            case 9: out[i++] = f.f9_elevation_deg; break;
            default: throw std::invalid_argument("factor out of range");
        }
    }
}

std::vector<uint8_t> onehot_flags(const std::vector<int>& active_factors) {
    std::vector<uint8_t> flags;
    for (int f : active_factors)
        for (size_t k = 0; k < factor_width(f); ++k) flags.push_back(f == 2 ? 1 : 0);
    return flags;
}

FeatureMatrix encode_windows(const std::vector<scenario::LabeledWindow>& windows,
                             const std::vector<int>& active_factors,
                             std::vector<int>* labels_out) {
    FeatureMatrix m(windows.size(), encoded_width(active_factors));
    if (labels_out) labels_out->resize(windows.size());
    for (size_t r = 0; r < windows.size(); ++r) {
        encode_factors(windows[r].factors, active_factors, m.row(r));
        if (labels_out) (*labels_out)[r] = static_cast<int>(windows[r].label);
    }
    return m;
}

namespace {

// Nearest-rank percentile on an ascending-sorted column.
double percentile(const std::vector<double>& sorted, double p) {
    const auto n = static_cast<double>(sorted.size());
    auto idx = static_cast<size_t>(std::max(0.0, std::ceil(p / 100.0 * n) - 1.0));
    return sorted[std::min(idx, sorted.size() - 1)];
}

double zscore(const ColumnStats& c, double v) {
    const double clipped = std::clamp(v, c.clip_lo, c.clip_hi);
    return c.stddev > 0 ? (clipped - c.mean) / c.stddev : 0.0;
}

}  // namespace

PreprocessStats fit_preprocess(const FeatureMatrix& train,
                               const std::vector<uint8_t>& onehot_cols) {
    if (train.rows < 2) throw std::invalid_argument("fit_preprocess: need >= 2 training rows");
    if (onehot_cols.size() != train.cols)
        throw std::invalid_argument("fit_preprocess: one-hot flags must match columns");

    PreprocessStats stats;
    stats.columns.resize(train.cols);
    std::vector<double> col(train.rows);
    for (size_t c = 0; c < train.cols; ++c) {
        ColumnStats& s = stats.columns[c];
        s.onehot = onehot_cols[c] != 0;
        if (s.onehot) continue;
        for (size_t r = 0; r < train.rows; ++r) col[r] = train.at(r, c);

        double sum = 0;
        for (double v : col) sum += v;
        s.mean = sum / static_cast<double>(col.size());
        double ss = 0;
        for (double v : col) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(col.size()));

        std::vector<double> sorted = col;
        std::sort(sorted.begin(), sorted.end());
        s.clip_lo = percentile(sorted, 5.0);
        s.clip_hi = percentile(sorted, 95.0);

        s.zmin = zscore(s, sorted.front());
        s.zmax = zscore(s, sorted.back());
    }
    return stats;
}

PreprocessStats fit_preprocess(const std::vector<scenario::FactorVector>& train,
                               const std::vector<int>& active_factors) {
    FeatureMatrix m(train.size(), encoded_width(active_factors));
    for (size_t r = 0; r < train.size(); ++r)
        encode_factors(train[r], active_factors, m.row(r));
    PreprocessStats stats = fit_preprocess(m, onehot_flags(active_factors));
    stats.active_factors = active_factors;
    return stats;
}

void apply_preprocess_row(const PreprocessStats& stats, const double* in, double* out) {
    for (size_t c = 0; c < stats.columns.size(); ++c) {
        const ColumnStats& s = stats.columns[c];
        if (s.onehot) {
            out[c] = in[c];
        } else if (s.zmax - s.zmin <= 0) {
            out[c] = 0.5;  // constant training column
        } else {
            const double z = std::clamp(zscore(s, in[c]), s.zmin, s.zmax);
            out[c] = (z - s.zmin) / (s.zmax - s.zmin);
        }
    }
}

FeatureMatrix apply_preprocess(const PreprocessStats& stats, const FeatureMatrix& raw) {
    if (raw.cols != stats.columns.size())
        throw std::invalid_argument("apply_preprocess: column count mismatch");
    FeatureMatrix out(raw.rows, raw.cols);
    for (size_t r = 0; r < raw.rows; ++r) apply_preprocess_row(stats, raw.row(r), out.row(r));
    return out;
}

std::vector<double> apply_preprocess(const PreprocessStats& stats,
                                     const scenario::FactorVector& f) {
    if (stats.active_factors.empty())
        throw std::invalid_argument("apply_preprocess: stats carry no factor list");
    std::vector<double> raw(stats.columns.size()), out(stats.columns.size());
    encode_factors(f, stats.active_factors, raw.data());
    apply_preprocess_row(stats, raw.data(), out.data());
    return out;
}

}  // namespace atmas::ml
