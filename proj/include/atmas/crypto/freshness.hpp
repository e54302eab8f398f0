#pragma once

#include <cstdint>

namespace atmas::crypto {

/// Simulation time in milliseconds.
struct Timestamp {
    int64_t ms = 0;

    auto operator<=>(const Timestamp&) const = default;
};

enum class Freshness {
    Fresh,
    Stale,
    ClockRegression,  // now precedes sent; treated as stale and logged as an anomaly
};

// Fresh iff 0 <= now - sent <= threshold_ms (inclusive bound).
Freshness classify_freshness(Timestamp sent, Timestamp now, int64_t threshold_ms);

inline bool check_freshness(Timestamp sent, Timestamp now, int64_t threshold_ms) {
    return classify_freshness(sent, now, threshold_ms) == Freshness::Fresh;
}

}  // namespace atmas::crypto
