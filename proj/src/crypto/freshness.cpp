#include "atmas/crypto/freshness.hpp"

#include <stdexcept>

namespace atmas::crypto {

Freshness classify_freshness(Timestamp sent, Timestamp now, int64_t threshold_ms) {
    if (threshold_ms < 0) throw std::invalid_argument("freshness: negative threshold");
    if (now.ms < sent.ms) return Freshness::ClockRegression;
    // sent comes off the wire; the age can exceed int64_t, so widen via uint64_t
    // (exact here because now >= sent).
    const uint64_t age = static_cast<uint64_t>(now.ms) - static_cast<uint64_t>(sent.ms);
    return age <= static_cast<uint64_t>(threshold_ms) ? Freshness::Fresh : Freshness::Stale;
}

}  // namespace atmas::crypto
