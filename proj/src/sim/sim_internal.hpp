#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atmas/sim/sim.hpp"

namespace atmas::sim::detail {

struct Hop {
    const char* link;  // "mu-bs" | "bs-sat" | "sat-ncc"
    int64_t base_ms;
};

// Hop sequence between two roles; every pair routes through the hierarchy
// MU - BS - Satellite - NCC.
std::vector<Hop> route(protocol::Role from, protocol::Role to, const ChannelModel& ch);

bool script_matches(const AdversaryScript& script, const protocol::AuthMessage& msg);

// One-bit in-flight mutation. msg is empty when the flipped wire no longer
// parses; tag names the field that was hit.
struct TamperResult {
    std::optional<protocol::AuthMessage> msg;
    std::string tag;
};
TamperResult tamper_message(const protocol::AuthMessage& msg, const std::string& region,
                            Rng& rng);

}  // namespace atmas::sim::detail
