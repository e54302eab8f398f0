#include <stdexcept>

#include "sim_internal.hpp"

namespace atmas::sim {

using protocol::AuthMessage;
using protocol::MsgType;
using protocol::Reason;
using protocol::Role;

void AdversaryScript::validate() const {
    if (target_occurrence < 0)
        throw std::invalid_argument("AdversaryScript: negative target_occurrence");
    if (action_delay_ms < 0) throw std::invalid_argument("AdversaryScript: negative action delay");
    switch (kind) {
        case AdversaryKind::Eavesdrop:
        case AdversaryKind::Replay:
            break;
        case AdversaryKind::Tamper:
            if (!param.empty() && param != "payload" && param != "timestamp" && param != "random")
                throw std::invalid_argument("AdversaryScript: bad tamper region '" + param + "'");
            break;
        case AdversaryKind::Impersonate:
            if (param != "duplicate-uid" && param != "no-credentials" && param != "forged-key")
                throw std::invalid_argument("AdversaryScript: bad impersonation mode '" + param +
                                            "'");
            break;
    }
}

namespace detail {

bool script_matches(const AdversaryScript& script, const AuthMessage& msg) {
    switch (script.kind) {
        case AdversaryKind::Eavesdrop:
            return false;  // observes everything, acts on nothing
        case AdversaryKind::Replay:
        case AdversaryKind::Tamper:
            return msg.msg_type == script.target_type;
        case AdversaryKind::Impersonate:
            // Each mode fires off the message that reveals its prerequisite
            // knowledge (a uid, or an open continuous stream).
            if (script.param == "duplicate-uid")
                return msg.msg_type == MsgType::RegConfirm && msg.sender.role == Role::MU;
            if (script.param == "no-credentials")
                return msg.msg_type == MsgType::AuthRequest && msg.sender.role == Role::MU;
            return msg.msg_type == MsgType::ContAuthRequest && msg.sender.role == Role::MU;
    }
    return false;
}

TamperResult tamper_message(const AuthMessage& msg, const std::string& region, Rng& rng) {
    AuthMessage out = msg;
    std::string effective = region.empty() ? "payload" : region;
    if (effective == "payload" && out.payload.kind == protocol::Payload::Kind::None)
        effective = "timestamp";

    if (effective == "payload") {
        if (out.payload.kind == protocol::Payload::Kind::Raw) {
            size_t bit = static_cast<size_t>(
                rng.uniform_int(0, static_cast<int64_t>(out.payload.raw.size()) * 8 - 1));
            out.payload.raw[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        } else {
            auto& chunks = out.payload.blob.chunks;
            size_t i = static_cast<size_t>(
                rng.uniform_int(0, static_cast<int64_t>(chunks.size()) - 1));
            chunks[i].c2 ^= 1;
        }
        return {out, "payload"};
    }
    if (effective == "timestamp") {
        int bit = static_cast<int>(rng.uniform_int(0, 40));
        out.timestamp.ms ^= (int64_t{1} << bit);
        return {out, "timestamp"};
    }

    // Arbitrary wire bit; the mutated message may no longer parse at all.
    Bytes wire = protocol::serialize_message(msg);
    size_t bit =
        static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(wire.size()) * 8 - 1));
    wire[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    try {
        return {protocol::parse_message(wire), "wire"};
    } catch (const std::exception&) {
        return {std::nullopt, "wire"};
    }
}

}  // namespace detail

namespace {

struct OracleWorld {
    protocol::ProtocolConfig cfg;
    protocol::LocationContext loc;
    protocol::NccState ncc;
    protocol::SatelliteState sat;
    protocol::MuState mu;

    explicit OracleWorld(uint64_t seed)
        : loc{scenario::Geometry{.bs_positions = {{0.0, 0.0}}}, {0.0, 0.0}},
          ncc(protocol::make_ncc(cfg, seed)),
          sat(protocol::make_satellite(cfg, loc, seed)),
          mu(protocol::make_mu(cfg, "mu-0", seed)) {
        protocol::FixedDelayChannel ch{10};
        crypto::Timestamp t{0};
        auto r1 = protocol::register_infrastructure(sat, ncc, ch, t);
        auto r2 = protocol::register_mu(mu, ncc, &sat, ch, crypto::Timestamp{500});
        if (r1.outcome != Reason::Ok || r2.outcome != Reason::Ok)
            throw std::logic_error("oracle world setup failed");
    }
};

Reason deliver_forged(OracleWorld& w, const protocol::AuthRequestMaterial& material,
                      uint64_t seed) {
    Rng rng(derive_seed(seed, "sim/forge", 0));
    crypto::Timestamp sent{2000};
    AuthMessage msg =
        protocol::build_auth_request(w.mu.id, w.sat.id, material, sent, rng.next_u64());
    return protocol::satellite_handle(w.sat, msg, crypto::Timestamp{sent.ms + 10}).verdict;
}

}  // namespace

Reason outcome_with_guessed_password(uint64_t seed) {
    OracleWorld w(seed);
    Rng rng(derive_seed(seed, "sim/guess", 0));
    protocol::AuthRequestMaterial material{
        .ident = w.mu.c_id,
        .password = crypto::hash_credential({to_bytes(w.mu.id.unique_id), rng.bytes(16)}),
        .biometric = w.mu.c_bio,
        .position = w.mu.position,
        .serving_bs = w.mu.serving_bs,
    };
    return deliver_forged(w, material, seed);
}

Reason outcome_with_stolen_helper(uint64_t seed) {
    OracleWorld w(seed);
    // Helper strings are public; reproduction with a non-matching reading
    // lands on a wrong key. The complement reading makes that certain.
    crypto::BiometricTemplate reading = w.mu.biometric;
    for (auto& b : reading.bits) b ^= 1;
    Bytes key = crypto::fuzzy_rep(reading, w.mu.helper, w.cfg.fuzzy_repetition);
    protocol::AuthRequestMaterial material{
        .ident = w.mu.c_id,
        .password = w.mu.c_pw,
        .biometric = crypto::hash_credential({to_bytes(w.mu.id.unique_id), key}),
        .position = w.mu.position,
        .serving_bs = w.mu.serving_bs,
    };
    return deliver_forged(w, material, seed);
}

}  // namespace atmas::sim
