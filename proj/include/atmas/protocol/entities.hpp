#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atmas/crypto/fuzzy.hpp"
#include "atmas/ml/registry.hpp"
#include "atmas/protocol/message.hpp"
#include "atmas/scenario/dataset.hpp"
#include "atmas/scenario/geometry.hpp"
#include "atmas/security.hpp"

namespace atmas::protocol {

struct ProtocolConfig {
    crypto::GroupParams group = crypto::GroupParams::sim64();
    int64_t threshold_ms = 50;
    int fuzzy_repetition = 5;
    int bio_bits = 60;  // biometric template length; 12 key bits at repetition 5
    size_t nonce_cache_capacity = 4096;
};

struct RegistrationRecord {
    EntityId entity;
    crypto::BigInt public_key;
    crypto::Credential credential;  // long-term shared credential
    crypto::Timestamp enrolled_at;
    SecurityLevel security_level = SecurityLevel::Medium;
};

// New temp_id drawn from rng; unique_id and everything else unchanged.
RegistrationRecord rotate_temp_id(const RegistrationRecord& record, Rng& rng);
std::string random_temp_id(Rng& rng);

// Satellite-side MU verification material, mirrored from the NCC at
// registration time. One credential per one-shot factor so each check fails
// independently.
struct MuFactorCredentials {
    crypto::Credential ident;      // keyed by the NCC-issued registration secret
    crypto::Credential password;   // hash(uid, password)
    crypto::Credential biometric;  // hash(uid, fuzzy key)
    crypto::Credential combined;   // hash(uid, password cred, biometric cred)
};

struct SessionState {
    enum class Phase { Idle, AwaitChallenge, AwaitConfirm, Authenticated, Rejected };
    EntityId peer;
    Phase state = Phase::Idle;
    uint64_t session_nonce = 0;
    crypto::Timestamp established_at;
};

// Satellite beam plus terrestrial cells for the one-shot location check.
struct LocationContext {
    scenario::Geometry geometry;
    scenario::Vec2 subsatellite_point{};
};

bool location_ok(const LocationContext& ctx, scenario::Vec2 position, int serving_bs);

struct NccState {
    ProtocolConfig cfg;
    EntityId id;
    crypto::KeyPair keys;
    Rng rng{0};

    std::map<std::string, RegistrationRecord> records;
    std::map<std::string, MuFactorCredentials> mu_credentials;
    std::map<std::string, SecurityLevel> level_policy;  // per-MU override, else Medium
    std::map<std::string, NonceCache> nonce_seen;
    std::map<std::string, SessionState> sessions;  // continuous-auth streams by MU uid

    struct PendingInfra {
        EntityId entity;
        crypto::BigInt public_key;
        Bytes secret;
        Bytes link_key;
    };
    struct PendingMu {
        EntityId entity;
        crypto::BigInt public_key;
        crypto::Credential c_pw;
        crypto::Credential c_bio;
        crypto::Credential c_full;
        Bytes secret;
    };
    std::map<std::string, PendingInfra> pending_infra;
    std::map<std::string, PendingMu> pending_mu;

    // Phase II scoring hook; null (or an unknown MU) means every report is
    // granted with score 0.
    const ml::ModelRegistry* registry = nullptr;
};

struct SatelliteState {
    ProtocolConfig cfg;
    EntityId id;
    crypto::KeyPair keys;
    Rng rng{0};

    bool registered = false;
    Bytes secret;    // NCC-issued S
    Bytes link_key;  // hash(uid, S); shared with the NCC

    LocationContext location;
    std::map<std::string, RegistrationRecord> mu_records;  // mirrored from NCC
    std::map<std::string, MuFactorCredentials> mu_credentials;
    std::map<std::string, NonceCache> nonce_seen;
    std::map<std::string, SessionState> sessions;  // one-shot sessions by MU uid
};

struct BsState {
    ProtocolConfig cfg;
    EntityId id;
    crypto::KeyPair keys;
    Rng rng{0};

    bool registered = false;
    Bytes secret;
    Bytes link_key;
    int bs_index = 0;
    scenario::Vec2 position{};
    NonceCache nonce_seen;  // single cache; the BS only talks to the NCC
};

struct MuState {
    ProtocolConfig cfg;
    EntityId id;
    crypto::KeyPair keys;
    Rng rng{0};

    Bytes password;
    crypto::BiometricTemplate biometric;  // enrolled template
    std::vector<uint8_t> helper;
    Bytes fuzzy_key;

    bool registered = false;
    Bytes reg_secret;  // NCC-issued S_mu
    crypto::Credential c_pw, c_bio, c_full, c_id;

    scenario::Vec2 position{};
    int serving_bs = 0;
    crypto::BigInt ncc_public;
    crypto::BigInt satellite_public;

    SessionState session;           // with the satellite (one-shot outcome)
    SessionState continuous;        // with the NCC (factor-report stream)
    std::map<std::string, NonceCache> nonce_seen;
};

NccState make_ncc(const ProtocolConfig& cfg, uint64_t seed);
SatelliteState make_satellite(const ProtocolConfig& cfg, const LocationContext& location,
                              uint64_t seed, const std::string& uid = "sat-1");
BsState make_bs(const ProtocolConfig& cfg, int bs_index, scenario::Vec2 position, uint64_t seed);
// Draws a random 128-bit password and a random biometric template.
MuState make_mu(const ProtocolConfig& cfg, const std::string& uid, uint64_t seed);

// --- message builders -------------------------------------------------------

AuthMessage infra_reg_request(const EntityId& self, const crypto::KeyPair& keys,
                              const EntityId& ncc_id, crypto::Timestamp now, Rng& rng);
AuthMessage mu_reg_request(MuState& mu, const EntityId& ncc_id, crypto::Timestamp now);

// One-shot request claims; honest MUs derive them from their own secrets,
// adversarial harnesses may substitute any mixture.
struct AuthRequestMaterial {
    crypto::Credential ident;
    crypto::Credential password;
    crypto::Credential biometric;
    scenario::Vec2 position{};
    int serving_bs = 0;
};

AuthMessage build_auth_request(const EntityId& sender, const EntityId& receiver,
                               const AuthRequestMaterial& material, crypto::Timestamp now,
                               uint64_t nonce);
// Uses a fresh biometric reading; noise beyond the extractor capacity shows
// up at the satellite as BadBiometric.
AuthMessage mu_auth_request(MuState& mu, const EntityId& satellite_id,
                            const crypto::BiometricTemplate& fresh_reading,
                            crypto::Timestamp now);

AuthMessage mu_cont_auth_request(MuState& mu, const EntityId& ncc_id, crypto::Timestamp now);
AuthMessage mu_factor_report(MuState& mu, const EntityId& ncc_id,
                             const scenario::FactorVector& factors, int window_index,
                             crypto::Timestamp now);

Bytes encode_factors_payload(const scenario::FactorVector& factors, int window_index);
struct FactorPayload {
    scenario::FactorVector factors;
    int window_index = 0;
};
FactorPayload decode_factors_payload(const Bytes& raw);

// --- receive handlers -------------------------------------------------------

struct HandlerResult {
    Reason verdict = Reason::Ok;
    std::optional<AuthMessage> reply;
    std::string note;
};

HandlerResult ncc_handle(NccState& ncc, const AuthMessage& msg, crypto::Timestamp now);
HandlerResult satellite_handle(SatelliteState& sat, const AuthMessage& msg,
                               crypto::Timestamp now);
HandlerResult bs_handle(BsState& bs, const AuthMessage& msg, crypto::Timestamp now);
HandlerResult mu_handle(MuState& mu, const AuthMessage& msg, crypto::Timestamp now);

// --- synchronous flow drivers ------------------------------------------------

// Delivery abstraction for the drivers; returns the arrival time, or nullopt
// when the message is lost.
struct Channel {
    virtual ~Channel() = default;
    virtual std::optional<crypto::Timestamp> transmit(const AuthMessage& msg,
                                                      crypto::Timestamp sent_at) = 0;
};

struct FixedDelayChannel final : Channel {
    int64_t delay_ms = 20;
    explicit FixedDelayChannel(int64_t d = 20) : delay_ms(d) {}
    std::optional<crypto::Timestamp> transmit(const AuthMessage&,
                                              crypto::Timestamp sent_at) override {
        return crypto::Timestamp{sent_at.ms + delay_ms};
    }
};

struct FlowResult {
    Reason outcome = Reason::Ok;
    std::vector<AuthMessage> transcript;
    std::optional<RegistrationRecord> record;
    crypto::Timestamp finished_at;
};

FlowResult register_infrastructure(SatelliteState& sat, NccState& ncc, Channel& ch,
                                   crypto::Timestamp start);
FlowResult register_infrastructure(BsState& bs, NccState& ncc, Channel& ch,
                                   crypto::Timestamp start);
// mirror_to, when given, receives the MU record and factor credentials after
// a successful enrollment (NCC to satellite sync).
FlowResult register_mu(MuState& mu, NccState& ncc, SatelliteState* mirror_to, Channel& ch,
                       crypto::Timestamp start);
FlowResult one_shot_authenticate(MuState& mu, SatelliteState& sat, Channel& ch,
                                 crypto::Timestamp start,
                                 const crypto::BiometricTemplate* fresh_reading = nullptr);
FlowResult open_continuous(MuState& mu, NccState& ncc, Channel& ch, crypto::Timestamp start);
FlowResult report_window(MuState& mu, NccState& ncc, const scenario::FactorVector& factors,
                         int window_index, Channel& ch, crypto::Timestamp start);

}  // namespace atmas::protocol
