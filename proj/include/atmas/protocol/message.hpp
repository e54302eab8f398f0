#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_set>

#include "atmas/bytes.hpp"
#include "atmas/crypto/elgamal.hpp"
#include "atmas/crypto/freshness.hpp"
#include "atmas/crypto/hash.hpp"

namespace atmas::protocol {

enum class Role : uint8_t { MU = 0, BS = 1, Satellite = 2, NCC = 3 };

std::string role_name(Role r);

struct EntityId {
    Role role = Role::MU;
    std::string unique_id;
    std::string temp_id;

    bool operator==(const EntityId&) const = default;
};

enum class MsgType : uint8_t {
    RegRequest = 0,
    RegChallenge = 1,
    RegConfirm = 2,
    AuthRequest = 3,
    AuthResponse = 4,
    ContAuthRequest = 5,
    FactorReport = 6,
    Decision = 7,
};

std::string msg_type_name(MsgType t);

// Verification outcomes; Ok first, then transport-level rejections, then the
// ordered one-shot factor rejections.
enum class Reason : uint8_t {
    Ok = 0,
    Stale,
    ReplayedNonce,
    BadCredential,
    UnknownSender,
    Malformed,
    DuplicateIdentity,
    BadIdentity,
    BadLocation,
    BadPassword,
    BadBiometric,
    Timeout,
};

std::string reason_name(Reason r);

struct Payload {
    enum class Kind : uint8_t { None = 0, Encrypted = 1, Raw = 2 };
    Kind kind = Kind::None;
    crypto::EncryptedBlob blob;  // Kind::Encrypted
    Bytes raw;                   // Kind::Raw

    static Payload none() { return {}; }
    static Payload encrypted(crypto::EncryptedBlob b);
    static Payload raw_bytes(Bytes b);

    bool operator==(const Payload&) const;
};

// One protocol message. The credential field binds every other field under a
// flow-specific key, so receivers detect any in-flight modification.
struct AuthMessage {
    EntityId sender;
    EntityId receiver;
    MsgType msg_type = MsgType::RegRequest;
    crypto::Timestamp timestamp;
    uint64_t nonce = 0;
    Payload payload;
    crypto::Credential credential;

    bool operator==(const AuthMessage&) const = default;
};

// Canonical platform-independent encoding. parse_message throws
// std::invalid_argument or std::out_of_range on malformed input.
Bytes serialize_message(const AuthMessage& msg);
AuthMessage parse_message(const Bytes& wire);

// Hash binding of all fields except the credential itself, keyed by a shared
// secret (an empty key is the registration bootstrap case).
crypto::Credential binding_credential(const AuthMessage& msg, const Bytes& key);
void seal(AuthMessage& msg, const Bytes& key);

// Bounded per-peer replay cache, least-recently-inserted eviction.
class NonceCache {
public:
    explicit NonceCache(size_t capacity = 4096) : capacity_(capacity) {}

    bool seen(uint64_t nonce) const { return set_.contains(nonce); }
    void insert(uint64_t nonce);
    size_t size() const { return set_.size(); }

private:
    size_t capacity_;
    std::unordered_set<uint64_t> set_;
    std::deque<uint64_t> order_;
};

// Transport-level checks in fixed order: freshness, replay, binding. Inserts
// the nonce into the cache only on acceptance. A null cache skips the replay
// check (used before any peer relationship exists).
Reason verify_message(const AuthMessage& msg, const Bytes& key, crypto::Timestamp now,
                      int64_t threshold_ms, NonceCache* cache);

}  // namespace atmas::protocol
