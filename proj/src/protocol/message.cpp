#include "atmas/protocol/message.hpp"

#include <stdexcept>

namespace atmas::protocol {

std::string role_name(Role r) {
    switch (r) {
        case Role::MU: return "mu";
        case Role::BS: return "bs";
        case Role::Satellite: return "satellite";
        case Role::NCC: return "ncc";
    }
    throw std::invalid_argument("role_name: bad role");
}

std::string msg_type_name(MsgType t) {
    switch (t) {
        case MsgType::RegRequest: return "RegRequest";
        case MsgType::RegChallenge: return "RegChallenge";
        case MsgType::RegConfirm: return "RegConfirm";
        case MsgType::AuthRequest: return "AuthRequest";
        case MsgType::AuthResponse: return "AuthResponse";
        case MsgType::ContAuthRequest: return "ContAuthRequest";
        case MsgType::FactorReport: return "FactorReport";
        case MsgType::Decision: return "Decision";
    }
    throw std::invalid_argument("msg_type_name: bad type");
}

std::string reason_name(Reason r) {
    switch (r) {
        case Reason::Ok: return "Ok";
        case Reason::Stale: return "Stale";
        case Reason::ReplayedNonce: return "ReplayedNonce";
        case Reason::BadCredential: return "BadCredential";
        case Reason::UnknownSender: return "UnknownSender";
        case Reason::Malformed: return "Malformed";
        case Reason::DuplicateIdentity: return "DuplicateIdentity";
        case Reason::BadIdentity: return "BadIdentity";
        case Reason::BadLocation: return "BadLocation";
        case Reason::BadPassword: return "BadPassword";
        case Reason::BadBiometric: return "BadBiometric";
        case Reason::Timeout: return "Timeout";
    }
    throw std::invalid_argument("reason_name: bad reason");
}

Payload Payload::encrypted(crypto::EncryptedBlob b) {
    Payload p;
    p.kind = Kind::Encrypted;
    p.blob = std::move(b);
    return p;
}

Payload Payload::raw_bytes(Bytes b) {
    Payload p;
    p.kind = Kind::Raw;
    p.raw = std::move(b);
    return p;
}

bool Payload::operator==(const Payload& other) const {
    if (kind != other.kind) return false;
    switch (kind) {
        case Kind::None: return true;
        case Kind::Raw: return raw == other.raw;
        case Kind::Encrypted: {
            if (blob.n_bytes != other.blob.n_bytes) return false;
            if (blob.chunks.size() != other.blob.chunks.size()) return false;
            for (size_t i = 0; i < blob.chunks.size(); ++i)
                if (blob.chunks[i].c1 != other.blob.chunks[i].c1 ||
                    blob.chunks[i].c2 != other.blob.chunks[i].c2)
                    return false;
            return true;
        }
    }
    return false;
}

namespace {

void encode_entity(ByteWriter& w, const EntityId& id) {
    w.put_u8(static_cast<uint8_t>(id.role));
    w.put_string(id.unique_id);
    w.put_string(id.temp_id);
}

EntityId decode_entity(ByteReader& r) {
    EntityId id;
    const uint8_t role = r.get_u8();
    if (role > static_cast<uint8_t>(Role::NCC))
        throw std::invalid_argument("parse_message: bad role byte");
    id.role = static_cast<Role>(role);
    id.unique_id = r.get_string();
    id.temp_id = r.get_string();
    return id;
}

void encode_payload(ByteWriter& w, const Payload& p) {
    w.put_u8(static_cast<uint8_t>(p.kind));
    switch (p.kind) {
        case Payload::Kind::None: break;
        case Payload::Kind::Raw: w.put_bytes(p.raw); break;
        case Payload::Kind::Encrypted:
            w.put_u32(p.blob.n_bytes);
            w.put_u32(static_cast<uint32_t>(p.blob.chunks.size()));
            for (const auto& c : p.blob.chunks) {
                w.put_bytes(crypto::bigint_to_bytes(c.c1));
                w.put_bytes(crypto::bigint_to_bytes(c.c2));
            }
            break;
    }
}

Payload decode_payload(ByteReader& r) {
    const uint8_t kind = r.get_u8();
    Payload p;
    switch (kind) {
        case 0: return p;
        case 2: return Payload::raw_bytes(r.get_bytes());
        case 1: {
            crypto::EncryptedBlob blob;
            blob.n_bytes = r.get_u32();
            const uint32_t n = r.get_u32();
            blob.chunks.reserve(n);
            for (uint32_t i = 0; i < n; ++i) {
                crypto::Ciphertext ct;
                ct.c1 = crypto::bigint_from_bytes(r.get_bytes());
                ct.c2 = crypto::bigint_from_bytes(r.get_bytes());
                blob.chunks.push_back(std::move(ct));
            }
            return Payload::encrypted(std::move(blob));
        }
        default: throw std::invalid_argument("parse_message: bad payload kind");
    }
}

Bytes encode_unsigned_fields(const AuthMessage& msg) {
    ByteWriter w;
    encode_entity(w, msg.sender);
    encode_entity(w, msg.receiver);
    w.put_u8(static_cast<uint8_t>(msg.msg_type));
    w.put_i64(msg.timestamp.ms);
    w.put_u64(msg.nonce);
    encode_payload(w, msg.payload);
    return w.take();
}

}  // namespace

Bytes serialize_message(const AuthMessage& msg) {
    ByteWriter w;
    w.put_bytes(encode_unsigned_fields(msg));
    w.put_bytes(msg.credential.bytes());
    return w.take();
}

AuthMessage parse_message(const Bytes& wire) {
    ByteReader outer(wire);
    const Bytes fields = outer.get_bytes();
    const Bytes cred = outer.get_bytes();
    if (!outer.at_end()) throw std::invalid_argument("parse_message: trailing bytes");

    ByteReader r(fields);
    AuthMessage msg;
    msg.sender = decode_entity(r);
    msg.receiver = decode_entity(r);
    const uint8_t type = r.get_u8();
    if (type > static_cast<uint8_t>(MsgType::Decision))
        throw std::invalid_argument("parse_message: bad msg_type byte");
    msg.msg_type = static_cast<MsgType>(type);
    msg.timestamp.ms = r.get_i64();
    msg.nonce = r.get_u64();
    msg.payload = decode_payload(r);
    if (!r.at_end()) throw std::invalid_argument("parse_message: trailing field bytes");
    msg.credential = crypto::Credential::from_bytes(cred);
    return msg;
}

crypto::Credential binding_credential(const AuthMessage& msg, const Bytes& key) {
    return crypto::hash_credential({key, encode_unsigned_fields(msg)});
}

void seal(AuthMessage& msg, const Bytes& key) {
    msg.credential = binding_credential(msg, key);
}

void NonceCache::insert(uint64_t nonce) {
    if (set_.contains(nonce)) return;
    set_.insert(nonce);
    order_.push_back(nonce);
    while (set_.size() > capacity_) {
        set_.erase(order_.front());
        order_.pop_front();
    }
}

Reason verify_message(const AuthMessage& msg, const Bytes& key, crypto::Timestamp now,
                      int64_t threshold_ms, NonceCache* cache) {
    if (!crypto::check_freshness(msg.timestamp, now, threshold_ms)) return Reason::Stale;
    if (cache && cache->seen(msg.nonce)) return Reason::ReplayedNonce;
    if (binding_credential(msg, key) != msg.credential) return Reason::BadCredential;
    if (cache) cache->insert(msg.nonce);
    return Reason::Ok;
}

}  // namespace atmas::protocol
