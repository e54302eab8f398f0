#include "atmas/protocol/entities.hpp"

#include <stdexcept>

namespace atmas::protocol {

namespace {

Bytes u64_be(uint64_t v) {
    ByteWriter w;
    w.put_u64(v);
    return w.take();
}

Bytes i64_be(int64_t v) {
    ByteWriter w;
    w.put_i64(v);
    return w.take();
}

Bytes random_bytes(Rng& rng, size_t n) {
    return rng.bytes(n);
}

crypto::Credential link_credential(const std::string& uid, const Bytes& secret) {
    return crypto::hash_credential({to_bytes(uid), secret});
}

crypto::Credential ident_credential(const std::string& uid, const Bytes& secret) {
    return crypto::hash_credential({to_bytes("ident"), to_bytes(uid), secret});
}

crypto::Credential password_credential(const std::string& uid, const Bytes& password) {
    return crypto::hash_credential({to_bytes(uid), password});
}

crypto::Credential biometric_credential(const std::string& uid, const Bytes& fuzzy_key) {
    return crypto::hash_credential({to_bytes(uid), fuzzy_key});
}

crypto::Credential combined_credential(const std::string& uid, const crypto::Credential& c_pw,
                                       const crypto::Credential& c_bio) {
    return crypto::hash_credential({to_bytes(uid), c_pw.bytes(), c_bio.bytes()});
}

// Per-message factor proof: ties the claimed credential to this timestamp and
// nonce so proofs cannot be lifted from old traffic.
crypto::Credential factor_proof(const crypto::Credential& claim, crypto::Timestamp ts,
                                uint64_t nonce) {
    return crypto::hash_credential({claim.bytes(), i64_be(ts.ms), u64_be(nonce)});
}

Bytes session_key(const crypto::Credential& c_full, uint64_t session_nonce) {
    return crypto::hash_credential({c_full.bytes(), u64_be(session_nonce)}).bytes();
}

NonceCache& peer_cache(std::map<std::string, NonceCache>& caches, const std::string& uid,
                       size_t capacity) {
    auto it = caches.find(uid);
    if (it == caches.end()) it = caches.emplace(uid, NonceCache(capacity)).first;
    return it->second;
}

HandlerResult reject(Reason r, std::string note = {}) {
    return HandlerResult{r, std::nullopt, std::move(note)};
}

}  // namespace

std::string random_temp_id(Rng& rng) {
    return "t-" + to_hex(rng.bytes(8));
}

RegistrationRecord rotate_temp_id(const RegistrationRecord& record, Rng& rng) {
    RegistrationRecord out = record;
    do {
        out.entity.temp_id = random_temp_id(rng);
    } while (out.entity.temp_id == record.entity.temp_id);
    return out;
}

bool location_ok(const LocationContext& ctx, scenario::Vec2 position, int serving_bs) {
    if (serving_bs < 0 ||
        static_cast<size_t>(serving_bs) >= ctx.geometry.bs_positions.size())
        return false;
    const double d =
        scenario::distance(position, ctx.geometry.bs_positions[static_cast<size_t>(serving_bs)]);
    if (d > ctx.geometry.bs_coverage_km) return false;
    try {
        scenario::compute_elevation(ctx.geometry, position, ctx.subsatellite_point);
    } catch (const scenario::BeamOutOfRange&) {
        return false;
    }
    return true;
}

NccState make_ncc(const ProtocolConfig& cfg, uint64_t seed) {
    NccState ncc;
    ncc.cfg = cfg;
    ncc.rng = Rng(derive_seed(seed, "protocol/ncc", 0));
    ncc.keys = crypto::keygen(cfg.group, ncc.rng);
    ncc.id = EntityId{Role::NCC, "ncc", random_temp_id(ncc.rng)};
    return ncc;
}

SatelliteState make_satellite(const ProtocolConfig& cfg, const LocationContext& location,
                              uint64_t seed, const std::string& uid) {
    SatelliteState sat;
    sat.cfg = cfg;
    sat.rng = Rng(derive_seed(seed, "protocol/satellite", 0));
    sat.keys = crypto::keygen(cfg.group, sat.rng);
    sat.id = EntityId{Role::Satellite, uid, random_temp_id(sat.rng)};
    sat.location = location;
    return sat;
}

BsState make_bs(const ProtocolConfig& cfg, int bs_index, scenario::Vec2 position, uint64_t seed) {
    BsState bs;
    bs.cfg = cfg;
    bs.rng = Rng(derive_seed(seed, "protocol/bs", static_cast<uint64_t>(bs_index)));
    bs.keys = crypto::keygen(cfg.group, bs.rng);
    bs.id = EntityId{Role::BS, "bs-" + std::to_string(bs_index), random_temp_id(bs.rng)};
    bs.bs_index = bs_index;
    bs.position = position;
    return bs;
}

MuState make_mu(const ProtocolConfig& cfg, const std::string& uid, uint64_t seed) {
    MuState mu;
    mu.cfg = cfg;
    mu.rng = Rng(derive_seed(seed, "protocol/mu", 0));
    mu.keys = crypto::keygen(cfg.group, mu.rng);
    mu.id = EntityId{Role::MU, uid, random_temp_id(mu.rng)};
    mu.password = random_bytes(mu.rng, 16);
    mu.biometric.bits.resize(static_cast<size_t>(cfg.bio_bits));
    for (auto& b : mu.biometric.bits) b = mu.rng.bernoulli(0.5) ? 1 : 0;
    mu.biometric.tolerance = crypto::fuzzy_capacity(cfg.fuzzy_repetition);
    return mu;
}

// --- message builders --------------------------------------------------------

AuthMessage infra_reg_request(const EntityId& self, const crypto::KeyPair& keys,
                              const EntityId& ncc_id, crypto::Timestamp now, Rng& rng) {
    AuthMessage msg;
    msg.sender = self;
    msg.receiver = ncc_id;
    msg.msg_type = MsgType::RegRequest;
    msg.timestamp = now;
    msg.nonce = rng.next_u64();
    ByteWriter w;
    w.put_bytes(crypto::bigint_to_bytes(keys.public_key));
    msg.payload = Payload::raw_bytes(w.take());
    seal(msg, Bytes{});  // bootstrap: no shared secret exists yet
    return msg;
}

AuthMessage mu_reg_request(MuState& mu, const EntityId& ncc_id, crypto::Timestamp now) {
    const auto enrollment = crypto::fuzzy_gen(mu.biometric, mu.cfg.fuzzy_repetition, mu.rng);
    mu.helper = enrollment.helper;
    mu.fuzzy_key = enrollment.key;
    mu.c_pw = password_credential(mu.id.unique_id, mu.password);
    mu.c_bio = biometric_credential(mu.id.unique_id, mu.fuzzy_key);
    mu.c_full = combined_credential(mu.id.unique_id, mu.c_pw, mu.c_bio);

    AuthMessage msg;
    msg.sender = mu.id;
    msg.receiver = ncc_id;
    msg.msg_type = MsgType::RegRequest;
    msg.timestamp = now;
    msg.nonce = mu.rng.next_u64();
    ByteWriter w;
    w.put_bytes(crypto::bigint_to_bytes(mu.keys.public_key));
    w.put_bytes(mu.c_pw.bytes());
    w.put_bytes(mu.c_bio.bytes());
    msg.payload = Payload::encrypted(
        crypto::encrypt_bytes(mu.cfg.group, mu.ncc_public, w.take(), mu.rng));
    seal(msg, Bytes{});
    mu.session.state = SessionState::Phase::AwaitChallenge;
    return msg;
}

AuthMessage build_auth_request(const EntityId& sender, const EntityId& receiver,
                               const AuthRequestMaterial& material, crypto::Timestamp now,
                               uint64_t nonce) {
    AuthMessage msg;
    msg.sender = sender;
    msg.receiver = receiver;
    msg.msg_type = MsgType::AuthRequest;
    msg.timestamp = now;
    msg.nonce = nonce;
    ByteWriter w;
    w.put_f64(material.position.x);
    w.put_f64(material.position.y);
    w.put_u32(static_cast<uint32_t>(material.serving_bs));
    w.put_bytes(factor_proof(material.password, now, nonce).bytes());
    w.put_bytes(factor_proof(material.biometric, now, nonce).bytes());
    msg.payload = Payload::raw_bytes(w.take());
    seal(msg, material.ident.bytes());
    return msg;
}

AuthMessage mu_auth_request(MuState& mu, const EntityId& satellite_id,
                            const crypto::BiometricTemplate& fresh_reading,
                            crypto::Timestamp now) {
    const Bytes rep_key = crypto::fuzzy_rep(fresh_reading, mu.helper, mu.cfg.fuzzy_repetition);
    AuthRequestMaterial material;
    material.ident = mu.c_id;
    material.password = password_credential(mu.id.unique_id, mu.password);
    material.biometric = biometric_credential(mu.id.unique_id, rep_key);
    material.position = mu.position;
    material.serving_bs = mu.serving_bs;
    AuthMessage msg =
        build_auth_request(mu.id, satellite_id, material, now, mu.rng.next_u64());
    mu.session.peer = satellite_id;
    mu.session.state = SessionState::Phase::AwaitConfirm;
    return msg;
}

AuthMessage mu_cont_auth_request(MuState& mu, const EntityId& ncc_id, crypto::Timestamp now) {
    if (mu.session.state != SessionState::Phase::Authenticated)
        throw std::logic_error("continuous auth requires an authenticated session");
    AuthMessage msg;
    msg.sender = mu.id;
    msg.receiver = ncc_id;
    msg.msg_type = MsgType::ContAuthRequest;
    msg.timestamp = now;
    msg.nonce = mu.rng.next_u64();
    msg.payload = Payload::encrypted(crypto::encrypt_bytes(
        mu.cfg.group, mu.ncc_public, u64_be(mu.session.session_nonce), mu.rng));
    seal(msg, mu.c_full.bytes());
    mu.continuous.peer = ncc_id;
    mu.continuous.state = SessionState::Phase::AwaitConfirm;
    return msg;
}

Bytes encode_factors_payload(const scenario::FactorVector& f, int window_index) {
    ByteWriter w;
    w.put_u32(static_cast<uint32_t>(window_index));
    w.put_f64(f.f1_traffic_volume);
    w.put_u8(static_cast<uint8_t>(f.f2_service_type));
    w.put_f64(f.f3_uplink_rate);
    w.put_f64(f.f4_sinuosity);
    w.put_u32(static_cast<uint32_t>(f.f5_bs_index));
    w.put_f64(f.f6_bs_distance_km);
    w.put_f64(f.f7_position.x);
    w.put_f64(f.f7_position.y);
    w.put_f64(f.f8_heading_azimuth_deg);
    w.put_f64(f.f9_elevation_deg);
    return w.take();
}

FactorPayload decode_factors_payload(const Bytes& raw) {
    ByteReader r(raw);
    FactorPayload out;
    out.window_index = static_cast<int>(r.get_u32());
    out.factors.f1_traffic_volume = r.get_f64();
    out.factors.f2_service_type = r.get_u8();
    out.factors.f3_uplink_rate = r.get_f64();
    out.factors.f4_sinuosity = r.get_f64();
    out.factors.f5_bs_index = static_cast<int>(r.get_u32());
    out.factors.f6_bs_distance_km = r.get_f64();
    out.factors.f7_position.x = r.get_f64();
    out.factors.f7_position.y = r.get_f64();
    out.factors.f8_heading_azimuth_deg = r.get_f64();
    out.factors.f9_elevation_deg = r.get_f64();
    if (!r.at_end()) throw std::invalid_argument("factor payload: trailing bytes");
    return out;
}

AuthMessage mu_factor_report(MuState& mu, const EntityId& ncc_id,
                             const scenario::FactorVector& factors, int window_index,
                             crypto::Timestamp now) {
    if (mu.continuous.state != SessionState::Phase::Authenticated)
        throw std::logic_error("factor report requires an open continuous stream");
    AuthMessage msg;
    msg.sender = mu.id;
    msg.receiver = ncc_id;
    msg.msg_type = MsgType::FactorReport;
    msg.timestamp = now;
    msg.nonce = mu.rng.next_u64();
    msg.payload = Payload::raw_bytes(encode_factors_payload(factors, window_index));
    seal(msg, session_key(mu.c_full, mu.continuous.session_nonce));
    return msg;
}

// --- NCC handlers ------------------------------------------------------------

namespace {

HandlerResult ncc_handle_infra_request(NccState& ncc, const AuthMessage& msg,
                                       crypto::Timestamp now) {
    const std::string& uid = msg.sender.unique_id;
    auto& cache = peer_cache(ncc.nonce_seen, uid, ncc.cfg.nonce_cache_capacity);
    if (Reason r = verify_message(msg, Bytes{}, now, ncc.cfg.threshold_ms, &cache);
        r != Reason::Ok)
        return reject(r);
    if (ncc.records.contains(uid) || ncc.pending_infra.contains(uid) ||
        ncc.pending_mu.contains(uid))
        return reject(Reason::DuplicateIdentity, "unique_id already registered");
    if (msg.payload.kind != Payload::Kind::Raw) return reject(Reason::Malformed);

    crypto::BigInt public_key;
    try {
        ByteReader r(msg.payload.raw);
        public_key = crypto::bigint_from_bytes(r.get_bytes());
        if (!r.at_end()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        return reject(Reason::Malformed, "bad RegRequest payload");
    }

    NccState::PendingInfra pending;
    pending.entity = msg.sender;
    pending.public_key = public_key;
    pending.secret = ncc.rng.bytes(16);
    pending.link_key = link_credential(uid, pending.secret).bytes();
    ncc.pending_infra[uid] = pending;

    AuthMessage reply;
    reply.sender = ncc.id;
    reply.receiver = msg.sender;
    reply.msg_type = MsgType::RegChallenge;
    reply.timestamp = now;
    reply.nonce = ncc.rng.next_u64();
    reply.payload = Payload::encrypted(
        crypto::encrypt_bytes(ncc.cfg.group, public_key, pending.secret, ncc.rng));
    seal(reply, pending.link_key);
    return HandlerResult{Reason::Ok, reply, "infra challenge issued"};
}

HandlerResult ncc_handle_mu_request(NccState& ncc, const AuthMessage& msg,
                                    crypto::Timestamp now) {
    const std::string& uid = msg.sender.unique_id;
    auto& cache = peer_cache(ncc.nonce_seen, uid, ncc.cfg.nonce_cache_capacity);
    if (Reason r = verify_message(msg, Bytes{}, now, ncc.cfg.threshold_ms, &cache);
        r != Reason::Ok)
        return reject(r);
    if (ncc.records.contains(uid) || ncc.pending_mu.contains(uid) ||
        ncc.pending_infra.contains(uid))
        return reject(Reason::DuplicateIdentity, "unique_id already registered");
    if (msg.payload.kind != Payload::Kind::Encrypted) return reject(Reason::Malformed);

    NccState::PendingMu pending;
    try {
        const Bytes plain =
            crypto::decrypt_bytes(ncc.cfg.group, ncc.keys.private_key, msg.payload.blob);
        ByteReader r(plain);
        pending.public_key = crypto::bigint_from_bytes(r.get_bytes());
        pending.c_pw = crypto::Credential::from_bytes(r.get_bytes());
        pending.c_bio = crypto::Credential::from_bytes(r.get_bytes());
        if (!r.at_end()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        return reject(Reason::Malformed, "bad MU RegRequest payload");
    }
    pending.entity = msg.sender;
    pending.c_full = combined_credential(uid, pending.c_pw, pending.c_bio);
    pending.secret = ncc.rng.bytes(16);
    ncc.pending_mu[uid] = pending;

    AuthMessage reply;
    reply.sender = ncc.id;
    reply.receiver = msg.sender;
    reply.msg_type = MsgType::RegChallenge;
    reply.timestamp = now;
    reply.nonce = ncc.rng.next_u64();
    reply.payload = Payload::encrypted(
        crypto::encrypt_bytes(ncc.cfg.group, pending.public_key, pending.secret, ncc.rng));
    // Keyed with the combined credential: the MU verifies the NCC actually
    // derived its authentication parameters (mutual registration check).
    seal(reply, pending.c_full.bytes());
    return HandlerResult{Reason::Ok, reply, "mu challenge issued"};
}

HandlerResult ncc_handle_reg_confirm(NccState& ncc, const AuthMessage& msg,
                                     crypto::Timestamp now) {
    const std::string& uid = msg.sender.unique_id;
    auto& cache = peer_cache(ncc.nonce_seen, uid, ncc.cfg.nonce_cache_capacity);

    if (auto it = ncc.pending_infra.find(uid); it != ncc.pending_infra.end()) {
        const auto& pending = it->second;
        if (Reason r = verify_message(msg, pending.link_key, now, ncc.cfg.threshold_ms, &cache);
            r != Reason::Ok)
            return reject(r);
        RegistrationRecord record;
        record.entity = pending.entity;
        record.public_key = pending.public_key;
        record.credential = crypto::Credential::from_bytes(pending.link_key);
        record.enrolled_at = now;
        record.security_level = SecurityLevel::Medium;
        ncc.records[uid] = record;

        AuthMessage reply;
        reply.sender = ncc.id;
        reply.receiver = msg.sender;
        reply.msg_type = MsgType::Decision;
        reply.timestamp = now;
        reply.nonce = ncc.rng.next_u64();
        reply.payload = Payload::raw_bytes(to_bytes("registered"));
        seal(reply, pending.link_key);
        ncc.pending_infra.erase(it);
        return HandlerResult{Reason::Ok, reply, "infra registered"};
    }

    if (auto it = ncc.pending_mu.find(uid); it != ncc.pending_mu.end()) {
        const auto& pending = it->second;
        const crypto::Credential c_id = ident_credential(uid, pending.secret);
        if (Reason r = verify_message(msg, c_id.bytes(), now, ncc.cfg.threshold_ms, &cache);
            r != Reason::Ok)
            return reject(r);
        RegistrationRecord record;
        record.entity = pending.entity;
        record.public_key = pending.public_key;
        record.credential = pending.c_full;
        record.enrolled_at = now;
        auto lvl = ncc.level_policy.find(uid);
        record.security_level =
            lvl == ncc.level_policy.end() ? SecurityLevel::Medium : lvl->second;
        ncc.records[uid] = record;
        ncc.mu_credentials[uid] =
            MuFactorCredentials{c_id, pending.c_pw, pending.c_bio, pending.c_full};
        ncc.pending_mu.erase(it);
        return HandlerResult{Reason::Ok, std::nullopt, "mu registered"};
    }

    return reject(Reason::UnknownSender, "no registration in flight");
}

HandlerResult ncc_handle_cont_auth(NccState& ncc, const AuthMessage& msg,
                                   crypto::Timestamp now) {
    const std::string& uid = msg.sender.unique_id;
    auto creds = ncc.mu_credentials.find(uid);
    if (creds == ncc.mu_credentials.end()) return reject(Reason::UnknownSender);
    auto& cache = peer_cache(ncc.nonce_seen, uid, ncc.cfg.nonce_cache_capacity);
    if (Reason r = verify_message(msg, creds->second.combined.bytes(), now,
                                  ncc.cfg.threshold_ms, &cache);
        r != Reason::Ok)
        return reject(r);
    if (msg.payload.kind != Payload::Kind::Encrypted) return reject(Reason::Malformed);

    uint64_t session_nonce = 0;
    try {
        const Bytes plain =
            crypto::decrypt_bytes(ncc.cfg.group, ncc.keys.private_key, msg.payload.blob);
        ByteReader r(plain);
        session_nonce = r.get_u64();
        if (!r.at_end()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        return reject(Reason::Malformed, "bad ContAuthRequest payload");
    }

    SessionState session;
    session.peer = msg.sender;
    session.state = SessionState::Phase::Authenticated;
    session.session_nonce = session_nonce;
    session.established_at = now;
    ncc.sessions[uid] = session;

    AuthMessage reply;
    reply.sender = ncc.id;
    reply.receiver = msg.sender;
    reply.msg_type = MsgType::Decision;
    reply.timestamp = now;
    reply.nonce = ncc.rng.next_u64();
    ByteWriter w;
    w.put_u8(0);  // grant
    w.put_f64(0.0);
    w.put_u32(0);
    reply.payload = Payload::raw_bytes(w.take());
    seal(reply, session_key(creds->second.combined, session_nonce));
    return HandlerResult{Reason::Ok, reply, "continuous stream opened"};
}

HandlerResult ncc_handle_factor_report(NccState& ncc, const AuthMessage& msg,
                                       crypto::Timestamp now) {
    const std::string& uid = msg.sender.unique_id;
    auto session = ncc.sessions.find(uid);
    if (session == ncc.sessions.end() ||
        session->second.state != SessionState::Phase::Authenticated)
        return reject(Reason::UnknownSender, "no continuous stream");
    auto creds = ncc.mu_credentials.find(uid);
    if (creds == ncc.mu_credentials.end()) return reject(Reason::UnknownSender);

    const Bytes key = session_key(creds->second.combined, session->second.session_nonce);
    auto& cache = peer_cache(ncc.nonce_seen, uid, ncc.cfg.nonce_cache_capacity);
    if (Reason r = verify_message(msg, key, now, ncc.cfg.threshold_ms, &cache); r != Reason::Ok)
        return reject(r);
    if (msg.payload.kind != Payload::Kind::Raw) return reject(Reason::Malformed);

    FactorPayload report;
    try {
        report = decode_factors_payload(msg.payload.raw);
    } catch (const std::exception&) {
        return reject(Reason::Malformed, "bad factor payload");
    }

    double score = 0.0;
    bool deny = false;
    const SecurityLevel level = ncc.records.at(uid).security_level;
    if (ncc.registry != nullptr && ncc.registry->has(uid)) {
        const auto decision =
            ncc.registry->authenticate_window(uid, report.window_index, report.factors, level);
        score = decision.spoof_score;
        deny = decision.deny;
    }
    if (deny) session->second.state = SessionState::Phase::Rejected;

    AuthMessage reply;
    reply.sender = ncc.id;
    reply.receiver = msg.sender;
    reply.msg_type = MsgType::Decision;
    reply.timestamp = now;
    reply.nonce = ncc.rng.next_u64();
    ByteWriter w;
    w.put_u8(deny ? 1 : 0);
    w.put_f64(score);
    w.put_u32(static_cast<uint32_t>(report.window_index));
    reply.payload = Payload::raw_bytes(w.take());
    seal(reply, key);
    return HandlerResult{Reason::Ok, reply, deny ? "deny" : "grant"};
}

}  // namespace

HandlerResult ncc_handle(NccState& ncc, const AuthMessage& msg, crypto::Timestamp now) {
    switch (msg.msg_type) {
        case MsgType::RegRequest:
            return msg.sender.role == Role::MU ? ncc_handle_mu_request(ncc, msg, now)
                                               : ncc_handle_infra_request(ncc, msg, now);
        case MsgType::RegConfirm: return ncc_handle_reg_confirm(ncc, msg, now);
        case MsgType::ContAuthRequest: return ncc_handle_cont_auth(ncc, msg, now);
        case MsgType::FactorReport: return ncc_handle_factor_report(ncc, msg, now);
        default: return reject(Reason::Malformed, "unexpected message type at NCC");
    }
}

// --- satellite handlers ------------------------------------------------------

namespace {

HandlerResult satellite_handle_auth_request(SatelliteState& sat, const AuthMessage& msg,
                                            crypto::Timestamp now) {
    // Ordered one-shot verification: freshness, identity, location, password,
    // biometric. Transport-level replay and tamper rejections sit between the
    // identity lookup and the location check because the binding key is the
    // identity credential itself.
    if (!crypto::check_freshness(msg.timestamp, now, sat.cfg.threshold_ms))
        return reject(Reason::Stale);

    const std::string& uid = msg.sender.unique_id;
    auto creds = sat.mu_credentials.find(uid);
    if (creds == sat.mu_credentials.end())
        return reject(Reason::BadIdentity, "unknown unique_id");

    auto& cache = peer_cache(sat.nonce_seen, uid, sat.cfg.nonce_cache_capacity);
    if (cache.seen(msg.nonce)) return reject(Reason::ReplayedNonce);
    if (binding_credential(msg, creds->second.ident.bytes()) != msg.credential)
        return reject(Reason::BadCredential);
    cache.insert(msg.nonce);

    if (msg.payload.kind != Payload::Kind::Raw)
        return reject(Reason::Malformed, "bad AuthRequest payload");
    scenario::Vec2 position;
    int serving_bs = 0;
    crypto::Credential proof_pw, proof_bio;
    try {
        ByteReader r(msg.payload.raw);
        position.x = r.get_f64();
        position.y = r.get_f64();
        serving_bs = static_cast<int>(r.get_u32());
        proof_pw = crypto::Credential::from_bytes(r.get_bytes());
        proof_bio = crypto::Credential::from_bytes(r.get_bytes());
        if (!r.at_end()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        return reject(Reason::Malformed, "bad AuthRequest payload");
    }

    if (!location_ok(sat.location, position, serving_bs)) return reject(Reason::BadLocation);
    if (factor_proof(creds->second.password, msg.timestamp, msg.nonce) != proof_pw)
        return reject(Reason::BadPassword);
    if (factor_proof(creds->second.biometric, msg.timestamp, msg.nonce) != proof_bio)
        return reject(Reason::BadBiometric);

    SessionState session;
    session.peer = msg.sender;
    session.state = SessionState::Phase::Authenticated;
    session.session_nonce = sat.rng.next_u64();
    session.established_at = now;
    sat.sessions[uid] = session;

    const auto record = sat.mu_records.find(uid);
    AuthMessage reply;
    reply.sender = sat.id;
    reply.receiver = msg.sender;
    reply.msg_type = MsgType::AuthResponse;
    reply.timestamp = now;
    reply.nonce = sat.rng.next_u64();
    reply.payload = Payload::encrypted(crypto::encrypt_bytes(
        sat.cfg.group, record->second.public_key, u64_be(session.session_nonce), sat.rng));
    seal(reply, creds->second.combined.bytes());
    return HandlerResult{Reason::Ok, reply, "session established"};
}

HandlerResult satellite_handle_ncc_reply(SatelliteState& sat, const AuthMessage& msg,
                                         crypto::Timestamp now) {
    auto& cache = peer_cache(sat.nonce_seen, msg.sender.unique_id,
                             sat.cfg.nonce_cache_capacity);
    if (msg.msg_type == MsgType::RegChallenge) {
        if (!crypto::check_freshness(msg.timestamp, now, sat.cfg.threshold_ms))
            return reject(Reason::Stale);
        if (cache.seen(msg.nonce)) return reject(Reason::ReplayedNonce);
        if (msg.payload.kind != Payload::Kind::Encrypted) return reject(Reason::Malformed);
        Bytes secret;
        try {
            secret = crypto::decrypt_bytes(sat.cfg.group, sat.keys.private_key,
                                           msg.payload.blob);
        } catch (const std::exception&) {
            return reject(Reason::Malformed, "bad RegChallenge payload");
        }
        const Bytes key = link_credential(sat.id.unique_id, secret).bytes();
        if (binding_credential(msg, key) != msg.credential)
            return reject(Reason::BadCredential);
        cache.insert(msg.nonce);
        sat.secret = secret;
        sat.link_key = key;

        AuthMessage confirm;
        confirm.sender = sat.id;
        confirm.receiver = msg.sender;
        confirm.msg_type = MsgType::RegConfirm;
        confirm.timestamp = now;
        confirm.nonce = sat.rng.next_u64();
        seal(confirm, key);
        return HandlerResult{Reason::Ok, confirm, "challenge accepted"};
    }
    if (msg.msg_type == MsgType::Decision) {
        if (Reason r = verify_message(msg, sat.link_key, now, sat.cfg.threshold_ms, &cache);
            r != Reason::Ok)
            return reject(r);
        sat.registered = true;
        return HandlerResult{Reason::Ok, std::nullopt, "registration confirmed"};
    }
    return reject(Reason::Malformed, "unexpected message type at satellite");
}

}  // namespace

HandlerResult satellite_handle(SatelliteState& sat, const AuthMessage& msg,
                               crypto::Timestamp now) {
    if (msg.msg_type == MsgType::AuthRequest)
        return satellite_handle_auth_request(sat, msg, now);
    return satellite_handle_ncc_reply(sat, msg, now);
}

HandlerResult bs_handle(BsState& bs, const AuthMessage& msg, crypto::Timestamp now) {
    if (msg.msg_type == MsgType::RegChallenge) {
        if (!crypto::check_freshness(msg.timestamp, now, bs.cfg.threshold_ms))
            return reject(Reason::Stale);
        if (bs.nonce_seen.seen(msg.nonce)) return reject(Reason::ReplayedNonce);
        if (msg.payload.kind != Payload::Kind::Encrypted) return reject(Reason::Malformed);
        Bytes secret;
        try {
            secret = crypto::decrypt_bytes(bs.cfg.group, bs.keys.private_key, msg.payload.blob);
        } catch (const std::exception&) {
            return reject(Reason::Malformed, "bad RegChallenge payload");
        }
        const Bytes key = link_credential(bs.id.unique_id, secret).bytes();
        if (binding_credential(msg, key) != msg.credential)
            return reject(Reason::BadCredential);
        bs.nonce_seen.insert(msg.nonce);
        bs.secret = secret;
        bs.link_key = key;

        AuthMessage confirm;
        confirm.sender = bs.id;
        confirm.receiver = msg.sender;
        confirm.msg_type = MsgType::RegConfirm;
        confirm.timestamp = now;
        confirm.nonce = bs.rng.next_u64();
        seal(confirm, key);
        return HandlerResult{Reason::Ok, confirm, "challenge accepted"};
    }
    if (msg.msg_type == MsgType::Decision) {
        if (Reason r = verify_message(msg, bs.link_key, now, bs.cfg.threshold_ms,
                                      &bs.nonce_seen);
            r != Reason::Ok)
            return reject(r);
        bs.registered = true;
        return HandlerResult{Reason::Ok, std::nullopt, "registration confirmed"};
    }
    return reject(Reason::Malformed, "unexpected message type at BS");
}

// --- MU handlers -------------------------------------------------------------

namespace {

HandlerResult mu_handle_reg_challenge(MuState& mu, const AuthMessage& msg,
                                      crypto::Timestamp now) {
    if (mu.session.state != SessionState::Phase::AwaitChallenge)
        return reject(Reason::Malformed, "no registration in flight");
    if (!crypto::check_freshness(msg.timestamp, now, mu.cfg.threshold_ms)) {
        mu.session.state = SessionState::Phase::Rejected;
        return reject(Reason::Stale);
    }
    // Verify before decrypting: the challenge must prove knowledge of the
    // combined credential or enrollment aborts.
    if (binding_credential(msg, mu.c_full.bytes()) != msg.credential) {
        mu.session.state = SessionState::Phase::Rejected;
        return reject(Reason::BadCredential, "enrollment aborted");
    }
    if (msg.payload.kind != Payload::Kind::Encrypted) {
        mu.session.state = SessionState::Phase::Rejected;
        return reject(Reason::Malformed);
    }
    try {
        mu.reg_secret =
            crypto::decrypt_bytes(mu.cfg.group, mu.keys.private_key, msg.payload.blob);
    } catch (const std::exception&) {
        mu.session.state = SessionState::Phase::Rejected;
        return reject(Reason::Malformed, "bad RegChallenge payload");
    }
    mu.c_id = ident_credential(mu.id.unique_id, mu.reg_secret);
    mu.registered = true;
    mu.session.state = SessionState::Phase::Idle;

    AuthMessage confirm;
    confirm.sender = mu.id;
    confirm.receiver = msg.sender;
    confirm.msg_type = MsgType::RegConfirm;
    confirm.timestamp = now;
    confirm.nonce = mu.rng.next_u64();
    seal(confirm, mu.c_id.bytes());
    return HandlerResult{Reason::Ok, confirm, "enrollment confirmed"};
}

HandlerResult mu_handle_auth_response(MuState& mu, const AuthMessage& msg,
                                      crypto::Timestamp now) {
    if (mu.session.state != SessionState::Phase::AwaitConfirm)
        return reject(Reason::Malformed, "no authentication in flight");
    if (!crypto::check_freshness(msg.timestamp, now, mu.cfg.threshold_ms)) {
        mu.session.state = SessionState::Phase::Rejected;
        return reject(Reason::Stale);
    }
    auto& cache = peer_cache(mu.nonce_seen, msg.sender.unique_id,
                             mu.cfg.nonce_cache_capacity);
    if (cache.seen(msg.nonce)) return reject(Reason::ReplayedNonce);
    if (binding_credential(msg, mu.c_full.bytes()) != msg.credential) {
        mu.session.state = SessionState::Phase::Rejected;
        return reject(Reason::BadCredential);
    }
    cache.insert(msg.nonce);
    if (msg.payload.kind != Payload::Kind::Encrypted) {
        mu.session.state = SessionState::Phase::Rejected;
        return reject(Reason::Malformed);
    }
    try {
        const Bytes plain =
            crypto::decrypt_bytes(mu.cfg.group, mu.keys.private_key, msg.payload.blob);
        ByteReader r(plain);
        mu.session.session_nonce = r.get_u64();
        if (!r.at_end()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        mu.session.state = SessionState::Phase::Rejected;
        return reject(Reason::Malformed, "bad AuthResponse payload");
    }
    mu.session.peer = msg.sender;
    mu.session.state = SessionState::Phase::Authenticated;
    mu.session.established_at = now;
    return HandlerResult{Reason::Ok, std::nullopt, "mutual authentication complete"};
}

HandlerResult mu_handle_decision(MuState& mu, const AuthMessage& msg, crypto::Timestamp now) {
    const Bytes key = session_key(mu.c_full, mu.continuous.session_nonce != 0
                                                 ? mu.continuous.session_nonce
                                                 : mu.session.session_nonce);
    auto& cache = peer_cache(mu.nonce_seen, msg.sender.unique_id,
                             mu.cfg.nonce_cache_capacity);
    if (Reason r = verify_message(msg, key, now, mu.cfg.threshold_ms, &cache); r != Reason::Ok)
        return reject(r);
    if (msg.payload.kind != Payload::Kind::Raw) return reject(Reason::Malformed);
    bool deny = false;
    try {
        ByteReader r(msg.payload.raw);
        deny = r.get_u8() != 0;
        (void)r.get_f64();
        (void)r.get_u32();
        if (!r.at_end()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        return reject(Reason::Malformed, "bad Decision payload");
    }
    if (mu.continuous.state == SessionState::Phase::AwaitConfirm) {
        mu.continuous.session_nonce = mu.session.session_nonce;
        mu.continuous.state = SessionState::Phase::Authenticated;
        mu.continuous.established_at = now;
    }
    if (deny) {
        // Denied windows terminate the transmission session.
        mu.continuous.state = SessionState::Phase::Rejected;
        mu.session.state = SessionState::Phase::Rejected;
    }
    return HandlerResult{Reason::Ok, std::nullopt, deny ? "deny" : "grant"};
}

}  // namespace

HandlerResult mu_handle(MuState& mu, const AuthMessage& msg, crypto::Timestamp now) {
    switch (msg.msg_type) {
        case MsgType::RegChallenge: return mu_handle_reg_challenge(mu, msg, now);
        case MsgType::AuthResponse: return mu_handle_auth_response(mu, msg, now);
        case MsgType::Decision: return mu_handle_decision(mu, msg, now);
        default: return reject(Reason::Malformed, "unexpected message type at MU");
    }
}

// --- flow drivers ------------------------------------------------------------

namespace {

// Ping-pong driver: delivers `first` to the responder, routes every reply
// back and forth until a side stops replying. Returns the first non-Ok
// verdict, or Ok when the exchange completes.
template <typename InitiatorHandler, typename ResponderHandler>
FlowResult run_exchange(AuthMessage first, Channel& ch, crypto::Timestamp start,
                        InitiatorHandler&& initiator, ResponderHandler&& responder) {
    FlowResult result;
    result.finished_at = start;
    AuthMessage in_flight = std::move(first);
    bool toward_responder = true;
    crypto::Timestamp now = start;
    while (true) {
        result.transcript.push_back(in_flight);
        const auto arrival = ch.transmit(in_flight, now);
        if (!arrival) {
            result.outcome = Reason::Timeout;
            result.finished_at = now;
            return result;
        }
        now = *arrival;
        const HandlerResult handled =
            toward_responder ? responder(in_flight, now) : initiator(in_flight, now);
        if (handled.verdict != Reason::Ok) {
            result.outcome = handled.verdict;
            result.finished_at = now;
            return result;
        }
        if (!handled.reply) {
            result.outcome = Reason::Ok;
            result.finished_at = now;
            return result;
        }
        in_flight = *handled.reply;
        toward_responder = !toward_responder;
    }
}

}  // namespace

FlowResult register_infrastructure(SatelliteState& sat, NccState& ncc, Channel& ch,
                                   crypto::Timestamp start) {
    AuthMessage request = infra_reg_request(sat.id, sat.keys, ncc.id, start, sat.rng);
    FlowResult result = run_exchange(
        std::move(request), ch, start,
        [&](const AuthMessage& m, crypto::Timestamp now) { return satellite_handle(sat, m, now); },
        [&](const AuthMessage& m, crypto::Timestamp now) { return ncc_handle(ncc, m, now); });
    if (result.outcome == Reason::Ok && sat.registered)
        result.record = ncc.records.at(sat.id.unique_id);
    return result;
}

FlowResult register_infrastructure(BsState& bs, NccState& ncc, Channel& ch,
                                   crypto::Timestamp start) {
    AuthMessage request = infra_reg_request(bs.id, bs.keys, ncc.id, start, bs.rng);
    FlowResult result = run_exchange(
        std::move(request), ch, start,
        [&](const AuthMessage& m, crypto::Timestamp now) { return bs_handle(bs, m, now); },
        [&](const AuthMessage& m, crypto::Timestamp now) { return ncc_handle(ncc, m, now); });
    if (result.outcome == Reason::Ok && bs.registered)
        result.record = ncc.records.at(bs.id.unique_id);
    return result;
}

FlowResult register_mu(MuState& mu, NccState& ncc, SatelliteState* mirror_to, Channel& ch,
                       crypto::Timestamp start) {
    mu.ncc_public = ncc.keys.public_key;
    AuthMessage request = mu_reg_request(mu, ncc.id, start);
    FlowResult result = run_exchange(
        std::move(request), ch, start,
        [&](const AuthMessage& m, crypto::Timestamp now) { return mu_handle(mu, m, now); },
        [&](const AuthMessage& m, crypto::Timestamp now) { return ncc_handle(ncc, m, now); });
    if (result.outcome == Reason::Ok && ncc.records.contains(mu.id.unique_id)) {
        result.record = ncc.records.at(mu.id.unique_id);
        if (mirror_to != nullptr) {
            mirror_to->mu_records[mu.id.unique_id] = *result.record;
            mirror_to->mu_credentials[mu.id.unique_id] =
                ncc.mu_credentials.at(mu.id.unique_id);
        }
    } else if (result.outcome == Reason::Ok) {
        // NCC never finalized (e.g. lost confirm): surface as timeout.
        result.outcome = Reason::Timeout;
    }
    return result;
}

FlowResult one_shot_authenticate(MuState& mu, SatelliteState& sat, Channel& ch,
                                 crypto::Timestamp start,
                                 const crypto::BiometricTemplate* fresh_reading) {
    mu.satellite_public = sat.keys.public_key;
    const crypto::BiometricTemplate& reading =
        fresh_reading != nullptr ? *fresh_reading : mu.biometric;
    AuthMessage request = mu_auth_request(mu, sat.id, reading, start);
    FlowResult result = run_exchange(
        std::move(request), ch, start,
        [&](const AuthMessage& m, crypto::Timestamp now) { return mu_handle(mu, m, now); },
        [&](const AuthMessage& m, crypto::Timestamp now) { return satellite_handle(sat, m, now); });
    if (result.outcome != Reason::Ok &&
        mu.session.state == SessionState::Phase::AwaitConfirm)
        mu.session.state = SessionState::Phase::Rejected;
    return result;
}

FlowResult open_continuous(MuState& mu, NccState& ncc, Channel& ch, crypto::Timestamp start) {
    mu.ncc_public = ncc.keys.public_key;
    AuthMessage request = mu_cont_auth_request(mu, ncc.id, start);
    FlowResult result = run_exchange(
        std::move(request), ch, start,
        [&](const AuthMessage& m, crypto::Timestamp now) { return mu_handle(mu, m, now); },
        [&](const AuthMessage& m, crypto::Timestamp now) { return ncc_handle(ncc, m, now); });
    if (result.outcome != Reason::Ok &&
        mu.continuous.state == SessionState::Phase::AwaitConfirm)
        mu.continuous.state = SessionState::Phase::Rejected;
    return result;
}

FlowResult report_window(MuState& mu, NccState& ncc, const scenario::FactorVector& factors,
                         int window_index, Channel& ch, crypto::Timestamp start) {
    AuthMessage report = mu_factor_report(mu, ncc.id, factors, window_index, start);
    return run_exchange(
        std::move(report), ch, start,
        [&](const AuthMessage& m, crypto::Timestamp now) { return mu_handle(mu, m, now); },
        [&](const AuthMessage& m, crypto::Timestamp now) { return ncc_handle(ncc, m, now); });
}

}  // namespace atmas::protocol
