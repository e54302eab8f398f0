#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atmas/protocol/entities.hpp"
#include "atmas/protocol/message.hpp"
#include "atmas/scenario/dataset.hpp"

namespace atmas::sim {

// Per-link base delays with a uniform integer jitter. Integer milliseconds
// keep the event log byte-identical across platforms.
struct ChannelModel {
    int64_t mu_bs_delay_ms = 2;
    int64_t bs_sat_delay_ms = 15;
    int64_t sat_ncc_delay_ms = 15;
    int64_t jitter_ms = 3;  // uniform half-width, drawn per hop
    double loss_prob = 0.0;

    void validate() const;
};

enum class AdversaryKind { Eavesdrop, Replay, Tamper, Impersonate };
std::string adversary_kind_name(AdversaryKind kind);

// In-run adversary. It only ever sees delivered messages; scripted actions
// are built from that knowledge plus the adversary's own keys.
struct AdversaryScript {
    AdversaryKind kind = AdversaryKind::Eavesdrop;
    // trigger: the n-th delivered message of this type (0-based)
    protocol::MsgType target_type = protocol::MsgType::AuthRequest;
    int target_occurrence = 0;
    int64_t action_delay_ms = 10;  // re-injection delay for Replay
    // Tamper: "payload" | "timestamp" | "random" (bit region to flip)
    // Impersonate: "duplicate-uid" | "no-credentials" | "forged-key"
    std::string param;

    void validate() const;
};

struct SimConfig {
    uint64_t seed = 1;
    int n_mu = 1;
    int n_bs = 1;
    int reports_per_session = 3;  // continuous-auth windows after login
    int64_t timeout_ms = 500;
    int64_t mu_start_ms = 1000;   // first MU enrollment; infra registers first
    int64_t mu_spacing_ms = 200;
    ChannelModel channel;
    protocol::ProtocolConfig protocol_cfg;
    scenario::ScenarioConfig scenario_cfg;  // factor windows for the reports
    std::vector<AdversaryScript> adversaries;

    void validate() const;
};

struct SessionRecord {
    std::string session_id;  // MU unique id
    std::string outcome;     // "authenticated" | "rejected" | "denied" | "timeout"
    protocol::Reason reason = protocol::Reason::Ok;
    int64_t latency_ms = -1;  // one-shot request send to response receipt
};

struct SimulationReport {
    std::vector<std::string> events;  // JSON lines in processing order
    std::vector<SessionRecord> sessions;
    std::vector<std::string> registered_uids;          // NCC records at the end
    std::vector<protocol::Reason> adversary_verdicts;  // verify results of injected traffic
    std::vector<std::string> tamper_victims;           // senders whose message was mutated
    std::vector<Bytes> adversary_knowledge;            // serialized observed messages
    std::vector<Bytes> sensitive_material;             // oracle needles for the containment scan

    std::string event_log_text() const;
    std::string summary_csv() const;
    int authenticated_count() const;
};

// Deterministic: identical config (including seed) gives a byte-identical
// event log and summary CSV.
SimulationReport run(const SimConfig& cfg);

// Scripted-attack wrappers. Each runs the scenario with the script added and
// reports the verdicts the injected traffic received, plus whether every
// non-targeted honest session finished exactly as in a script-free baseline.
struct InjectionOutcome {
    std::vector<protocol::Reason> adversary_verdicts;
    bool honest_unaffected = false;
    SimulationReport report;
};
InjectionOutcome inject_replay(const SimConfig& cfg, const AdversaryScript& script);
InjectionOutcome inject_tamper(const SimConfig& cfg, const AdversaryScript& script);
InjectionOutcome inject_impersonation(const SimConfig& cfg, const AdversaryScript& script);

// Fault-injection oracles for the ordered factor checks: the adversary is
// granted every verification input except the factor under test.
protocol::Reason outcome_with_guessed_password(uint64_t seed);
protocol::Reason outcome_with_stolen_helper(uint64_t seed);

// Sensitive byte strings found inside the adversary's knowledge set; empty
// means containment holds. Needles shorter than 8 bytes are skipped.
std::vector<std::string> containment_violations(const SimulationReport& report);

struct PropertyResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// One scenario per claimed security property: mutual authentication, replay
// resistance, tamper resistance, impersonation resistance, eavesdropping
// containment. Every result must pass.
std::vector<PropertyResult> run_security_properties(uint64_t seed);

}  // namespace atmas::sim
