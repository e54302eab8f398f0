#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <stdexcept>

#include "atmas/config.hpp"

namespace atmas::config {

using json = nlohmann::json;

namespace {

template <typename T>
void opt(const json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* ctx) {
    if (!j.is_object()) throw std::invalid_argument(std::string("config: ") + ctx +
                                                    " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* k) { return it.key() == k; });
        if (!known)
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + ctx);
    }
}

json traffic_to_json(const scenario::TrafficModel& t) {
    return json{{"conversational_rate_bps", t.conversational_rate_bps},
                {"conversational_jitter_frac", t.conversational_jitter_frac},
                {"streaming_on_rate_bps", t.streaming_on_rate_bps},
                {"streaming_on_mean_s", t.streaming_on_mean_s},
                {"streaming_off_mean_s", t.streaming_off_mean_s},
                {"interactive_req_per_s", t.interactive_req_per_s},
                {"interactive_pareto_shape", t.interactive_pareto_shape},
                {"interactive_pareto_scale_b", t.interactive_pareto_scale_b}};
}

scenario::TrafficModel traffic_from_json(const json& j) {
    check_keys(j,
               {"conversational_rate_bps", "conversational_jitter_frac", "streaming_on_rate_bps",
                "streaming_on_mean_s", "streaming_off_mean_s", "interactive_req_per_s",
                "interactive_pareto_shape", "interactive_pareto_scale_b"},
               "traffic");
    scenario::TrafficModel t;
    opt(j, "conversational_rate_bps", t.conversational_rate_bps);
    opt(j, "conversational_jitter_frac", t.conversational_jitter_frac);
    opt(j, "streaming_on_rate_bps", t.streaming_on_rate_bps);
    opt(j, "streaming_on_mean_s", t.streaming_on_mean_s);
    opt(j, "streaming_off_mean_s", t.streaming_off_mean_s);
    opt(j, "interactive_req_per_s", t.interactive_req_per_s);
    opt(j, "interactive_pareto_shape", t.interactive_pareto_shape);
    opt(j, "interactive_pareto_scale_b", t.interactive_pareto_scale_b);
    return t;
}

json forest_to_json(const ml::ForestHyperparams& f) {
    return json{{"n_trees", f.n_trees},
                {"max_depth", f.max_depth},
                {"feature_subset", f.feature_subset},
                {"min_samples_split", f.min_samples_split}};
}

ml::ForestHyperparams forest_from_json(const json& j) {
    check_keys(j, {"n_trees", "max_depth", "feature_subset", "min_samples_split"}, "forest");
    ml::ForestHyperparams f;
    opt(j, "n_trees", f.n_trees);
    opt(j, "max_depth", f.max_depth);
    opt(j, "feature_subset", f.feature_subset);
    opt(j, "min_samples_split", f.min_samples_split);
    return f;
}

std::string group_name(const crypto::GroupParams& g) {
    if (g.p == crypto::GroupParams::toy().p) return "toy";
    if (g.p == crypto::GroupParams::sim64().p) return "sim64";
    if (g.p == crypto::GroupParams::modp2048().p) return "modp2048";
    return "custom";
}

crypto::GroupParams group_from_json(const json& j) {
    if (j.is_string()) {
        std::string name = j.get<std::string>();
        if (name == "toy") return crypto::GroupParams::toy();
        if (name == "sim64") return crypto::GroupParams::sim64();
        if (name == "modp2048") return crypto::GroupParams::modp2048();
        throw std::invalid_argument("config: unknown group '" + name + "'");
    }
    check_keys(j, {"p", "g", "q"}, "group");
    crypto::GroupParams g;
    g.p = crypto::bigint_from_string(j.at("p").get<std::string>());
    g.g = crypto::bigint_from_string(j.at("g").get<std::string>());
    g.q = crypto::bigint_from_string(j.at("q").get<std::string>());
    return g;
}

json protocol_to_json(const protocol::ProtocolConfig& p) {
    json j{{"group", group_name(p.group)},
           {"threshold_ms", p.threshold_ms},
           {"fuzzy_repetition", p.fuzzy_repetition},
           {"bio_bits", p.bio_bits},
           {"nonce_cache_capacity", p.nonce_cache_capacity}};
    if (j["group"] == "custom")
        j["group"] = json{{"p", crypto::bigint_to_string(p.group.p)},
                          {"g", crypto::bigint_to_string(p.group.g)},
                          {"q", crypto::bigint_to_string(p.group.q)}};
    return j;
}

protocol::ProtocolConfig protocol_from_json(const json& j) {
    check_keys(j, {"group", "threshold_ms", "fuzzy_repetition", "bio_bits",
                   "nonce_cache_capacity"},
               "protocol");
    protocol::ProtocolConfig p;
    if (j.contains("group")) p.group = group_from_json(j.at("group"));
    opt(j, "threshold_ms", p.threshold_ms);
    opt(j, "fuzzy_repetition", p.fuzzy_repetition);
    opt(j, "bio_bits", p.bio_bits);
    opt(j, "nonce_cache_capacity", p.nonce_cache_capacity);
    return p;
}

json channel_to_json(const sim::ChannelModel& c) {
    return json{{"mu_bs_delay_ms", c.mu_bs_delay_ms},
                {"bs_sat_delay_ms", c.bs_sat_delay_ms},
                {"sat_ncc_delay_ms", c.sat_ncc_delay_ms},
                {"jitter_ms", c.jitter_ms},
                {"loss_prob", c.loss_prob}};
}

sim::ChannelModel channel_from_json(const json& j) {
    check_keys(j, {"mu_bs_delay_ms", "bs_sat_delay_ms", "sat_ncc_delay_ms", "jitter_ms",
                   "loss_prob"},
               "channel");
    sim::ChannelModel c;
    opt(j, "mu_bs_delay_ms", c.mu_bs_delay_ms);
    opt(j, "bs_sat_delay_ms", c.bs_sat_delay_ms);
    opt(j, "sat_ncc_delay_ms", c.sat_ncc_delay_ms);
    opt(j, "jitter_ms", c.jitter_ms);
    opt(j, "loss_prob", c.loss_prob);
    return c;
}

sim::AdversaryKind adversary_kind_from_name(const std::string& name) {
    if (name == "eavesdrop") return sim::AdversaryKind::Eavesdrop;
    if (name == "replay") return sim::AdversaryKind::Replay;
    if (name == "tamper") return sim::AdversaryKind::Tamper;
    if (name == "impersonate") return sim::AdversaryKind::Impersonate;
    throw std::invalid_argument("config: unknown adversary kind '" + name + "'");
}

protocol::MsgType msg_type_from_name(const std::string& name) {
    for (int t = 0; t < 8; ++t) {
        auto mt = static_cast<protocol::MsgType>(t);
        if (protocol::msg_type_name(mt) == name) return mt;
    }
    throw std::invalid_argument("config: unknown message type '" + name + "'");
}

json adversary_to_json(const sim::AdversaryScript& s) {
    return json{{"kind", sim::adversary_kind_name(s.kind)},
                {"target_type", protocol::msg_type_name(s.target_type)},
                {"target_occurrence", s.target_occurrence},
                {"action_delay_ms", s.action_delay_ms},
                {"param", s.param}};
}

sim::AdversaryScript adversary_from_json(const json& j) {
    check_keys(j, {"kind", "target_type", "target_occurrence", "action_delay_ms", "param"},
               "adversary");
    sim::AdversaryScript s;
    if (j.contains("kind")) s.kind = adversary_kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("target_type"))
        s.target_type = msg_type_from_name(j.at("target_type").get<std::string>());
    opt(j, "target_occurrence", s.target_occurrence);
    opt(j, "action_delay_ms", s.action_delay_ms);
    opt(j, "param", s.param);
    return s;
}

}  // namespace

json scenario_to_json(const scenario::ScenarioConfig& cfg) {
    return json{{"satellite_altitude_km", cfg.satellite_altitude_km},
                {"beam_half_angle_deg", cfg.beam_half_angle_deg},
                {"bs_coverage_km", cfg.bs_coverage_km},
                {"bs_pitch_km", cfg.bs_pitch_km},
                {"region_radius_km", cfg.region_radius_km},
                {"subsatellite_point", {cfg.subsatellite_point.x, cfg.subsatellite_point.y}},
                {"window_s", cfg.window_s},
                {"sample_hz", cfg.sample_hz},
                {"speed_min_kmh", cfg.speed_min_kmh},
                {"speed_max_kmh", cfg.speed_max_kmh},
                {"speed_sd_frac", cfg.speed_sd_frac},
                {"turn_sd_min_deg", cfg.turn_sd_min_deg},
                {"turn_sd_max_deg", cfg.turn_sd_max_deg},
                {"leg_mean_duration_s", cfg.leg_mean_duration_s},
                {"roam_sd_km", cfg.roam_sd_km},
                {"divergence", cfg.divergence},
                {"spoof_home_shift_km", cfg.spoof_home_shift_km},
                {"traffic", traffic_to_json(cfg.traffic)}};
}

scenario::ScenarioConfig scenario_from_json(const json& j) {
    check_keys(j,
               {"satellite_altitude_km", "beam_half_angle_deg", "bs_coverage_km", "bs_pitch_km",
                "region_radius_km", "subsatellite_point", "window_s", "sample_hz",
                "speed_min_kmh", "speed_max_kmh", "speed_sd_frac", "turn_sd_min_deg",
                "turn_sd_max_deg", "leg_mean_duration_s", "roam_sd_km", "divergence",
                "spoof_home_shift_km", "traffic"},
               "scenario");
    scenario::ScenarioConfig cfg;
    opt(j, "satellite_altitude_km", cfg.satellite_altitude_km);
    opt(j, "beam_half_angle_deg", cfg.beam_half_angle_deg);
    opt(j, "bs_coverage_km", cfg.bs_coverage_km);
    opt(j, "bs_pitch_km", cfg.bs_pitch_km);
    opt(j, "region_radius_km", cfg.region_radius_km);
    if (j.contains("subsatellite_point")) {
        auto pt = j.at("subsatellite_point");
        if (!pt.is_array() || pt.size() != 2)
            throw std::invalid_argument("config: subsatellite_point must be [x, y]");
        cfg.subsatellite_point = {pt[0].get<double>(), pt[1].get<double>()};
    }
    opt(j, "window_s", cfg.window_s);
    opt(j, "sample_hz", cfg.sample_hz);
    opt(j, "speed_min_kmh", cfg.speed_min_kmh);
    opt(j, "speed_max_kmh", cfg.speed_max_kmh);
    opt(j, "speed_sd_frac", cfg.speed_sd_frac);
    opt(j, "turn_sd_min_deg", cfg.turn_sd_min_deg);
    opt(j, "turn_sd_max_deg", cfg.turn_sd_max_deg);
    opt(j, "leg_mean_duration_s", cfg.leg_mean_duration_s);
    opt(j, "roam_sd_km", cfg.roam_sd_km);
    opt(j, "divergence", cfg.divergence);
    opt(j, "spoof_home_shift_km", cfg.spoof_home_shift_km);
    if (j.contains("traffic")) cfg.traffic = traffic_from_json(j.at("traffic"));
    cfg.validate();
    return cfg;
}

std::string experiment_kind_name(eval::ExperimentKind kind) {
    switch (kind) {
        case eval::ExperimentKind::IllegalAccessSweep: return "illegal-access-sweep";
        case eval::ExperimentKind::FactorCountSweep: return "factor-count-sweep";
        case eval::ExperimentKind::FactorComboSweep: return "factor-combo-sweep";
        case eval::ExperimentKind::ProtocolSuite: return "protocol-suite";
    }
    throw std::invalid_argument("experiment_kind_name: bad kind");
}

eval::ExperimentKind experiment_kind_from_name(const std::string& name) {
    for (int k = 0; k < 4; ++k) {
        auto kind = static_cast<eval::ExperimentKind>(k);
        if (experiment_kind_name(kind) == name) return kind;
    }
    throw std::invalid_argument("config: unknown experiment kind '" + name + "'");
}

json experiment_to_json(const eval::ExperimentSpec& spec) {
    json algorithms = json::array();
    for (auto a : spec.algorithms) algorithms.push_back(ml::algorithm_name(a));
    return json{{"kind", experiment_kind_name(spec.kind)},
                {"scenario", scenario_to_json(spec.scenario)},
                {"n_mu", spec.n_mu},
                {"n_windows", spec.n_windows},
                {"algorithms", algorithms},
                {"illegal_fractions", spec.illegal_fractions},
                {"fixed_fraction", spec.fixed_fraction},
                {"seeds", spec.seeds},
                {"forest", forest_to_json(spec.forest)},
                {"train_fraction", spec.train_fraction}};
}

eval::ExperimentSpec experiment_from_json(const json& j) {
    check_keys(j,
               {"kind", "scenario", "n_mu", "n_windows", "algorithms", "illegal_fractions",
                "fixed_fraction", "seeds", "forest", "train_fraction"},
               "experiment");
    eval::ExperimentSpec spec;
    if (j.contains("kind")) spec.kind = experiment_kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("scenario")) spec.scenario = scenario_from_json(j.at("scenario"));
    opt(j, "n_mu", spec.n_mu);
    opt(j, "n_windows", spec.n_windows);
    if (j.contains("algorithms")) {
        spec.algorithms.clear();
        for (const auto& name : j.at("algorithms"))
            spec.algorithms.push_back(ml::algorithm_from_name(name.get<std::string>()));
    }
    opt(j, "illegal_fractions", spec.illegal_fractions);
    opt(j, "fixed_fraction", spec.fixed_fraction);
    opt(j, "seeds", spec.seeds);
    if (j.contains("forest")) spec.forest = forest_from_json(j.at("forest"));
    opt(j, "train_fraction", spec.train_fraction);
    spec.validate();
    return spec;
}

json sim_to_json(const sim::SimConfig& cfg) {
    json adversaries = json::array();
    for (const auto& s : cfg.adversaries) adversaries.push_back(adversary_to_json(s));
    return json{{"seed", cfg.seed},
                {"n_mu", cfg.n_mu},
                {"n_bs", cfg.n_bs},
                {"reports_per_session", cfg.reports_per_session},
                {"timeout_ms", cfg.timeout_ms},
                {"mu_start_ms", cfg.mu_start_ms},
                {"mu_spacing_ms", cfg.mu_spacing_ms},
                {"channel", channel_to_json(cfg.channel)},
                {"protocol", protocol_to_json(cfg.protocol_cfg)},
                {"scenario", scenario_to_json(cfg.scenario_cfg)},
                {"adversaries", adversaries}};
}

sim::SimConfig sim_from_json(const json& j) {
    check_keys(j,
               {"seed", "n_mu", "n_bs", "reports_per_session", "timeout_ms", "mu_start_ms",
                "mu_spacing_ms", "channel", "protocol", "scenario", "adversaries"},
               "sim");
    sim::SimConfig cfg;
    opt(j, "seed", cfg.seed);
    opt(j, "n_mu", cfg.n_mu);
    opt(j, "n_bs", cfg.n_bs);
    opt(j, "reports_per_session", cfg.reports_per_session);
    opt(j, "timeout_ms", cfg.timeout_ms);
    opt(j, "mu_start_ms", cfg.mu_start_ms);
    opt(j, "mu_spacing_ms", cfg.mu_spacing_ms);
    if (j.contains("channel")) cfg.channel = channel_from_json(j.at("channel"));
    if (j.contains("protocol")) cfg.protocol_cfg = protocol_from_json(j.at("protocol"));
    if (j.contains("scenario")) cfg.scenario_cfg = scenario_from_json(j.at("scenario"));
    if (j.contains("adversaries")) {
        for (const auto& s : j.at("adversaries"))
            cfg.adversaries.push_back(adversary_from_json(s));
    }
    cfg.validate();
    return cfg;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: '" + path + "': " + e.what());
    }
}

}  // namespace atmas::config
