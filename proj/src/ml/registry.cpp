#include "atmas/ml/registry.hpp"

#include "json.hpp"

namespace atmas::ml {

using nlohmann::json;

namespace {
constexpr const char* kMagic = "ATMAS-MODEL";
constexpr int kFormatVersion = 1;

json stats_to_json(const PreprocessStats& s) {
    json cols = json::array();
    for (const auto& c : s.columns)
        cols.push_back({{"onehot", c.onehot},
                        {"clip_lo", c.clip_lo},
                        {"clip_hi", c.clip_hi},
                        {"mean", c.mean},
                        {"stddev", c.stddev},
                        {"zmin", c.zmin},
                        {"zmax", c.zmax}});
    return {{"active_factors", s.active_factors}, {"columns", cols}};
}

PreprocessStats stats_from_json(const json& j) {
    PreprocessStats s;
    s.active_factors = j.at("active_factors").get<std::vector<int>>();
    for (const auto& c : j.at("columns")) {
        ColumnStats cs;
        cs.onehot = c.at("onehot").get<bool>();
        cs.clip_lo = c.at("clip_lo").get<double>();
        cs.clip_hi = c.at("clip_hi").get<double>();
        cs.mean = c.at("mean").get<double>();
        cs.stddev = c.at("stddev").get<double>();
        cs.zmin = c.at("zmin").get<double>();
        cs.zmax = c.at("zmax").get<double>();
        s.columns.push_back(cs);
    }
    return s;
}

json forest_to_json(const ForestModel& m) {
    json trees = json::array();
    for (const auto& t : m.trees) {
        json nodes = json::array();
        for (const auto& n : t.nodes)
            nodes.push_back({n.feature, n.threshold, n.left, n.right, n.count0, n.count1});
        trees.push_back(std::move(nodes));
    }
    return {{"n_trees", m.params.n_trees},
            {"max_depth", m.params.max_depth},
            {"feature_subset", m.params.feature_subset},
            {"min_samples_split", m.params.min_samples_split},
            {"active_factors", m.active_factors},
            {"tree_seeds", m.tree_seeds},
            {"n_features", m.n_features},
            {"trees", trees}};
}

ForestModel forest_from_json(const json& j) {
    ForestModel m;
    m.params.n_trees = j.at("n_trees").get<int>();
    m.params.max_depth = j.at("max_depth").get<int>();
    m.params.feature_subset = j.at("feature_subset").get<int>();
    m.params.min_samples_split = j.at("min_samples_split").get<int>();
    m.active_factors = j.at("active_factors").get<std::vector<int>>();
    m.tree_seeds = j.at("tree_seeds").get<std::vector<uint64_t>>();
    m.n_features = j.at("n_features").get<size_t>();
    for (const auto& tj : j.at("trees")) {
        DecisionTree t;
        t.n_features = m.n_features;
        for (const auto& nj : tj) {
            TreeNode n;
            n.feature = nj.at(0).get<int>();
            n.threshold = nj.at(1).get<double>();
            n.left = nj.at(2).get<int>();
            n.right = nj.at(3).get<int>();
            n.count0 = nj.at(4).get<int64_t>();
            n.count1 = nj.at(5).get<int64_t>();
            t.nodes.push_back(n);
        }
        m.trees.push_back(std::move(t));
    }
    return m;
}
}  // namespace

int ModelRegistry::enroll(const std::string& mu_uid,
                          const std::vector<scenario::FactorVector>& legitimate,
                          const std::vector<scenario::FactorVector>& negatives,
                          const EnrollmentConfig& cfg, uint64_t seed) {
    if (legitimate.size() < cfg.min_windows)
        throw EnrollmentDataInsufficient("enroll: " + std::to_string(legitimate.size()) +
                                         " windows, minimum " + std::to_string(cfg.min_windows));
    const std::vector<int> active = all_factors();
    std::vector<scenario::FactorVector> train = legitimate;
    train.insert(train.end(), negatives.begin(), negatives.end());
    std::vector<int> labels(train.size(), 0);
    for (size_t i = legitimate.size(); i < train.size(); ++i) labels[i] = 1;

    EnrolledModel entry;
    entry.stats = fit_preprocess(train, active);

    FeatureMatrix raw(train.size(), encoded_width(active));
    for (size_t r = 0; r < train.size(); ++r) encode_factors(train[r], active, raw.row(r));
    const FeatureMatrix X = apply_preprocess(entry.stats, raw);
    entry.model = train_forest(X, labels, active, cfg.forest, seed);

    auto it = entries_.find(mu_uid);
    entry.version = it == entries_.end() ? 1 : it->second.version + 1;
    entries_[mu_uid] = std::move(entry);
    return entries_[mu_uid].version;
}

bool ModelRegistry::has(const std::string& mu_uid) const { return entries_.count(mu_uid) > 0; }

const EnrolledModel& ModelRegistry::get(const std::string& mu_uid) const {
    auto it = entries_.find(mu_uid);
    if (it == entries_.end()) throw ModelMissing("no enrolled model for " + mu_uid);
    return it->second;
}

AuthDecision ModelRegistry::authenticate_window(const std::string& mu_uid, int window_index,
                                                const scenario::FactorVector& factors,
                                                SecurityLevel level) const {
    const EnrolledModel& entry = get(mu_uid);
    AuthDecision d;
    d.mu_uid = mu_uid;
    d.window_index = window_index;
    d.threshold = deny_threshold(level);
    d.spoof_score = entry.model.predict_score(apply_preprocess(entry.stats, factors));
    d.deny = d.spoof_score > d.threshold;
    return d;
}

std::string ModelRegistry::serialize(const std::string& mu_uid) const {
    const EnrolledModel& entry = get(mu_uid);
    json doc{{"magic", kMagic},
             {"format_version", kFormatVersion},
             {"model_version", entry.version},
             {"stats", stats_to_json(entry.stats)},
             {"forest", forest_to_json(entry.model)}};
    return doc.dump();
}

void ModelRegistry::insert_serialized(const std::string& mu_uid, const std::string& blob) {
    json doc = json::parse(blob);
    if (doc.value("magic", "") != kMagic)
        throw std::runtime_error("model blob: bad magic string");
    if (doc.value("format_version", -1) != kFormatVersion)
        throw std::runtime_error("model blob: unsupported format version");
    EnrolledModel entry;
    entry.version = doc.at("model_version").get<int>();
    entry.stats = stats_from_json(doc.at("stats"));
    entry.model = forest_from_json(doc.at("forest"));
    entries_[mu_uid] = std::move(entry);
}

}  // namespace atmas::ml
