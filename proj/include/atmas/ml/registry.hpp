#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "atmas/ml/forest.hpp"
#include "atmas/ml/preprocess.hpp"
#include "atmas/security.hpp"

namespace atmas::ml {

struct EnrollmentDataInsufficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelMissing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using atmas::deny_threshold;
using atmas::SecurityLevel;

struct AuthDecision {
    std::string mu_uid;
    int window_index = 0;
    double spoof_score = 0.0;
    double threshold = 1.0;
    bool deny = false;
};

struct EnrollmentConfig {
    size_t min_windows = 200;
    ForestHyperparams forest;
};

struct EnrolledModel {
    int version = 0;
    PreprocessStats stats;
    ForestModel model;
};

// Per-MU behavioral models held by the NCC. A fresh MU has no observed
// spoofers, so enrollment negatives come from other MUs' windows plus the
// configured adversary profile.
class ModelRegistry {
public:
    // Returns the new model version; re-enrollment replaces and increments.
    int enroll(const std::string& mu_uid, const std::vector<scenario::FactorVector>& legitimate,
               const std::vector<scenario::FactorVector>& negatives, const EnrollmentConfig& cfg,
               uint64_t seed);

    bool has(const std::string& mu_uid) const;
    const EnrolledModel& get(const std::string& mu_uid) const;  // throws ModelMissing
    size_t size() const { return entries_.size(); }

    AuthDecision authenticate_window(const std::string& mu_uid, int window_index,
                                     const scenario::FactorVector& factors,
                                     SecurityLevel level) const;

    // Self-describing JSON document (magic string + format version) per MU.
    std::string serialize(const std::string& mu_uid) const;
    void insert_serialized(const std::string& mu_uid, const std::string& blob);

private:
    std::map<std::string, EnrolledModel> entries_;
};

}  // namespace atmas::ml
