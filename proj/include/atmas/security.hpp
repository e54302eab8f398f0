#pragma once

#include <stdexcept>
#include <string>

namespace atmas {

enum class SecurityLevel { Low, Medium, High };

// Deny requires spoof_score strictly above the threshold.
inline double deny_threshold(SecurityLevel level) {
    switch (level) {
        case SecurityLevel::Low: return 0.8;
        case SecurityLevel::Medium: return 0.65;
        case SecurityLevel::High: return 0.5;
    }
    throw std::invalid_argument("deny_threshold: bad security level");
}

inline std::string security_level_name(SecurityLevel level) {
    switch (level) {
        case SecurityLevel::Low: return "low";
        case SecurityLevel::Medium: return "medium";
        case SecurityLevel::High: return "high";
    }
    throw std::invalid_argument("security_level_name: bad security level");
}

inline SecurityLevel security_level_from_name(const std::string& name) {
    if (name == "low") return SecurityLevel::Low;
    if (name == "medium") return SecurityLevel::Medium;
    if (name == "high") return SecurityLevel::High;
    throw std::invalid_argument("security_level_from_name: unknown level '" + name + "'");
}

}  // namespace atmas
