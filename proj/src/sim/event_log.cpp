#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "atmas/sim/sim.hpp"

namespace atmas::sim {

std::string adversary_kind_name(AdversaryKind kind) {
    switch (kind) {
        case AdversaryKind::Eavesdrop: return "eavesdrop";
        case AdversaryKind::Replay: return "replay";
        case AdversaryKind::Tamper: return "tamper";
        case AdversaryKind::Impersonate: return "impersonate";
    }
    throw std::invalid_argument("adversary_kind_name: bad kind");
}

std::string SimulationReport::event_log_text() const {
    std::string out;
    for (const auto& line : events) {
        out += line;
        out += '\n';
    }
    return out;
}

std::string SimulationReport::summary_csv() const {
    std::ostringstream os;
    os << "session_id,outcome,reason,latency_ms\n";
    for (const auto& s : sessions) {
        os << s.session_id << ',' << s.outcome << ',' << protocol::reason_name(s.reason) << ','
           << s.latency_ms << '\n';
    }
    return os.str();
}

int SimulationReport::authenticated_count() const {
    return static_cast<int>(std::count_if(sessions.begin(), sessions.end(), [](const auto& s) {
        return s.outcome == "authenticated";
    }));
}

std::vector<std::string> containment_violations(const SimulationReport& report) {
    std::vector<std::string> found;
    for (size_t n = 0; n < report.sensitive_material.size(); ++n) {
        const Bytes& needle = report.sensitive_material[n];
        if (needle.size() < 8) continue;
        for (size_t k = 0; k < report.adversary_knowledge.size(); ++k) {
            const Bytes& blob = report.adversary_knowledge[k];
            auto it = std::search(blob.begin(), blob.end(), needle.begin(), needle.end());
            if (it != blob.end()) {
                found.push_back("secret " + std::to_string(n) + " visible in observed message " +
                                std::to_string(k));
                break;
            }
        }
    }
    return found;
}

}  // namespace atmas::sim
