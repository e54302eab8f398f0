#include <stdexcept>

#include "sim_internal.hpp"

namespace atmas::sim {

void ChannelModel::validate() const {
    if (mu_bs_delay_ms < 0 || bs_sat_delay_ms < 0 || sat_ncc_delay_ms < 0)
        throw std::invalid_argument("ChannelModel: negative base delay");
    if (jitter_ms < 0) throw std::invalid_argument("ChannelModel: negative jitter");
    if (!(loss_prob >= 0.0 && loss_prob <= 1.0))
        throw std::invalid_argument("ChannelModel: loss_prob outside [0, 1]");
}

namespace detail {

// Position of a role in the MU - BS - Satellite - NCC chain.
static int tier(protocol::Role r) {
    switch (r) {
        case protocol::Role::MU: return 0;
        case protocol::Role::BS: return 1;
        case protocol::Role::Satellite: return 2;
        case protocol::Role::NCC: return 3;
    }
    throw std::invalid_argument("route: bad role");
}

std::vector<Hop> route(protocol::Role from, protocol::Role to, const ChannelModel& ch) {
    const Hop links[3] = {
        {"mu-bs", ch.mu_bs_delay_ms},
        {"bs-sat", ch.bs_sat_delay_ms},
        {"sat-ncc", ch.sat_ncc_delay_ms},
    };
    int a = tier(from);
    int b = tier(to);
    if (a == b) throw std::invalid_argument("route: no link between equal tiers");
    std::vector<Hop> hops;
    if (a < b)
        for (int i = a; i < b; ++i) hops.push_back(links[i]);
    else
        for (int i = a - 1; i >= b; --i) hops.push_back(links[i]);
    return hops;
}

}  // namespace detail
}  // namespace atmas::sim
