#pragma once

#include <string>

#include "atmas/rng.hpp"

namespace atmas::scenario {

enum class ServiceType : int {
    Conversational = 0,
    Streaming = 1,
    Interactive = 2,
};

constexpr int kNumServiceTypes = 3;

std::string service_name(ServiceType s);
ServiceType service_from_code(int code);

// Per-service traffic shapes. Published in config so experiments can be
// reproduced; kB means 1000 bytes throughout.
struct TrafficModel {
    // constant-rate stream with Gaussian jitter per second
    double conversational_rate_bps = 2000.0;  // bytes/s
    double conversational_jitter_frac = 0.10;
    // on/off bursts with exponential state durations
    double streaming_on_rate_bps = 50000.0;
    double streaming_on_mean_s = 8.0;
    double streaming_off_mean_s = 2.0;
    // Poisson request arrivals with Pareto-tailed sizes
    double interactive_req_per_s = 0.5;
    double interactive_pareto_shape = 1.5;
    double interactive_pareto_scale_b = 5000.0;  // bytes
};

struct TrafficSample {
    double volume_bytes;     // total uplink bytes in the window
    double uplink_rate_bps;  // peak one-second uplink throughput, bytes/s
};

// window_s = 0 yields {0, 0}.
TrafficSample generate_traffic(ServiceType service, double window_s, Rng& rng,
                               const TrafficModel& model = {});

}  // namespace atmas::scenario
