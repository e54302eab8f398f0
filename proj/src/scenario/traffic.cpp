#include "atmas/scenario/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace atmas::scenario {

std::string service_name(ServiceType s) {
    switch (s) {
        case ServiceType::Conversational: return "conversational";
        case ServiceType::Streaming: return "streaming";
        case ServiceType::Interactive: return "interactive";
    }
    throw std::invalid_argument("unknown service type");
}

ServiceType service_from_code(int code) {
    if (code < 0 || code >= kNumServiceTypes)
        throw std::invalid_argument("service code out of range");
    return static_cast<ServiceType>(code);
}

namespace {

// Peak is reported as bytes per second over one-second bins; the final bin
// may be fractional when the window is not an integer number of seconds.
double bin_width(int i, double window_s) { return std::min(1.0, window_s - i); }

TrafficSample conversational(double window_s, Rng& rng, const TrafficModel& m) {
    const int n = static_cast<int>(std::ceil(window_s - 1e-9));
    double vol = 0.0, peak = 0.0;
    for (int i = 0; i < n; ++i) {
        const double rate = std::max(
            0.0, rng.normal(m.conversational_rate_bps,
                            m.conversational_jitter_frac * m.conversational_rate_bps));
        vol += rate * bin_width(i, window_s);
        peak = std::max(peak, rate);
    }
    return {vol, peak};
}

TrafficSample streaming(double window_s, Rng& rng, const TrafficModel& m) {
    const int n = static_cast<int>(std::ceil(window_s - 1e-9));
    std::vector<double> on_time(static_cast<size_t>(n), 0.0);
    const double p_on = m.streaming_on_mean_s / (m.streaming_on_mean_s + m.streaming_off_mean_s);
    bool on = rng.bernoulli(p_on);  // stationary start state
    double t = 0.0;
    while (t < window_s) {
        const double dur = rng.exponential(on ? m.streaming_on_mean_s : m.streaming_off_mean_s);
        const double end = std::min(window_s, t + dur);
        if (on) {
            for (int i = static_cast<int>(t); i < n && i < end; ++i) {
                const double lo = std::max(t, static_cast<double>(i));
                const double hi = std::min({end, static_cast<double>(i) + 1.0, window_s});
                if (hi > lo) on_time[static_cast<size_t>(i)] += hi - lo;
            }
        }
        t = end;
        on = !on;
    }
    double vol = 0.0, peak = 0.0;
    for (int i = 0; i < n; ++i) {
        vol += on_time[static_cast<size_t>(i)] * m.streaming_on_rate_bps;
        peak = std::max(peak, on_time[static_cast<size_t>(i)] / bin_width(i, window_s) *
                                  m.streaming_on_rate_bps);
    }
    return {vol, peak};
}

TrafficSample interactive(double window_s, Rng& rng, const TrafficModel& m) {
    const int n = static_cast<int>(std::ceil(window_s - 1e-9));
    std::vector<double> mass(static_cast<size_t>(n), 0.0);
    const int count = rng.poisson(m.interactive_req_per_s * window_s);
    double vol = 0.0;
    for (int k = 0; k < count; ++k) {
        const double at = rng.uniform(0.0, window_s);
        const double size = rng.pareto(m.interactive_pareto_shape, m.interactive_pareto_scale_b);
        vol += size;
        mass[std::min<size_t>(static_cast<size_t>(at), static_cast<size_t>(n - 1))] += size;
    }
    double peak = 0.0;
    for (int i = 0; i < n; ++i)
        peak = std::max(peak, mass[static_cast<size_t>(i)] / bin_width(i, window_s));
    return {vol, peak};
}

}  // namespace

TrafficSample generate_traffic(ServiceType service, double window_s, Rng& rng,
                               const TrafficModel& model) {
    if (window_s < 0) throw std::invalid_argument("generate_traffic: negative window");
    if (window_s == 0) return {0.0, 0.0};
    switch (service) {
        case ServiceType::Conversational: return conversational(window_s, rng, model);
        case ServiceType::Streaming: return streaming(window_s, rng, model);
        case ServiceType::Interactive: return interactive(window_s, rng, model);
    }
    throw std::invalid_argument("unknown service type");
}

}  // namespace atmas::scenario
