#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "atmas/scenario/geometry.hpp"
#include "atmas/scenario/mobility.hpp"
#include "atmas/scenario/traffic.hpp"

namespace atmas::scenario {

// The nine per-window behavioral and spatial factors.
struct FactorVector {
    double f1_traffic_volume = 0.0;  // bytes in window
    int f2_service_type = 0;         // ServiceType code
    double f3_uplink_rate = 0.0;     // peak bytes/s
    double f4_sinuosity = 1.0;       // [1, 100]
    int f5_bs_index = 0;
    double f6_bs_distance_km = 0.0;
    Vec2 f7_position{};                  // km
    double f8_heading_azimuth_deg = 0.0;  // [0, 360)
    double f9_elevation_deg = 90.0;       // (0, 90], at the serving BS
};

enum class WindowLabel : int { Legitimate = 0, Spoof = 1 };

struct LabeledWindow {
    int mu_id = 0;
    int window_index = 0;
    FactorVector factors;
    WindowLabel label = WindowLabel::Legitimate;
};

// World parameters plus the per-MU profile draw ranges. Everything that
// shapes a dataset lives here and round-trips through the config file.
struct ScenarioConfig {
    double satellite_altitude_km = 20000.0;
    double beam_half_angle_deg = 11.64;
    double bs_coverage_km = 20.0;
    double bs_pitch_km = 20.0;
    double region_radius_km = 60.0;  // MU home positions drawn in this disc
    Vec2 subsatellite_point{1000.0, 0.0};

    double window_s = 30.0;
    double sample_hz = 1.0;

    double speed_min_kmh = 3.0;
    double speed_max_kmh = 50.0;
    double speed_sd_frac = 0.15;
    double turn_sd_min_deg = 15.0;
    double turn_sd_max_deg = 50.0;
    // Short legs put several turns inside a 30 s window so the realized
    // sinuosity actually reflects the profile's turn rate.
    double leg_mean_duration_s = 2.5;
    double roam_sd_km = 2.5;  // per-window start jitter around home

    // Spoofer divergence knob: scales speed, turn rate, and traffic means by
    // (1 + divergence); shifts the home by divergence * spoof_home_shift_km;
    // blends the service mix toward a rotated one with weight divergence.
    double divergence = 0.4;
    double spoof_home_shift_km = 12.0;

    TrafficModel traffic;

    void validate() const;
    Geometry build_geometry() const;
};

struct Dataset {
    std::vector<LabeledWindow> rows;
};

// Deterministic function of (cfg, n_mu, n_windows, illegal_fraction, seed);
// per-MU seed streams make the result independent of scheduling. The default
// entry point parallelizes across MUs; the serial variant is the reference
// implementation and must produce identical rows.
Dataset generate_dataset(const ScenarioConfig& cfg, int n_mu, int n_windows,
                         double illegal_fraction, uint64_t seed);
Dataset generate_dataset_serial(const ScenarioConfig& cfg, int n_mu, int n_windows,
                                double illegal_fraction, uint64_t seed);

// Resolved per-MU generating profiles, exposed for enrollment flows that need
// extra windows from a specific profile.
struct MuProfiles {
    MobilityProfile legit_mobility;
    MobilityProfile spoof_mobility;
    std::array<double, 3> legit_mix;
    std::array<double, 3> spoof_mix;
    TrafficModel legit_traffic;
    TrafficModel spoof_traffic;
};

MuProfiles make_mu_profiles(const ScenarioConfig& cfg, uint64_t seed, int mu_id);
LabeledWindow make_window(const ScenarioConfig& cfg, const Geometry& geom,
                          const MuProfiles& profiles, int mu_id, int window_index,
                          WindowLabel label, uint64_t seed);

// Throws std::domain_error describing the first violated factor bound.
void validate_factors(const FactorVector& f, const ScenarioConfig& cfg);

void write_csv(std::ostream& os, const Dataset& ds);
std::string to_csv(const Dataset& ds);

}  // namespace atmas::scenario
