#pragma once

#include <vector>

#include "atmas/rng.hpp"
#include "atmas/scenario/geometry.hpp"

namespace atmas::scenario {

// Piecewise waypoint motion: legs of exponential duration, each with its own
// speed draw and a heading turned by a Gaussian step at the leg boundary.
struct MobilityProfile {
    Vec2 start{0.0, 0.0};
    double mean_speed_kmh = 5.0;
    double speed_sd_kmh = 1.0;
    double turn_sd_deg = 20.0;
    double leg_mean_duration_s = 60.0;
};

struct TrajectorySample {
    double t_s;
    Vec2 position;
    double speed_kmh;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
};

Trajectory generate_trajectory(const MobilityProfile& profile, double duration_s, Rng& rng,
                               double sample_hz = 1.0);

// Path length over chord. 1.0 for fewer than two points or zero path length;
// forced to the cap of 100 when the chord is under a metre.
double compute_sinuosity(const std::vector<Vec2>& points);
double compute_sinuosity(const Trajectory& trajectory);

// Clockwise angle from north (+y) in [0, 360). Identical points carry the
// previous heading forward.
double compute_heading_azimuth(Vec2 prev, Vec2 curr, double carry_deg = 0.0);

}  // namespace atmas::scenario
