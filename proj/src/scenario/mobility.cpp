#include "atmas/scenario/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace atmas::scenario {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSinuosityCap = 100.0;
constexpr double kMinChordKm = 0.001;  // 1 m

double wrap_deg(double a) {
    a = std::fmod(a, 360.0);
    return a < 0 ? a + 360.0 : a;
}
}  // namespace

Trajectory generate_trajectory(const MobilityProfile& profile, double duration_s, Rng& rng,
                               double sample_hz) {
    if (duration_s <= 0) throw std::invalid_argument("generate_trajectory: duration must be > 0");
    if (sample_hz <= 0) throw std::invalid_argument("generate_trajectory: sample rate must be > 0");

    const double dt = 1.0 / sample_hz;
    const int n_steps = static_cast<int>(std::floor(duration_s * sample_hz + 1e-9));

    double heading = rng.uniform(0.0, 360.0);
    double speed = std::max(0.0, rng.normal(profile.mean_speed_kmh, profile.speed_sd_kmh));
    double leg_left = std::max(1.0, rng.exponential(profile.leg_mean_duration_s));

    Trajectory out;
    out.samples.reserve(static_cast<size_t>(n_steps) + 1);
    Vec2 pos = profile.start;
    out.samples.push_back({0.0, pos, speed});
    for (int k = 1; k <= n_steps; ++k) {
        const double step_km = speed / 3600.0 * dt;
        const double az = heading * kPi / 180.0;
        pos.x += step_km * std::sin(az);
        pos.y += step_km * std::cos(az);
        out.samples.push_back({k * dt, pos, speed});
        leg_left -= dt;
        if (leg_left <= 0) {
            heading = wrap_deg(heading + rng.normal(0.0, profile.turn_sd_deg));
            speed = std::max(0.0, rng.normal(profile.mean_speed_kmh, profile.speed_sd_kmh));
            leg_left = std::max(1.0, rng.exponential(profile.leg_mean_duration_s));
        }
    }
    return out;
}

double compute_sinuosity(const std::vector<Vec2>& points) {
    if (points.size() < 2) return 1.0;
    double path = 0.0;
    for (size_t i = 1; i < points.size(); ++i) path += distance(points[i - 1], points[i]);
    if (path <= 1e-12) return 1.0;  // stationary window, trivially straight
    const double chord = distance(points.front(), points.back());
    if (chord < kMinChordKm) return kSinuosityCap;
    return std::clamp(path / chord, 1.0, kSinuosityCap);
}

double compute_sinuosity(const Trajectory& trajectory) {
    std::vector<Vec2> pts;
    pts.reserve(trajectory.samples.size());
    for (const auto& s : trajectory.samples) pts.push_back(s.position);
    return compute_sinuosity(pts);
}

double compute_heading_azimuth(Vec2 prev, Vec2 curr, double carry_deg) {
    const Vec2 d = curr - prev;
    if (norm(d) < 1e-12) return carry_deg;
    return wrap_deg(std::atan2(d.x, d.y) * 180.0 / kPi);
}

}  // namespace atmas::scenario
