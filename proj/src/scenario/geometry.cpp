#include "atmas/scenario/geometry.hpp"

#include <limits>

namespace atmas::scenario {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double deg2rad(double d) { return d * kPi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / kPi; }
}  // namespace

void Geometry::validate() const {
    if (satellite_altitude_km <= 0)
        throw std::invalid_argument("geometry: altitude must be positive");
    if (beam_half_angle_deg <= 0 || beam_half_angle_deg >= 90)
        throw std::invalid_argument("geometry: beam half-angle must be in (0, 90)");
    if (bs_coverage_km <= 0)
        throw std::invalid_argument("geometry: BS coverage must be positive");
}

double beam_footprint_central_angle_deg(const Geometry& g) {
    g.validate();
    const double eta = deg2rad(g.beam_half_angle_deg);
    const double ratio = (g.earth_radius_km + g.satellite_altitude_km) * std::sin(eta) /
                         g.earth_radius_km;
    if (ratio > 1.0)
        throw std::domain_error("beam half-angle misses Earth");
    // The edge point sees the satellite above the horizon, which selects the
    // obtuse root of the law of sines.
    const double site_angle = kPi - std::asin(ratio);
    const double psi = kPi - eta - site_angle;
    return rad2deg(psi);
}

double beam_footprint_radius_km(const Geometry& g) {
    return g.earth_radius_km * deg2rad(beam_footprint_central_angle_deg(g));
}

double elevation_from_central_angle_deg(const Geometry& g, double psi_deg) {
    if (psi_deg < 0)
        throw std::domain_error("central angle must be non-negative");
    if (psi_deg == 0.0) return 90.0;
    const double psi = deg2rad(psi_deg);
    const double k = g.earth_radius_km / (g.earth_radius_km + g.satellite_altitude_km);
    return rad2deg(std::atan((std::cos(psi) - k) / std::sin(psi)));
}

double compute_elevation(const Geometry& g, Vec2 site, Vec2 subsatellite) {
    const double psi_deg = rad2deg(distance(site, subsatellite) / g.earth_radius_km);
    // Tolerate rounding right at the footprint edge.
    if (psi_deg > beam_footprint_central_angle_deg(g) * (1.0 + 1e-12))
        throw BeamOutOfRange("site outside beam footprint");
    return elevation_from_central_angle_deg(g, psi_deg);
}

std::optional<BsAssignment> assign_bs(const Geometry& g, Vec2 mu_position) {
    if (g.bs_positions.empty())
        throw std::invalid_argument("assign_bs: no base stations configured");
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < g.bs_positions.size(); ++i) {
        double d = distance(mu_position, g.bs_positions[i]);
        if (d < best_d) {  // strict: earlier index wins ties
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    if (best_d > g.bs_coverage_km) return std::nullopt;
    return BsAssignment{best, best_d};
}

std::vector<Vec2> hex_lattice(double pitch_km, double region_radius_km) {
    if (pitch_km <= 0 || region_radius_km <= 0)
        throw std::invalid_argument("hex_lattice: pitch and radius must be positive");
    std::vector<Vec2> sites;
    const double row_h = pitch_km * std::sqrt(3.0) / 2.0;
    const int jmax = static_cast<int>(std::ceil(region_radius_km / row_h));
    const int imax = static_cast<int>(std::ceil(region_radius_km / pitch_km)) + 1;
    for (int j = -jmax; j <= jmax; ++j) {
        const double y = j * row_h;
        const double x_off = (j % 2 != 0) ? pitch_km / 2.0 : 0.0;
        for (int i = -imax; i <= imax; ++i) {
            Vec2 p{x_off + i * pitch_km, y};
            if (norm(p) <= region_radius_km) sites.push_back(p);
        }
    }
    return sites;
}

}  // namespace atmas::scenario
