#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace atmas::scenario {

// Local tangent plane coordinates in km. Flat geometry is used for MU/BS
// distances (error < 0.1% at these scales); spherical geometry only enters
// for the satellite elevation and footprint.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

struct BeamOutOfRange : std::domain_error {
    using std::domain_error::domain_error;
};

struct Geometry {
    double earth_radius_km = 6371.0;
    double satellite_altitude_km = 20000.0;
    double beam_half_angle_deg = 11.64;
    double bs_coverage_km = 20.0;
    std::vector<Vec2> bs_positions;

    void validate() const;
};

struct BsAssignment {
    int index;
    double distance_km;
};

// Central angle (degrees) subtended at Earth's centre by the footprint edge,
// from the law of sines applied to the centre / satellite / edge triangle.
// Throws std::domain_error when the beam half-angle misses Earth entirely.
double beam_footprint_central_angle_deg(const Geometry& g);

// Great-circle footprint radius in km.
double beam_footprint_radius_km(const Geometry& g);

// Elevation angle (degrees) of the satellite seen from a site at central
// angle psi from the subsatellite point. psi = 0 is the nadir case, 90 deg.
double elevation_from_central_angle_deg(const Geometry& g, double psi_deg);

// Elevation at a plane position relative to the subsatellite point. Throws
// BeamOutOfRange when the site lies outside the beam footprint.
double compute_elevation(const Geometry& g, Vec2 site, Vec2 subsatellite);

// Nearest base station within coverage; ties break toward the lower index.
// nullopt means no BS within g.bs_coverage_km.
std::optional<BsAssignment> assign_bs(const Geometry& g, Vec2 mu_position);

// Hexagonal lattice of BS sites with the given pitch covering a disc around
// the origin. Row-major order (ascending y, then x) so indices are stable.
std::vector<Vec2> hex_lattice(double pitch_km, double region_radius_km);

}  // namespace atmas::scenario
