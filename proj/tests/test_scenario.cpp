#include "doctest.h"

#include <cmath>
#include <set>

#include "atmas/scenario/dataset.hpp"
#include "atmas/scenario/geometry.hpp"
#include "atmas/scenario/mobility.hpp"
#include "atmas/scenario/traffic.hpp"

using namespace atmas;
using namespace atmas::scenario;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Independent law-of-sines oracle for the footprint edge. Returns the central
// angle and the edge elevation, both in degrees.
struct EdgeOracle {
    double psi_deg;
    double elevation_deg;
};

EdgeOracle edge_oracle(double half_angle_deg, double altitude_km, double R_km) {
    const double eta = half_angle_deg * kPi / 180.0;
    const double site = kPi - std::asin((R_km + altitude_km) * std::sin(eta) / R_km);
    const double psi = kPi - eta - site;
    return {psi * 180.0 / kPi, site * 180.0 / kPi - 90.0};
}
}  // namespace

TEST_CASE("beam_footprint_radius") {
    Geometry g;

    SUBCASE("matches the law-of-sines oracle for the default beam") {
        const EdgeOracle oracle = edge_oracle(11.64, 20000.0, 6371.0);
        CHECK(oracle.psi_deg == doctest::Approx(45.0).epsilon(0.001));
        const double expected = 6371.0 * oracle.psi_deg * kPi / 180.0;
        CHECK(beam_footprint_radius_km(g) ==
              doctest::Approx(expected).epsilon(1e-9));
        CHECK(beam_footprint_radius_km(g) == doctest::Approx(5.00e3).epsilon(0.01));
    }
    SUBCASE("radius shrinks to zero with the half-angle") {
        g.beam_half_angle_deg = 1e-6;
        CHECK(beam_footprint_radius_km(g) < 0.05);
    }
    SUBCASE("wide beam misses Earth") {
        g.beam_half_angle_deg = 80.0;
        CHECK_THROWS_AS(beam_footprint_radius_km(g), std::domain_error);
    }
}

TEST_CASE("compute_elevation") {
    Geometry g;

    SUBCASE("nadir site sees the satellite at 90 degrees") {
        CHECK(compute_elevation(g, {0, 0}, {0, 0}) == doctest::Approx(90.0).epsilon(1e-12));
    }
    SUBCASE("central angle of 10 degrees matches the spherical oracle") {
        const double k = 6371.0 / 26371.0;
        const double psi = 10.0 * kPi / 180.0;
        const double oracle = std::atan2(std::cos(psi) - k, std::sin(psi)) * 180.0 / kPi;
        CHECK(elevation_from_central_angle_deg(g, 10.0) ==
              doctest::Approx(oracle).epsilon(1e-12));
        CHECK(oracle == doctest::Approx(76.8).epsilon(0.005));
    }
    SUBCASE("footprint edge elevation agrees with the law-of-sines oracle") {
        const EdgeOracle oracle = edge_oracle(11.64, 20000.0, 6371.0);
        CHECK(elevation_from_central_angle_deg(g, oracle.psi_deg) ==
              doctest::Approx(oracle.elevation_deg).epsilon(1e-9));
    }
    SUBCASE("monotone decreasing in central angle up to the edge") {
        double prev = 90.0;
        for (double psi = 0.5; psi <= 45.0; psi += 0.5) {
            const double e = elevation_from_central_angle_deg(g, psi);
            CHECK(e < prev);
            prev = e;
        }
    }
    SUBCASE("site outside the footprint is rejected") {
        const double r = beam_footprint_radius_km(g);
        CHECK_THROWS_AS(compute_elevation(g, {r + 1.0, 0}, {0, 0}), BeamOutOfRange);
        CHECK_NOTHROW(compute_elevation(g, {r - 1.0, 0}, {0, 0}));
    }
}

TEST_CASE("assign_bs") {
    Geometry g;
    g.bs_positions = {{100, 0}, {0, 100}, {50, 50}, {0, 5}};

    SUBCASE("nearest in-coverage BS wins") {
        auto a = assign_bs(g, {0, 0});
        REQUIRE(a.has_value());
        CHECK(a->index == 3);
        CHECK(a->distance_km == doctest::Approx(5.0));
    }
    SUBCASE("no BS within 20 km means no coverage") {
        CHECK_FALSE(assign_bs(g, {-25, 0}).has_value());
    }
    SUBCASE("ties break to the lower index") {
        Geometry t;
        t.bs_positions = {{10, 0}, {-10, 0}};
        auto a = assign_bs(t, {0, 0});
        REQUIRE(a.has_value());
        CHECK(a->index == 0);
    }
    SUBCASE("empty BS list is rejected") {
        Geometry e;
        CHECK_THROWS_AS(assign_bs(e, {0, 0}), std::invalid_argument);
    }
}

TEST_CASE("hex_lattice covers its disc with no duplicate sites") {
    const double pitch = 20.0;
    auto sites = hex_lattice(pitch, 60.0);
    CHECK(sites.size() > 10);
    std::set<std::pair<double, double>> uniq;
    for (const auto& s : sites) CHECK(uniq.insert({s.x, s.y}).second);

    // Worst-case distance to the nearest site in a hex lattice is pitch/sqrt(3).
    Rng rng(31);
    for (int i = 0; i < 500; ++i) {
        const double a = rng.uniform(0, 2 * kPi);
        const double r = 60.0 * std::sqrt(rng.uniform01());
        const Vec2 p{r * std::cos(a), r * std::sin(a)};
        double best = 1e18;
        for (const auto& s : sites) best = std::min(best, distance(p, s));
        CHECK(best <= pitch / std::sqrt(3.0) + 1e-9);
    }
}

TEST_CASE("generate_trajectory") {
    SUBCASE("zero-speed profile stays put") {
        MobilityProfile p;
        p.mean_speed_kmh = 0;
        p.speed_sd_kmh = 0;
        Rng rng(1);
        auto traj = generate_trajectory(p, 30, rng);
        CHECK(traj.samples.size() == 31);
        for (const auto& s : traj.samples) {
            CHECK(s.position.x == p.start.x);
            CHECK(s.position.y == p.start.y);
        }
    }
    SUBCASE("no turning gives an exactly straight path") {
        MobilityProfile p;
        p.mean_speed_kmh = 20;
        p.turn_sd_deg = 0;
        Rng rng(2);
        auto traj = generate_trajectory(p, 120, rng);
        CHECK(compute_sinuosity(traj) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("same seed reproduces the trajectory exactly") {
        MobilityProfile p;
        Rng a(77), b(77);
        auto ta = generate_trajectory(p, 60, a);
        auto tb = generate_trajectory(p, 60, b);
        REQUIRE(ta.samples.size() == tb.samples.size());
        for (size_t i = 0; i < ta.samples.size(); ++i) {
            CHECK(ta.samples[i].position.x == tb.samples[i].position.x);
            CHECK(ta.samples[i].position.y == tb.samples[i].position.y);
        }
    }
    SUBCASE("time strictly increases and speed stays non-negative") {
        Rng rng(9);
        for (int trial = 0; trial < 20; ++trial) {
            MobilityProfile p;
            p.mean_speed_kmh = rng.uniform(0, 60);
            p.speed_sd_kmh = rng.uniform(0, 20);
            p.turn_sd_deg = rng.uniform(0, 90);
            p.leg_mean_duration_s = rng.uniform(1, 120);
            auto traj = generate_trajectory(p, 45, rng);
            for (size_t i = 0; i < traj.samples.size(); ++i) {
                if (i > 0) CHECK(traj.samples[i].t_s > traj.samples[i - 1].t_s);
                CHECK(traj.samples[i].speed_kmh >= 0);
            }
        }
    }
    SUBCASE("non-positive duration is rejected") {
        MobilityProfile p;
        Rng rng(3);
        CHECK_THROWS_AS(generate_trajectory(p, 0, rng), std::invalid_argument);
    }
}

TEST_CASE("compute_sinuosity") {
    SUBCASE("right-angle path") {
        CHECK(compute_sinuosity({{0, 0}, {1, 0}, {1, 1}}) ==
              doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("collinear points") {
        CHECK(compute_sinuosity({{0, 0}, {1, 1}, {2, 2}, {3, 3}}) == doctest::Approx(1.0));
    }
    SUBCASE("closed loop hits the cap") {
        CHECK(compute_sinuosity({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}) == 100.0);
    }
    SUBCASE("single point and stationary path are straight by definition") {
        CHECK(compute_sinuosity({{2, 2}}) == 1.0);
        CHECK(compute_sinuosity({{2, 2}, {2, 2}, {2, 2}}) == 1.0);
    }
}

TEST_CASE("compute_heading_azimuth") {
    CHECK(compute_heading_azimuth({0, 0}, {0, 1}) == doctest::Approx(0.0));
    CHECK(compute_heading_azimuth({0, 0}, {1, 0}) == doctest::Approx(90.0));
    CHECK(compute_heading_azimuth({0, 0}, {-1, -1}) ==
          doctest::Approx(std::fmod(std::atan2(-1.0, -1.0) * 180.0 / kPi + 360.0, 360.0)));
    CHECK(compute_heading_azimuth({0, 0}, {-1, -1}) == doctest::Approx(225.0));
    CHECK(compute_heading_azimuth({1, 1}, {1, 1}, 123.0) == 123.0);
    CHECK(compute_heading_azimuth({1, 1}, {1, 1}) == 0.0);

    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        Vec2 a{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        Vec2 b{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const double h = compute_heading_azimuth(a, b);
        CHECK(h >= 0.0);
        CHECK(h < 360.0);
    }
}

TEST_CASE("generate_traffic") {
    TrafficModel m;

    SUBCASE("conversational sample mean matches the configured rate") {
        Rng rng(100);
        double sum = 0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) sum += generate_traffic(ServiceType::Conversational, 30, rng, m).volume_bytes;
        const double analytic = m.conversational_rate_bps * 30.0;
        CHECK(sum / n == doctest::Approx(analytic).epsilon(0.02));
    }
    SUBCASE("streaming sample mean matches the stationary on-fraction") {
        Rng rng(101);
        double sum = 0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) sum += generate_traffic(ServiceType::Streaming, 30, rng, m).volume_bytes;
        const double analytic = m.streaming_on_mean_s /
                                (m.streaming_on_mean_s + m.streaming_off_mean_s) * 30.0 *
                                m.streaming_on_rate_bps;
        CHECK(sum / n == doctest::Approx(analytic).epsilon(0.05));
    }
    SUBCASE("interactive sample mean is near the renewal-reward value") {
        Rng rng(102);
        double sum = 0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) sum += generate_traffic(ServiceType::Interactive, 30, rng, m).volume_bytes;
        const double mean_size = m.interactive_pareto_shape * m.interactive_pareto_scale_b /
                                 (m.interactive_pareto_shape - 1.0);
        const double analytic = m.interactive_req_per_s * 30.0 * mean_size;
        // Pareto 1.5 has infinite variance; the band is wide on purpose.
        CHECK(sum / n == doctest::Approx(analytic).epsilon(0.30));
    }
    SUBCASE("zero-length window produces nothing") {
        Rng rng(5);
        for (int s = 0; s < 3; ++s) {
            auto t = generate_traffic(service_from_code(s), 0, rng, m);
            CHECK(t.volume_bytes == 0.0);
            CHECK(t.uplink_rate_bps == 0.0);
        }
    }
    SUBCASE("same seed reproduces the draws") {
        Rng a(6), b(6);
        for (int s = 0; s < 3; ++s) {
            auto ta = generate_traffic(service_from_code(s), 30, a, m);
            auto tb = generate_traffic(service_from_code(s), 30, b, m);
            CHECK(ta.volume_bytes == tb.volume_bytes);
            CHECK(ta.uplink_rate_bps == tb.uplink_rate_bps);
        }
    }
    SUBCASE("peak one-second rate is at least the window-average rate") {
        Rng rng(7);
        for (int i = 0; i < 300; ++i) {
            auto t = generate_traffic(service_from_code(i % 3), 30, rng, m);
            CHECK(t.uplink_rate_bps >= t.volume_bytes / 30.0 - 1e-6);
            CHECK(t.volume_bytes >= 0.0);
        }
    }
}

TEST_CASE("generate_dataset") {
    ScenarioConfig cfg;

    SUBCASE("zero illegal fraction gives only legitimate labels") {
        auto ds = generate_dataset_serial(cfg, 2, 50, 0.0, 11);
        CHECK(ds.rows.size() == 100);
        for (const auto& r : ds.rows) CHECK(r.label == WindowLabel::Legitimate);
    }
    SUBCASE("half illegal gives an exact per-MU partition") {
        auto ds = generate_dataset_serial(cfg, 1, 1000, 0.5, 12);
        int spoof = 0;
        for (const auto& r : ds.rows) spoof += r.label == WindowLabel::Spoof;
        CHECK(spoof == 500);
    }
    SUBCASE("every generated window satisfies the factor bounds") {
        auto ds = generate_dataset_serial(cfg, 4, 120, 0.4, 13);
        Geometry geom = cfg.build_geometry();
        const double footprint = beam_footprint_radius_km(geom);
        for (const auto& r : ds.rows) {
            CHECK_NOTHROW(validate_factors(r.factors, cfg));
            CHECK(distance(r.factors.f7_position, cfg.subsatellite_point) <= footprint);
        }
    }
    SUBCASE("spoof windows shift the traffic-volume mean upward") {
        auto ds = generate_dataset_serial(cfg, 8, 400, 0.5, 14);
        double legit = 0, spoof = 0;
        int nl = 0, ns = 0;
        for (const auto& r : ds.rows) {
            if (r.label == WindowLabel::Spoof) {
                spoof += r.factors.f1_traffic_volume;
                ++ns;
            } else {
                legit += r.factors.f1_traffic_volume;
                ++nl;
            }
        }
        CHECK(spoof / ns > legit / nl);
    }
    SUBCASE("parallel and serial generation agree byte for byte") {
        auto par = generate_dataset(cfg, 6, 200, 0.3, 15);
        auto ser = generate_dataset_serial(cfg, 6, 200, 0.3, 15);
        CHECK(to_csv(par) == to_csv(ser));
    }
    SUBCASE("identical seed reproduces the CSV byte for byte") {
        CHECK(to_csv(generate_dataset(cfg, 3, 80, 0.25, 16)) ==
              to_csv(generate_dataset(cfg, 3, 80, 0.25, 16)));
    }
    SUBCASE("empty request yields an empty dataset") {
        CHECK(generate_dataset_serial(cfg, 3, 0, 0.5, 17).rows.empty());
    }
    SUBCASE("out-of-range fraction is rejected") {
        CHECK_THROWS_AS(generate_dataset_serial(cfg, 1, 10, 1.5, 18), std::invalid_argument);
    }
    SUBCASE("csv header names every factor column") {
        auto ds = generate_dataset_serial(cfg, 1, 1, 0.0, 19);
        const std::string csv = to_csv(ds);
        CHECK(csv.rfind("mu_id,window,f1,f2,f3,f4,f5,f6,f7x,f7y,f8,f9,label\n", 0) == 0);
    }
}
