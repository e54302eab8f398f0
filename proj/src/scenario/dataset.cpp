#include "atmas/scenario/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace atmas::scenario {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::array<double, 3> normalized_mix(std::array<double, 3> w) {
    double s = w[0] + w[1] + w[2];
    for (double& v : w) v /= s;
    return w;
}

ServiceType draw_service(const std::array<double, 3>& mix, Rng& rng) {
    const double u = rng.uniform01();
    double acc = 0.0;
    for (int i = 0; i < kNumServiceTypes; ++i) {
        acc += mix[static_cast<size_t>(i)];
        if (u < acc) return static_cast<ServiceType>(i);
    }
    return ServiceType::Interactive;
}
}  // namespace

void ScenarioConfig::validate() const {
    if (window_s <= 0) throw std::invalid_argument("scenario: window_s must be > 0");
    if (sample_hz <= 0) throw std::invalid_argument("scenario: sample_hz must be > 0");
    if (region_radius_km <= 0) throw std::invalid_argument("scenario: region radius must be > 0");
    if (speed_min_kmh < 0 || speed_max_kmh < speed_min_kmh)
        throw std::invalid_argument("scenario: bad speed range");
    if (divergence < 0 || divergence > 1)
        throw std::invalid_argument("scenario: divergence must be in [0, 1]");
    if (bs_pitch_km > bs_coverage_km * std::sqrt(3.0))
        throw std::invalid_argument("scenario: BS pitch leaves coverage holes");
    Geometry g;
    g.satellite_altitude_km = satellite_altitude_km;
    g.beam_half_angle_deg = beam_half_angle_deg;
    g.bs_coverage_km = bs_coverage_km;
    g.validate();
}

Geometry ScenarioConfig::build_geometry() const {
    validate();
    Geometry g;
    g.satellite_altitude_km = satellite_altitude_km;
    g.beam_half_angle_deg = beam_half_angle_deg;
    g.bs_coverage_km = bs_coverage_km;
    // Margin covers the spoofer home shift, start jitter tails, and one
    // window of travel, so every generated position has a serving BS.
    const double travel_km = speed_max_kmh * 2.0 * window_s / 3600.0;
    const double margin = spoof_home_shift_km + 5.0 * roam_sd_km + travel_km + bs_pitch_km;
    g.bs_positions = hex_lattice(bs_pitch_km, region_radius_km + margin);
    return g;
}

MuProfiles make_mu_profiles(const ScenarioConfig& cfg, uint64_t seed, int mu_id) {
    Rng rng(derive_seed(seed, "scenario/profile", static_cast<uint64_t>(mu_id)));

    const double angle = rng.uniform(0.0, 2.0 * kPi);
    const double radius = cfg.region_radius_km * std::sqrt(rng.uniform01());
    const Vec2 home{radius * std::cos(angle), radius * std::sin(angle)};

    MuProfiles p;
    p.legit_mobility.start = home;
    p.legit_mobility.mean_speed_kmh = rng.uniform(cfg.speed_min_kmh, cfg.speed_max_kmh);
    p.legit_mobility.speed_sd_kmh = cfg.speed_sd_frac * p.legit_mobility.mean_speed_kmh;
    p.legit_mobility.turn_sd_deg = rng.uniform(cfg.turn_sd_min_deg, cfg.turn_sd_max_deg);
    p.legit_mobility.leg_mean_duration_s = cfg.leg_mean_duration_s;

    // Squaring skews each MU toward a dominant service, which makes the
    // spoofer's rotated mix stand out while keeping every service possible.
    auto mix_weight = [&rng] {
        const double u = rng.uniform01();
        return u * u + 0.1;
    };
    p.legit_mix = normalized_mix({mix_weight(), mix_weight(), mix_weight()});
    p.legit_traffic = cfg.traffic;

    const double d = cfg.divergence;
    const double shift_dir = rng.uniform(0.0, 2.0 * kPi);
    p.spoof_mobility = p.legit_mobility;
    p.spoof_mobility.start = home + (d * cfg.spoof_home_shift_km) *
                                        Vec2{std::cos(shift_dir), std::sin(shift_dir)};
    p.spoof_mobility.mean_speed_kmh *= 1.0 + d;
    p.spoof_mobility.speed_sd_kmh *= 1.0 + d;
    p.spoof_mobility.turn_sd_deg *= 1.0 + d;

    const std::array<double, 3> rotated{p.legit_mix[2], p.legit_mix[0], p.legit_mix[1]};
    p.spoof_mix = normalized_mix({(1 - d) * p.legit_mix[0] + d * rotated[0],
                                  (1 - d) * p.legit_mix[1] + d * rotated[1],
                                  (1 - d) * p.legit_mix[2] + d * rotated[2]});
    p.spoof_traffic = cfg.traffic;
    p.spoof_traffic.conversational_rate_bps *= 1.0 + d;
    p.spoof_traffic.streaming_on_rate_bps *= 1.0 + d;
    p.spoof_traffic.interactive_req_per_s *= 1.0 + d;
    return p;
}

LabeledWindow make_window(const ScenarioConfig& cfg, const Geometry& geom,
                          const MuProfiles& profiles, int mu_id, int window_index,
                          WindowLabel label, uint64_t seed) {
    const uint64_t mu_seed = derive_seed(seed, "scenario/mu", static_cast<uint64_t>(mu_id));
    Rng rng(derive_seed(mu_seed, "window", static_cast<uint64_t>(window_index)));

    const bool spoof = label == WindowLabel::Spoof;
    const auto& mix = spoof ? profiles.spoof_mix : profiles.legit_mix;
    const auto& traffic_model = spoof ? profiles.spoof_traffic : profiles.legit_traffic;
    MobilityProfile mob = spoof ? profiles.spoof_mobility : profiles.legit_mobility;
    mob.start = mob.start + Vec2{rng.normal(0.0, cfg.roam_sd_km), rng.normal(0.0, cfg.roam_sd_km)};

    const ServiceType service = draw_service(mix, rng);
    const Trajectory traj = generate_trajectory(mob, cfg.window_s, rng, cfg.sample_hz);
    const TrafficSample traffic = generate_traffic(service, cfg.window_s, rng, traffic_model);

    LabeledWindow w;
    w.mu_id = mu_id;
    w.window_index = window_index;
    w.label = label;
    w.factors.f1_traffic_volume = traffic.volume_bytes;
    w.factors.f2_service_type = static_cast<int>(service);
    w.factors.f3_uplink_rate = traffic.uplink_rate_bps;
    w.factors.f4_sinuosity = compute_sinuosity(traj);

    double heading = 0.0;  // carry rule: stationary steps keep the last heading
    for (size_t i = 1; i < traj.samples.size(); ++i)
        heading = compute_heading_azimuth(traj.samples[i - 1].position,
                                          traj.samples[i].position, heading);
    w.factors.f8_heading_azimuth_deg = heading;

    const Vec2 last = traj.samples.back().position;
    const auto bs = assign_bs(geom, last);
    if (!bs)
        throw std::logic_error("generated window has no serving BS; lattice margin too small");
    w.factors.f5_bs_index = bs->index;
    w.factors.f6_bs_distance_km = bs->distance_km;
    w.factors.f7_position = last;
    w.factors.f9_elevation_deg = compute_elevation(
        geom, geom.bs_positions[static_cast<size_t>(bs->index)], cfg.subsatellite_point);
    return w;
}

namespace {

std::vector<WindowLabel> draw_labels(int n_windows, double illegal_fraction, uint64_t seed,
                                     int mu_id) {
    const int n_spoof =
        static_cast<int>(std::llround(illegal_fraction * static_cast<double>(n_windows)));
    std::vector<WindowLabel> labels(static_cast<size_t>(n_windows), WindowLabel::Legitimate);
    for (int i = 0; i < n_spoof; ++i) labels[static_cast<size_t>(i)] = WindowLabel::Spoof;
    Rng rng(derive_seed(seed, "scenario/labels", static_cast<uint64_t>(mu_id)));
    for (int i = n_windows - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.uniform_int(0, i));
        std::swap(labels[static_cast<size_t>(i)], labels[static_cast<size_t>(j)]);
    }
    return labels;
}

void generate_mu_rows(const ScenarioConfig& cfg, const Geometry& geom, int mu_id, int n_windows,
                      double illegal_fraction, uint64_t seed, LabeledWindow* out) {
    const MuProfiles profiles = make_mu_profiles(cfg, seed, mu_id);
    const auto labels = draw_labels(n_windows, illegal_fraction, seed, mu_id);
    for (int w = 0; w < n_windows; ++w)
        out[w] = make_window(cfg, geom, profiles, mu_id, w, labels[static_cast<size_t>(w)], seed);
}

Dataset generate_impl(const ScenarioConfig& cfg, int n_mu, int n_windows,
                      double illegal_fraction, uint64_t seed, bool parallel) {
    if (n_mu < 0 || n_windows < 0) throw std::invalid_argument("dataset: negative size");
    if (illegal_fraction < 0 || illegal_fraction > 1)
        throw std::invalid_argument("dataset: illegal_fraction must be in [0, 1]");
    const Geometry geom = cfg.build_geometry();
    Dataset ds;
    ds.rows.resize(static_cast<size_t>(n_mu) * static_cast<size_t>(n_windows));
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int mu = 0; mu < n_mu; ++mu)
            generate_mu_rows(cfg, geom, mu, n_windows, illegal_fraction, seed,
                             ds.rows.data() + static_cast<size_t>(mu) * n_windows);
    } else {
        for (int mu = 0; mu < n_mu; ++mu)
            generate_mu_rows(cfg, geom, mu, n_windows, illegal_fraction, seed,
                             ds.rows.data() + static_cast<size_t>(mu) * n_windows);
    }
    return ds;
}

}  // namespace

Dataset generate_dataset(const ScenarioConfig& cfg, int n_mu, int n_windows,
                         double illegal_fraction, uint64_t seed) {
    return generate_impl(cfg, n_mu, n_windows, illegal_fraction, seed, true);
}

Dataset generate_dataset_serial(const ScenarioConfig& cfg, int n_mu, int n_windows,
                                double illegal_fraction, uint64_t seed) {
    return generate_impl(cfg, n_mu, n_windows, illegal_fraction, seed, false);
}

void validate_factors(const FactorVector& f, const ScenarioConfig& cfg) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(f.f1_traffic_volume) || f.f1_traffic_volume < 0)
        throw std::domain_error("f1 out of range");
    if (f.f2_service_type < 0 || f.f2_service_type >= kNumServiceTypes)
        throw std::domain_error("f2 out of range");
    if (!finite(f.f3_uplink_rate) || f.f3_uplink_rate < 0)
        throw std::domain_error("f3 out of range");
    if (!finite(f.f4_sinuosity) || f.f4_sinuosity < 1.0 || f.f4_sinuosity > 100.0)
        throw std::domain_error("f4 out of range");
    if (f.f5_bs_index < 0) throw std::domain_error("f5 out of range");
    if (!finite(f.f6_bs_distance_km) || f.f6_bs_distance_km < 0 ||
        f.f6_bs_distance_km > cfg.bs_coverage_km)
        throw std::domain_error("f6 out of range");
    if (!finite(f.f7_position.x) || !finite(f.f7_position.y))
        throw std::domain_error("f7 not finite");
    if (!finite(f.f8_heading_azimuth_deg) || f.f8_heading_azimuth_deg < 0 ||
        f.f8_heading_azimuth_deg >= 360.0)
        throw std::domain_error("f8 out of range");
    if (!finite(f.f9_elevation_deg) || f.f9_elevation_deg <= 0 || f.f9_elevation_deg > 90.0)
        throw std::domain_error("f9 out of range");
}

void write_csv(std::ostream& os, const Dataset& ds) {
    os << "mu_id,window,f1,f2,f3,f4,f5,f6,f7x,f7y,f8,f9,label\n";
    char buf[320];
    for (const auto& r : ds.rows) {
        const auto& f = r.factors;
        std::snprintf(buf, sizeof(buf),
                      "%d,%d,%.6f,%d,%.6f,%.6f,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%d\n", r.mu_id,
                      r.window_index, f.f1_traffic_volume, f.f2_service_type, f.f3_uplink_rate,
                      f.f4_sinuosity, f.f5_bs_index, f.f6_bs_distance_km, f.f7_position.x,
                      f.f7_position.y, f.f8_heading_azimuth_deg, f.f9_elevation_deg,
                      static_cast<int>(r.label));
        os << buf;
    }
}

std::string to_csv(const Dataset& ds) {
    std::ostringstream ss;
    write_csv(ss, ds);
    return ss.str();
}

}  // namespace atmas::scenario
