// Release gate. Each criterion prints exactly one [PASS]/[FAIL] line and the
// process exits nonzero unless all of them hold. Criteria with a wall-clock
// budget fail when they blow it, even if the checks themselves pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "atmas/bytes.hpp"
#include "atmas/crypto/elgamal.hpp"
#include "atmas/crypto/freshness.hpp"
#include "atmas/crypto/fuzzy.hpp"
#include "atmas/crypto/hash.hpp"
#include "atmas/eval/experiments.hpp"
#include "atmas/ml/forest.hpp"
#include "atmas/ml/metrics.hpp"
#include "atmas/protocol/entities.hpp"
#include "atmas/protocol/message.hpp"
#include "atmas/rng.hpp"
#include "atmas/scenario/geometry.hpp"
#include "atmas/scenario/mobility.hpp"
#include "atmas/sim/sim.hpp"

namespace {

using atmas::Bytes;
using atmas::Rng;
using atmas::protocol::Reason;

struct Outcome {
    bool ok = true;
    std::string detail;
};

void fail(Outcome& out, const std::string& msg) {
    out.ok = false;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += msg;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Crypto round-trip oracles: the toy group is small enough to enumerate
// every plaintext, and short templates small enough to enumerate every
// possible fresh reading against the repetition-code correction bound.

Outcome crit_crypto() {
    Outcome out;
    namespace cr = atmas::crypto;

    auto grp = cr::GroupParams::toy();
    grp.validate();
    Rng rng(101);
    auto kp = cr::keygen(grp, rng);
    int n_messages = 0;
    for (cr::BigInt m = 1; m < grp.p; ++m, ++n_messages) {
        auto ct = cr::encrypt(grp, kp.public_key, m, rng);
        if (cr::decrypt(grp, kp.private_key, ct) != m) {
            fail(out, "toy group round trip lost message " + cr::bigint_to_string(m));
            break;
        }
    }
    if (n_messages != 22) fail(out, "expected 22 toy messages");

    // Every reading of an n-bit template, n <= 15: the enrolled key comes back
    // exactly when no block exceeds the correction capacity, never otherwise.
    const int rep = 5;
    const int cap = cr::fuzzy_capacity(rep);
    for (int n = rep; n <= 15 && out.ok; n += rep) {
        cr::BiometricTemplate enrolled;
        enrolled.bits.resize(static_cast<size_t>(n));
        Rng bio_rng(static_cast<uint64_t>(200 + n));
        for (auto& b : enrolled.bits) b = static_cast<uint8_t>(bio_rng.uniform_int(0, 1));
        auto enr = cr::fuzzy_gen(enrolled, rep, bio_rng);

        for (uint32_t mask = 0; mask < (1u << n); ++mask) {
            cr::BiometricTemplate reading = enrolled;
            bool within = true;
            for (int block = 0; block * rep < n; ++block) {
                int weight = 0;
                for (int i = block * rep; i < (block + 1) * rep; ++i) {
                    if (mask >> i & 1u) {
                        reading.bits[static_cast<size_t>(i)] ^= 1;
                        ++weight;
                    }
                }
                within = within && weight <= cap;
            }
            const bool recovered = cr::fuzzy_rep(reading, enr.helper, rep) == enr.key;
            if (recovered != within) {
                fail(out, "n=" + std::to_string(n) + " mask=" + std::to_string(mask) +
                              (within ? " lost a correctable reading" : " accepted a reading beyond capacity"));
                break;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// 2. Protocol attack rejection: the scripted in-simulator properties, plus a
// direct wire-level fuzz of the login request, a stale delivery, and the
// wrong-factor oracles. Nothing adversarial may verify as Ok.

Outcome crit_protocol() {
    Outcome out;
    namespace pr = atmas::protocol;
    namespace cr = atmas::crypto;

    for (const auto& p : atmas::sim::run_security_properties(2))
        if (!p.passed) fail(out, "property " + p.name + ": " + p.detail);

    pr::ProtocolConfig cfg;
    pr::LocationContext loc{atmas::scenario::Geometry{.bs_positions = {{0.0, 0.0}}}, {0.0, 0.0}};
    auto ncc = pr::make_ncc(cfg, 77);
    auto sat = pr::make_satellite(cfg, loc, 77);
    auto mu = pr::make_mu(cfg, "mu-0", 77);
    pr::FixedDelayChannel ch{10};
    if (pr::register_infrastructure(sat, ncc, ch, cr::Timestamp{0}).outcome != Reason::Ok ||
        pr::register_mu(mu, ncc, &sat, ch, cr::Timestamp{500}).outcome != Reason::Ok) {
        fail(out, "registration setup failed");
        return out;
    }

    Rng rng(424242);
    const cr::Timestamp sent{2000};
    pr::AuthRequestMaterial material{
        .ident = mu.c_id,
        .password = mu.c_pw,
        .biometric = mu.c_bio,
        .position = mu.position,
        .serving_bs = mu.serving_bs,
    };
    const auto honest = pr::build_auth_request(mu.id, sat.id, material, sent, rng.next_u64());
    const Bytes wire = pr::serialize_message(honest);

    {
        auto probe = sat;
        if (pr::satellite_handle(probe, pr::parse_message(wire), cr::Timestamp{2010}).verdict !=
            Reason::Ok)
            fail(out, "untampered request no longer verifies");
    }

    int accepted = 0;
    for (int i = 0; i < 500; ++i) {
        Bytes flipped = wire;
        const auto bit =
            static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(wire.size()) * 8 - 1));
        flipped[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        auto probe = sat;
        Reason verdict = Reason::Malformed;
        try {
            verdict = pr::satellite_handle(probe, pr::parse_message(flipped), cr::Timestamp{2010})
                          .verdict;
        } catch (const std::exception&) {
        }
        if (verdict == Reason::Ok) ++accepted;
    }
    if (accepted != 0) fail(out, std::to_string(accepted) + " of 500 bit flips accepted");

    {
        auto probe = sat;
        const cr::Timestamp edge{sent.ms + cfg.threshold_ms};
        if (pr::satellite_handle(probe, honest, edge).verdict != Reason::Ok)
            fail(out, "delivery at the freshness threshold rejected");
    }
    {
        auto probe = sat;
        const cr::Timestamp late{sent.ms + cfg.threshold_ms + 1};
        const Reason verdict = pr::satellite_handle(probe, honest, late).verdict;
        if (verdict != Reason::Stale)
            fail(out, "stale delivery gave " + pr::reason_name(verdict));
    }

    const Reason pw = atmas::sim::outcome_with_guessed_password(5);
    if (pw != Reason::BadPassword) fail(out, "guessed password gave " + pr::reason_name(pw));
    const Reason bio = atmas::sim::outcome_with_stolen_helper(6);
    if (bio != Reason::BadBiometric) fail(out, "stolen helper gave " + pr::reason_name(bio));
    return out;
}

// ---------------------------------------------------------------------------
// Shared sweep plumbing.

std::map<std::string, double> seed_means_by_label(const std::vector<atmas::eval::ResultRow>& rows,
                                                  Outcome& out) {
    std::map<std::string, std::pair<double, int>> acc;
    for (const auto& r : rows) {
        if (r.status == "failed") {
            fail(out, "cell " + r.factors + " seed " + std::to_string(r.seed) + " failed");
            continue;
        }
        auto& slot = acc[r.factors];
        slot.first += r.acc;
        slot.second += 1;
    }
    std::map<std::string, double> means;
    for (const auto& [label, sum_n] : acc) means[label] = sum_n.first / sum_n.second;
    return means;
}

// 3. Headline sweep at the published defaults: every illegal-traffic fraction
// from 10% to 50% must stay at or above 0.92 mean accuracy, and the spread
// across fractions must stay under 8 points.

Outcome crit_headline() {
    Outcome out;
    atmas::eval::ExperimentSpec spec;
    spec.kind = atmas::eval::ExperimentKind::IllegalAccessSweep;
    const auto rows = atmas::eval::run_illegal_access_sweep(spec);

    std::map<double, std::pair<double, int>> by_fraction;
    for (const auto& r : rows) {
        if (r.status == "failed") {
            fail(out, "seed " + std::to_string(r.seed) + " failed at fraction " +
                          fmt(r.illegal_fraction));
            continue;
        }
        auto& slot = by_fraction[r.illegal_fraction];
        slot.first += r.acc;
        slot.second += 1;
    }
    if (by_fraction.size() != spec.illegal_fractions.size())
        fail(out, "expected " + std::to_string(spec.illegal_fractions.size()) + " fractions");

    double lo = 1.0, hi = 0.0;
    for (const auto& [fraction, sum_n] : by_fraction) {
        if (sum_n.second != static_cast<int>(spec.seeds.size()))
            fail(out, "fraction " + fmt(fraction) + " has " + std::to_string(sum_n.second) +
                          " usable seeds");
        const double mean = sum_n.first / sum_n.second;
        lo = std::min(lo, mean);
        hi = std::max(hi, mean);
        if (mean < 0.92)
            fail(out, "fraction " + fmt(fraction) + " mean acc " + fmt(mean) + " < 0.92");
    }
    if (hi - lo >= 0.08)
        fail(out, "accuracy spread " + fmt(hi - lo) + " across fractions >= 0.08");
    if (out.ok) out.detail = "min mean " + fmt(lo) + ", spread " + fmt(hi - lo);
    return out;
}

// 4. Cumulative factor curve: adding factors never costs more than the 2-point
// noise band, and the first eight factors land within 1 point of all nine.

Outcome crit_factor_count() {
    Outcome out;
    atmas::eval::ExperimentSpec spec;
    spec.kind = atmas::eval::ExperimentKind::FactorCountSweep;
    spec.seeds = {1, 2, 3};
    const auto means = seed_means_by_label(atmas::eval::run_factor_count_sweep(spec), out);

    std::vector<double> curve;
    for (int k = 1; k <= 9; ++k) {
        const std::string label = "1-" + std::to_string(k);
        auto it = means.find(label);
        if (it == means.end()) {
            fail(out, "missing cell " + label);
            return out;
        }
        curve.push_back(it->second);
    }
    for (size_t k = 1; k < curve.size(); ++k)
        if (curve[k] < curve[k - 1] - 0.02)
            fail(out, "acc drops " + fmt(curve[k - 1] - curve[k]) + " at " +
                          std::to_string(k + 1) + " factors");
    if (std::fabs(curve[7] - curve[8]) > 0.01)
        fail(out, "eight- vs nine-factor gap " + fmt(std::fabs(curve[7] - curve[8])) + " > 0.01");
    if (out.ok)
        out.detail = "acc " + fmt(curve.front()) + " -> " + fmt(curve.back()) + ", last gap " +
                     fmt(std::fabs(curve[7] - curve[8]));
    return out;
}

// 5. Three-factor combinations: sets containing factor 1 must outperform the
// rest on average, and the full ranking lands on disk as CSV.

Outcome crit_combos() {
    Outcome out;
    atmas::eval::ExperimentSpec spec;
    spec.kind = atmas::eval::ExperimentKind::FactorComboSweep;
    spec.n_mu = 10;
    spec.n_windows = 300;
    spec.seeds = {1, 2, 3};
    const auto rows = atmas::eval::run_factor_combo_sweep(spec);
    const auto means = seed_means_by_label(rows, out);

    std::map<std::string, bool> has_f1;
    for (const auto& combo : atmas::eval::three_factor_combos())
        has_f1[atmas::eval::factors_label(combo)] =
            std::find(combo.begin(), combo.end(), 1) != combo.end();
    if (means.size() != 84) fail(out, "expected 84 combos, got " + std::to_string(means.size()));

    double with_sum = 0, without_sum = 0;
    int with_n = 0, without_n = 0;
    for (const auto& [label, mean] : means) {
        auto it = has_f1.find(label);
        if (it == has_f1.end()) {
            fail(out, "unknown combo label " + label);
            continue;
        }
        (it->second ? with_sum : without_sum) += mean;
        (it->second ? with_n : without_n) += 1;
    }
    if (with_n != 28 || without_n != 56)
        fail(out, "combo split " + std::to_string(with_n) + "/" + std::to_string(without_n));

    const double with_mean = with_sum / std::max(with_n, 1);
    const double without_mean = without_sum / std::max(without_n, 1);
    if (with_mean <= without_mean)
        fail(out, "factor-1 combos " + fmt(with_mean) + " do not beat the rest " +
                      fmt(without_mean));

    const std::string ranking = atmas::eval::combo_ranking_csv(rows);
    const std::string path = "acceptance_combo_ranking.csv";
    std::ofstream f(path, std::ios::binary);
    f << ranking;
    f.close();
    if (!f) fail(out, "could not write " + path);
    const auto lines = static_cast<size_t>(std::count(ranking.begin(), ranking.end(), '\n'));
    if (lines != 85) fail(out, "ranking has " + std::to_string(lines) + " lines, expected 85");
    if (out.ok)
        out.detail = "factor-1 mean " + fmt(with_mean) + " vs " + fmt(without_mean) + ", " + path;
    return out;
}

// ---------------------------------------------------------------------------
// 6. Forest oracles on synthetic data with known answers.

void make_separable(int n, uint64_t seed, atmas::ml::FeatureMatrix& X, std::vector<int>& y) {
    Rng rng(seed);
    X = atmas::ml::FeatureMatrix(static_cast<size_t>(n), 2);
    y.clear();
    for (int i = 0; i < n; ++i) {
        const int label = i % 2;
        X.at(static_cast<size_t>(i), 0) = label ? rng.uniform(0.55, 1.0) : rng.uniform(0.0, 0.45);
        X.at(static_cast<size_t>(i), 1) = rng.uniform01();
        y.push_back(label);
    }
}

void make_xor(int per_cell, double noise_sd, uint64_t seed, atmas::ml::FeatureMatrix& X,
              std::vector<int>& y) {
    Rng rng(seed);
    X = atmas::ml::FeatureMatrix(static_cast<size_t>(per_cell) * 4, 2);
    y.clear();
    size_t r = 0;
    for (int cx = 0; cx < 2; ++cx)
        for (int cy = 0; cy < 2; ++cy)
            for (int i = 0; i < per_cell; ++i, ++r) {
                X.at(r, 0) = cx + rng.normal(0.0, noise_sd);
                X.at(r, 1) = cy + rng.normal(0.0, noise_sd);
                y.push_back(cx ^ cy);
            }
}

double training_accuracy(const atmas::ml::ForestModel& m, const atmas::ml::FeatureMatrix& X,
                         const std::vector<int>& y) {
    atmas::ml::ConfusionMatrix cm;
    for (size_t r = 0; r < X.rows; ++r)
        cm.add(y[r], m.predict_score(X.row(r)) > 0.5 ? 1 : 0);
    return atmas::ml::compute_accuracy(cm);
}

Outcome crit_forest() {
    Outcome out;
    namespace ml = atmas::ml;
    ml::FeatureMatrix X;
    std::vector<int> y;

    // A one-tree ensemble votes exactly like its tree, on easy and hard data.
    for (uint64_t seed : {uint64_t{7}, uint64_t{17}}) {
        if (seed == 7)
            make_separable(100, seed, X, y);
        else
            make_xor(30, 0.1, seed, X, y);
        ml::ForestHyperparams hp;
        hp.n_trees = 1;
        const auto m = ml::train_forest(X, y, {}, hp, 9);
        for (size_t r = 0; r < X.rows; ++r) {
            const double s = m.predict_score(X.row(r));
            if ((s != 0.0 && s != 1.0) || static_cast<int>(s) != m.trees[0].predict(X.row(r))) {
                fail(out, "one-tree forest diverges from its tree at row " + std::to_string(r));
                break;
            }
        }
    }

    make_separable(200, 11, X, y);
    ml::ForestHyperparams hp;
    hp.n_trees = 20;
    const double sep_acc = training_accuracy(ml::train_forest(X, y, {}, hp, 13), X, y);
    if (sep_acc != 1.0) fail(out, "separable training acc " + fmt(sep_acc) + " != 1.0");

    make_xor(50, 0.1, 17, X, y);
    hp.n_trees = 50;
    hp.max_depth = 6;
    const double xor_acc = training_accuracy(ml::train_forest(X, y, {}, hp, 19), X, y);
    if (xor_acc < 0.95) fail(out, "noisy xor training acc " + fmt(xor_acc) + " < 0.95");
    if (out.ok) out.detail = "separable " + fmt(sep_acc) + ", xor " + fmt(xor_acc);
    return out;
}

// ---------------------------------------------------------------------------
// 7. Geometry oracles with closed-form answers.

Outcome crit_geometry() {
    Outcome out;
    namespace sc = atmas::scenario;
    const sc::Geometry g;

    const double nadir_elev = sc::compute_elevation(g, {0.0, 0.0}, {0.0, 0.0});
    if (std::fabs(nadir_elev - 90.0) > 1e-9)
        fail(out, "elevation at the subsatellite point " + fmt(nadir_elev));

    // Law of sines in the centre / satellite / footprint-edge triangle.
    const double eta = g.beam_half_angle_deg * M_PI / 180.0;
    const double ratio = (g.earth_radius_km + g.satellite_altitude_km) / g.earth_radius_km;
    const double psi = std::asin(ratio * std::sin(eta)) - eta;
    const double psi_deg = psi * 180.0 / M_PI;
    if (std::fabs(psi_deg - 45.0) > 0.5)
        fail(out, "central angle " + fmt(psi_deg) + " not near 45 deg");
    const double got_psi = sc::beam_footprint_central_angle_deg(g);
    if (std::fabs(got_psi - psi_deg) / psi_deg > 1e-6)
        fail(out, "central angle " + fmt(got_psi) + " vs oracle " + fmt(psi_deg));
    const double want_radius = g.earth_radius_km * psi;
    const double got_radius = sc::beam_footprint_radius_km(g);
    if (std::fabs(got_radius - want_radius) / want_radius > 1e-6)
        fail(out, "footprint radius " + fmt(got_radius) + " vs oracle " + fmt(want_radius));

    const double sinuosity = sc::compute_sinuosity({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}});
    if (std::fabs(sinuosity - std::sqrt(2.0)) > 1e-12)
        fail(out, "right-angle sinuosity " + fmt(sinuosity));
    if (out.ok)
        out.detail = "central angle " + fmt(got_psi) + " deg, footprint " + fmt(got_radius) + " km";
    return out;
}

// ---------------------------------------------------------------------------
// 8. Bitwise determinism of both the simulator and the sweep pipeline.

Outcome crit_determinism() {
    Outcome out;

    atmas::sim::SimConfig cfg;
    cfg.seed = 11;
    cfg.n_mu = 3;
    cfg.n_bs = 2;
    cfg.reports_per_session = 2;
    const auto a = atmas::sim::run(cfg);
    const auto b = atmas::sim::run(cfg);
    if (a.event_log_text() != b.event_log_text()) fail(out, "event logs differ between runs");
    if (a.summary_csv() != b.summary_csv()) fail(out, "session summaries differ between runs");

    atmas::eval::ExperimentSpec spec;
    spec.n_mu = 3;
    spec.n_windows = 60;
    spec.illegal_fractions = {0.2, 0.4};
    spec.seeds = {1, 2};
    const auto r1 = atmas::eval::run_illegal_access_sweep(spec);
    const auto r2 = atmas::eval::run_illegal_access_sweep(spec);
    if (atmas::eval::rows_to_csv(r1) != atmas::eval::rows_to_csv(r2))
        fail(out, "result rows differ between runs");
    if (atmas::eval::summary_to_csv(r1) != atmas::eval::summary_to_csv(r2))
        fail(out, "summaries differ between runs");
    if (out.ok) {
        const std::string log = a.event_log_text();
        out.detail =
            std::to_string(std::count(log.begin(), log.end(), '\n')) + " log lines stable";
    }
    return out;
}

struct Criterion {
    const char* name;
    Outcome (*run)();
    double budget_s;  // 0 means no wall-clock bound
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"crypto round-trip oracles", crit_crypto, 5.0},
        {"protocol attack rejection", crit_protocol, 30.0},
        {"headline accuracy sweep", crit_headline, 600.0},
        {"cumulative factor curve", crit_factor_count, 0.0},
        {"three-factor combination ranking", crit_combos, 0.0},
        {"forest oracles", crit_forest, 0.0},
        {"geometry oracles", crit_geometry, 0.0},
        {"bitwise determinism", crit_determinism, 0.0},
    };

    int failed = 0, index = 0;
    for (const auto& c : criteria) {
        ++index;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.ok = false;
            out.detail = std::string("unhandled exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (out.ok && c.budget_s > 0 && secs > c.budget_s) {
            out.ok = false;
            out.detail = "over the " + fmt(c.budget_s) + " s budget";
        }
        std::printf("[%s] %d/8 %s (%.2f s)%s%s\n", out.ok ? "PASS" : "FAIL", index, c.name, secs,
                    out.detail.empty() ? "" : ": ", out.detail.c_str());
        std::fflush(stdout);
        failed += out.ok ? 0 : 1;
    }
    std::printf("%d/8 criteria passed\n", 8 - failed);
    return failed == 0 ? 0 : 1;
}
