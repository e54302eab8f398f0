#include <chrono>
#include <cstdio>

#include "atmas/ml/forest.hpp"
#include "atmas/ml/preprocess.hpp"
#include "atmas/scenario/dataset.hpp"

using namespace atmas;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Median of three runs keeps one-off scheduler noise out of the ratio.
template <typename F>
double median_ms(F&& body) {
    double t[3];
    for (double& v : t) {
        auto start = Clock::now();
        body();
        v = ms_since(start);
    }
    if (t[0] > t[1]) std::swap(t[0], t[1]);
    if (t[1] > t[2]) std::swap(t[1], t[2]);
    if (t[0] > t[1]) std::swap(t[0], t[1]);
    return t[1];
}

}  // namespace

int main() {
    scenario::ScenarioConfig sc;
    const int n_mu = 8;
    const int n_windows = 400;
    const uint64_t seed = 99;

    std::printf("%-28s %12s %12s %8s\n", "kernel", "serial ms", "parallel ms", "speedup");

    double gen_serial = median_ms(
        [&] { scenario::generate_dataset_serial(sc, n_mu, n_windows, 0.5, seed); });
    double gen_par =
        median_ms([&] { scenario::generate_dataset(sc, n_mu, n_windows, 0.5, seed); });
    std::printf("%-28s %12.1f %12.1f %7.2fx\n", "dataset generation", gen_serial, gen_par,
                gen_serial / gen_par);

    auto ds = scenario::generate_dataset(sc, n_mu, n_windows, 0.5, seed);
    auto active = ml::all_factors();
    ml::FeatureMatrix X(ds.rows.size(), ml::encoded_width(active));
    std::vector<int> y;
    for (size_t i = 0; i < ds.rows.size(); ++i) {
        ml::encode_factors(ds.rows[i].factors, active, X.row(i));
        y.push_back(ds.rows[i].label == scenario::WindowLabel::Spoof ? 1 : 0);
    }
    auto stats = ml::fit_preprocess(X, ml::onehot_flags(active));
    ml::FeatureMatrix P = ml::apply_preprocess(stats, X);

    ml::ForestHyperparams hp;
    hp.n_trees = 100;
    double fit_serial = median_ms([&] { ml::train_forest_serial(P, y, active, hp, seed); });
    double fit_par = median_ms([&] { ml::train_forest(P, y, active, hp, seed); });
    std::printf("%-28s %12.1f %12.1f %7.2fx\n", "forest training", fit_serial, fit_par,
                fit_serial / fit_par);

    // ratio sanity: both paths must agree before their times mean anything
    auto a = ml::train_forest_serial(P, y, active, hp, seed);
    auto b = ml::train_forest(P, y, active, hp, seed);
    int disagreements = 0;
    for (size_t i = 0; i < P.rows; ++i)
        if (a.predict_score(P.row(i)) != b.predict_score(P.row(i))) ++disagreements;
    std::printf("%-28s %12d\n", "prediction disagreements", disagreements);
    return disagreements == 0 ? 0 : 1;
}
