#include <catch2/catch.hpp>

#include <vector>

#include "oracles.hpp"
#include "vls/metrics.hpp"

using namespace vls;

TEST_CASE("absolute error percentage") {
    CHECK(absolute_error_pct(72.0, 72.0) == 0.0);
    CHECK(absolute_error_pct(70.0, 72.0) == Approx(100.0 * 2.0 / 72.0).epsilon(1e-12));
    CHECK(absolute_error_pct(70.0, 72.0) == Approx(2.7778).margin(5e-5));
    // the pipeline's bin-quantized output against the 15 BPM truth
    CHECK(absolute_error_pct(14.6484, 15.0) == Approx(2.344).margin(1e-9));
    CHECK_THROWS_AS(absolute_error_pct(70.0, 0.0), validation_error);
    CHECK_THROWS_AS(absolute_error_pct(70.0, -5.0), validation_error);
}

TEST_CASE("error is symmetric in the deviation sign") {
    oracle::Rng rng(8);
    for (int i = 0; i < 100; ++i) {
        const double ref = rng.uniform(5.0, 200.0);
        const double delta = rng.uniform(0.0, 20.0);
        CHECK(absolute_error_pct(ref + delta, ref) ==
              Approx(absolute_error_pct(ref - delta, ref)).epsilon(1e-12));
    }
}

TEST_CASE("error is unit-free") {
    oracle::Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const double ref = rng.uniform(5.0, 200.0);
        const double est = rng.uniform(5.0, 200.0);
        CHECK(absolute_error_pct(est, ref) ==
              Approx(absolute_error_pct(est / 60.0, ref / 60.0)).epsilon(1e-12));
    }
}

namespace {

VitalsReport trial(double est_b, double est_h, double ref_b, double ref_h) {
    VitalsReport r;
    r.breathing.mean_bpm = est_b;
    r.breathing.reference_bpm = ref_b;
    r.heart.mean_bpm = est_h;
    r.heart.reference_bpm = ref_h;
    return r;
}

}  // namespace

TEST_CASE("ensemble accuracy counts jointly-within-tolerance trials") {
    std::vector<VitalsReport> trials{trial(15.0, 72.0, 15.0, 72.0), trial(15.0, 72.0, 15.0, 72.0)};
    CHECK(ensemble_accuracy(trials, 0.0) == 1.0);

    trials[1] = trial(15.0, 80.0, 15.0, 72.0);  // heart off by 8
    CHECK(ensemble_accuracy(trials, 2.9296875) == 0.5);
    CHECK(ensemble_accuracy(trials, 10.0) == 1.0);

    // a missing estimate counts as a miss
    trials[1] = trial(15.0, 0.0, 15.0, 72.0);
    trials[1].heart.mean_bpm.reset();
    CHECK(ensemble_accuracy(trials, 100.0) == 0.5);
}

TEST_CASE("ensemble accuracy demands references") {
    std::vector<VitalsReport> trials{trial(15.0, 72.0, 15.0, 72.0)};
    trials[0].heart.reference_bpm.reset();
    CHECK_THROWS_AS(ensemble_accuracy(trials, 1.0), validation_error);
    CHECK_THROWS_AS(ensemble_accuracy(std::vector<VitalsReport>{}, 1.0), validation_error);
}

TEST_CASE("accuracy is non-decreasing in tolerance") {
    oracle::Rng rng(10);
    std::vector<VitalsReport> trials;
    for (int i = 0; i < 40; ++i)
        trials.push_back(trial(15.0 + rng.uniform(-5.0, 5.0), 72.0 + rng.uniform(-10.0, 10.0),
                               15.0, 72.0));
    double prev = -1.0;
    for (double tol : {0.0, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double acc = ensemble_accuracy(trials, tol);
        CHECK(acc >= prev);
        prev = acc;
    }
    CHECK(prev == 1.0);
}
