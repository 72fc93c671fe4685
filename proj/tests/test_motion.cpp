#include <catch2/catch.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vls/motion.hpp"

using namespace vls;
using std::numbers::pi;

TEST_CASE("motionless subject sits at the rest distance") {
    SubjectMotion motion;
    motion.breathing_amplitude_m = 0.0;
    motion.heartbeat_amplitude_m = 0.0;
    for (double t : {0.0, 0.37, 5.0, 123.4})
        CHECK(chest_displacement(motion, t) == Approx(motion.rest_distance_m).epsilon(1e-15));
}

TEST_CASE("full inhale lands at rest distance minus amplitude") {
    SubjectMotion motion;
    motion.heartbeat_amplitude_m = 0.0;
    motion.breathing_phase_rad = 0.0;
    const double t = 1.0 / (4.0 * motion.breathing_rate_hz);  // sine peak
    CHECK(chest_displacement(motion, t) ==
          Approx(motion.rest_distance_m - motion.breathing_amplitude_m).epsilon(1e-12));
}

TEST_CASE("aligned breathing and heartbeat peaks add") {
    SubjectMotion motion;
    motion.rest_distance_m = 0.4;
    motion.breathing_amplitude_m = 0.005;
    motion.heartbeat_amplitude_m = 0.001;
    motion.breathing_rate_hz = 0.25;
    motion.heartbeat_rate_hz = 1.25;
    // both sines hit +1 at t = 1: phases pi/2 and 5 pi/2
    CHECK(chest_displacement(motion, 1.0) == Approx(0.394).epsilon(1e-12));
}

TEST_CASE("negative time rejected") {
    SubjectMotion motion;
    CHECK_THROWS_AS(chest_displacement(motion, -0.001), validation_error);
}

TEST_CASE("motion validation") {
    SubjectMotion motion;
    motion.rest_distance_m = 0.005;  // below the amplitude sum
    CHECK_THROWS_AS(motion.validate(), validation_error);

    motion = SubjectMotion{};
    motion.breathing_amplitude_m = -1e-4;
    CHECK_THROWS_AS(motion.validate(), validation_error);

    motion = SubjectMotion{};
    motion.breathing_rate_hz = 0.0;
    CHECK_THROWS_AS(motion.validate(), validation_error);

    motion = SubjectMotion{};
    motion.heartbeat_harmonic2 = 0.5;
    motion.heartbeat_harmonic3 = 0.25;
    CHECK_NOTHROW(motion.validate());

    // harmonics count toward the reachable excursion
    motion.rest_distance_m = 0.0058;
    motion.breathing_amplitude_m = 0.005;
    motion.heartbeat_amplitude_m = 0.0005;
    CHECK_THROWS_AS(motion.validate(), validation_error);
}

TEST_CASE("plausibility warnings") {
    SubjectMotion motion;  // defaults: 1 cm breathing pp, 0.1 cm heartbeat pp
    CHECK(motion.warnings().empty());

    motion.breathing_amplitude_m = 0.03;  // 6 cm peak-to-peak
    CHECK(motion.warnings().size() == 1);

    motion.heartbeat_amplitude_m = 0.002;  // 0.4 cm peak-to-peak
    motion.rest_distance_m = 0.5;
    CHECK(motion.warnings().size() == 2);
}

TEST_CASE("constant schedule reproduces fixed rates") {
    SubjectMotion fixed;
    SubjectMotion scheduled = fixed;
    scheduled.rate_schedule =
        RateSchedule{{{0.0, fixed.breathing_rate_hz, fixed.heartbeat_rate_hz}}};
    for (double t : {0.0, 0.123, 3.7, 59.99})
        CHECK(chest_displacement(scheduled, t) ==
              Approx(chest_displacement(fixed, t)).epsilon(1e-12));
}

TEST_CASE("linear ramp integrates phase in closed form") {
    RateSchedule schedule{{{0.0, 0.5, 2.0}, {900.0, 0.2, 7.0 / 6.0}}};
    schedule.validate();
    for (double t : {0.0, 10.0, 450.0, 900.0}) {
        const double slope_b = (0.2 - 0.5) / 900.0;
        const double expected_b = 2.0 * pi * (0.5 * t + slope_b * t * t / 2.0);
        CHECK(schedule.breathing_phase(t) == Approx(expected_b).margin(1e-9));
    }
    // constant extrapolation after the last knot
    const double phase_end = schedule.breathing_phase(900.0);
    CHECK(schedule.breathing_phase(910.0) == Approx(phase_end + 2.0 * pi * 0.2 * 10.0).margin(1e-9));
    CHECK(schedule.breathing_hz_at(450.0) == Approx(0.35).epsilon(1e-12));
    CHECK(schedule.heart_hz_at(0.0) == Approx(2.0));
    CHECK(schedule.heart_hz_at(1200.0) == Approx(7.0 / 6.0));
}

TEST_CASE("schedule validation") {
    RateSchedule empty;
    CHECK_THROWS_AS(empty.validate(), validation_error);
    RateSchedule unsorted{{{10.0, 0.3, 1.0}, {5.0, 0.3, 1.0}}};
    CHECK_THROWS_AS(unsorted.validate(), validation_error);
    RateSchedule bad_rate{{{0.0, 0.0, 1.0}}};
    CHECK_THROWS_AS(bad_rate.validate(), validation_error);
}
