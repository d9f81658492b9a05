#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "ssnn/errors.hpp"
#include "ssnn/neuron.hpp"

using namespace ssnn;

namespace {

NeuronParams wide() {
    NeuronParams p;
    p.decay_D = 0.1;
    p.p_min = -100.0;
    p.resting_R_p = 0.0;
    p.p_refract = 0.0;
    p.t_refract = 3;
    return p;
}

}  // namespace

TEST_CASE("neuron at rest with no input stays at rest") {
    NeuronParams p;
    const auto r = step_potential(resting_state(p), 0.0, 1.0, p, 1);
    CHECK_FALSE(r.fired);
    CHECK(r.state.potential == p.resting_R_p);
}

TEST_CASE("integration subtracts the leak above rest") {
    const NeuronParams p = wide();
    NeuronState s{1.0, 0, std::nullopt};
    const auto r = step_potential(s, 0.5, 100.0, p, 1);
    CHECK_FALSE(r.fired);
    CHECK(r.state.potential == doctest::Approx(1.4));
}

TEST_CASE("no leak at or below rest") {
    const NeuronParams p = wide();
    NeuronState s{-0.5, 0, std::nullopt};
    CHECK(step_potential(s, 0.2, 100.0, p, 1).state.potential == doctest::Approx(-0.3));
}

TEST_CASE("reaching threshold fires and enters refractory") {
    const NeuronParams p = wide();
    NeuronState s{2.0, 0, std::nullopt};
    const auto r = step_potential(s, 0.1, 2.0, p, 7);  // 2.0 + 0.1 - 0.1 lands exactly on threshold
    CHECK(r.fired);
    CHECK(r.state.potential == p.p_refract);
    CHECK(r.state.refract_remaining == p.t_refract);
    REQUIRE(r.state.last_spike_time);
    CHECK(*r.state.last_spike_time == 7);
}

TEST_CASE("falling to the floor resets to rest") {
    NeuronParams p;  // p_min = -1
    NeuronState s{-0.9, 0, std::nullopt};
    const auto r = step_potential(s, -5.0, 1.0, p, 1);
    CHECK_FALSE(r.fired);
    CHECK(r.state.potential == p.resting_R_p);
}

TEST_CASE("refractory neuron ignores input for exactly t_refract steps") {
    const NeuronParams p = wide();
    NeuronState s{0.0, 0, std::nullopt};
    auto r = step_potential(s, 10.0, 1.0, p, 1);
    REQUIRE(r.fired);
    s = r.state;
    for (int k = 0; k < p.t_refract; ++k) {
        r = step_potential(s, 1000.0, 1.0, p, 2 + k);
        CHECK_FALSE(r.fired);
        CHECK(r.state.potential == p.p_refract);
        s = r.state;
    }
    CHECK(s.refract_remaining == 0);
    CHECK(step_potential(s, 1000.0, 1.0, p, 10).fired);
}

TEST_CASE("pure decay descends by exactly D until reaching rest") {
    NeuronParams p;
    p.decay_D = 0.25;
    NeuronState s{2.0, 0, std::nullopt};
    double previous = s.potential;
    int steps = 0;
    while (s.potential > p.resting_R_p) {
        s = step_potential(s, 0.0, 10.0, p, ++steps).state;
        CHECK(s.potential == doctest::Approx(previous - p.decay_D));
        previous = s.potential;
    }
    CHECK(steps == 8);
    // Once at or below rest it stays put.
    CHECK(step_potential(s, 0.0, 10.0, p, 99).state.potential == s.potential);
}

TEST_CASE("non-finite input and a threshold at rest are rejected") {
    NeuronParams p;
    CHECK_THROWS_AS(step_potential(resting_state(p), std::numeric_limits<double>::quiet_NaN(), 1.0, p, 1),
                    InvariantError);
    CHECK_THROWS_AS(step_potential(resting_state(p), 0.0, p.resting_R_p, p, 1), InvariantError);
}

TEST_CASE("parameter validation names the field") {
    NeuronParams p;
    p.p_refract = 0.5;
    try {
        p.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "neuron.p_refract");
    }
    p = NeuronParams{};
    p.p_min = 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = NeuronParams{};
    p.t_refract = -1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("potential stays in the admissible set under random drive") {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> input(-3.0, 3.0);
    NeuronParams p;
    const double threshold = 2.5;
    for (int run = 0; run < 50; ++run) {
        NeuronState s = resting_state(p);
        for (int t = 1; t <= 200; ++t) {
            const auto r = step_potential(s, input(gen), threshold, p, t);
            s = r.state;
            const double v = s.potential;
            const bool ok = v == p.p_refract || v == p.resting_R_p || (v > p.p_min && v < threshold);
            REQUIRE(ok);
            CHECK(s.refract_remaining >= 0);
            CHECK(s.refract_remaining <= p.t_refract);
        }
    }
}

TEST_CASE("step is deterministic") {
    NeuronParams p;
    NeuronState s{0.7, 0, std::nullopt};
    const auto a = step_potential(s, 0.3, 2.0, p, 5);
    const auto b = step_potential(s, 0.3, 2.0, p, 5);
    CHECK(a.state.potential == b.state.potential);
    CHECK(a.fired == b.fired);
}
