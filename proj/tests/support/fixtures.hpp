#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ssnn/encoder.hpp"
#include "ssnn/engine.hpp"
#include "ssnn/pipeline.hpp"

namespace ssnn::test {

inline double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

inline std::size_t pick(std::mt19937_64& gen, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(gen() % (hi - lo + 1));
}

struct Instance {
    Network net;
    EncodedStimulus stimulus;
    NeuronParams neuron;
    StdpParams stdp;
    Mode mode = Mode::train;
    bool inhibition = true;
};

/// Small random network plus stimulus, with parameters drawn wide enough to
/// exercise firing, refractoriness, the floor reset and both STDP sides.
inline Instance random_instance(std::mt19937_64& gen) {
    Instance in;
    const std::size_t inputs = pick(gen, 1, 32);
    const std::size_t outputs = pick(gen, 1, 8);
    const auto T = static_cast<std::int32_t>(pick(gen, 1, 64));

    in.neuron.decay_D = 0.5 * unit_uniform(gen);
    in.neuron.p_min = -0.2 - 2.0 * unit_uniform(gen);
    in.neuron.t_refract = static_cast<std::int32_t>(pick(gen, 0, 6));
    in.stdp.a_plus = 0.1 + unit_uniform(gen);
    in.stdp.a_minus = -0.1 - unit_uniform(gen);
    in.stdp.tau_plus = 1.0 + 9.0 * unit_uniform(gen);
    in.stdp.tau_minus = 1.0 + 9.0 * unit_uniform(gen);
    in.stdp.sigma = 0.05 + 0.9 * unit_uniform(gen);
    in.mode = gen() % 2 == 0 ? Mode::train : Mode::classify;
    in.inhibition = gen() % 4 != 0;

    in.net = Network(inputs, outputs);
    for (auto& w : in.net.weights) w = unit_uniform(gen);

    EncoderParams enc;
    enc.presentation_T = T;
    enc.rp_min = static_cast<std::int32_t>(pick(gen, 1, 5));
    std::vector<double> rates(inputs);
    const double active = unit_uniform(gen);
    for (auto& r : rates)
        if (unit_uniform(gen) < active) r = unit_uniform(gen) / enc.rp_min;
    in.stimulus.rates = rates;
    in.stimulus.schedule = make_schedule(rates, T);
    in.stimulus.presentation_T = T;
    in.stimulus.threshold = 0.2 + 3.0 * unit_uniform(gen);
    return in;
}

/// Ten stroke patterns on a square canvas, jittered by a seeded generator.
/// Each class lights a distinct set of rows and columns.
inline Dataset synthetic_dataset(std::size_t count, std::uint64_t seed, std::size_t side = 12) {
    std::mt19937_64 gen(seed);
    Dataset d;
    d.rows = side;
    d.cols = side;
    for (std::size_t n = 0; n < count; ++n) {
        const auto label = static_cast<std::uint8_t>(n % kClassCount);
        Image img{side, side, std::vector<std::uint8_t>(side * side, 0)};
        const std::size_t shift = pick(gen, 0, 1);
        const std::size_t bar = (label * side / kClassCount + shift) % side;
        for (std::size_t k = 0; k < side; ++k) {
            if (label % 2 == 0)
                img.pixels[bar * side + k] = 255;
            else
                img.pixels[k * side + bar] = 255;
        }
        for (auto& p : img.pixels)
            if (p == 0 && unit_uniform(gen) < 0.05) p = static_cast<std::uint8_t>(pick(gen, 1, 120));
        d.images.push_back(std::move(img));
        d.labels.push_back(label);
    }
    return d;
}

}  // namespace ssnn::test
