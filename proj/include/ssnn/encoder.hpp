#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ssnn {

/// Row-major grid of real values.
struct Grid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Grid() = default;
    Grid(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}
    Grid(std::size_t r, std::size_t c, std::vector<double> v);

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    bool operator==(const Grid&) const = default;
};

/// Square convolution kernel with odd side length.
struct Kernel {
    std::size_t side = 0;
    std::vector<double> coeffs;

    static Kernel box(std::size_t side);
    static Kernel identity(std::size_t side);

    bool operator==(const Kernel&) const = default;
};

/// Which aggregate of the input rates scales the variable threshold.
///   max : the single fastest input
///   sum : total input activity of the layer
enum class ThresholdBasis { max, sum };

struct EncoderParams {
    Kernel kernel = Kernel::box(3);
    std::int32_t rp_min = 4;          // minimum inter-spike interval of an input
    double r_max = 255.0;             // receptive-field value mapped to the top rate
    std::int32_t presentation_T = 40; // time units per image
    double threshold_fraction = 1.0 / 3.0;
    double min_threshold = 1.0;       // used when an image produces no input activity
    ThresholdBasis threshold_basis = ThresholdBasis::sum;

    void validate() const;
};

using SpikeTimes = std::vector<std::int32_t>;

struct EncodedStimulus {
    std::vector<double> rates;          // spikes per time unit, one per input neuron
    std::vector<SpikeTimes> schedule;   // ascending spike times in [1, presentation_T]
    double threshold = 0.0;
    std::int32_t presentation_T = 0;

    /// Input ids spiking at each time unit; entry t-1 holds time t.
    std::vector<std::vector<std::uint32_t>> by_time() const;
};

/// Zero-padded same-size convolution centred on each pixel.
/// Throws InputError on an empty image.
Grid receptive_field(const Grid& image, const Kernel& kernel);

/// Rate coding: (rf / r_max) / rp_min, clamped to [0, 1 / rp_min].
double firing_rate(double rf, const EncoderParams& params);

/// Deterministic periodic spike trains. A neuron at rate FR spikes at
/// ceil(k / FR) for k = 1, 2, ... up to presentation_T.
std::vector<SpikeTimes> make_schedule(std::span<const double> rates, std::int32_t presentation_T);

/// Per-image threshold: fraction * level * presentation_T * w_max, where level
/// is the max or the sum of the rates per threshold_basis. Falls back to
/// min_threshold when every rate is zero.
double variable_threshold(std::span<const double> rates, const EncoderParams& params, double w_max);

/// Full encoding chain: blur, rate code, schedule, threshold.
EncodedStimulus encode(const Grid& image, const EncoderParams& params, double w_max);

}  // namespace ssnn
