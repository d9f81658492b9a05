#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ssnn/encoder.hpp"
#include "ssnn/engine.hpp"
#include "ssnn/neuron.hpp"
#include "ssnn/stdp.hpp"

namespace ssnn {

struct NetworkParams {
    std::size_t outputs = 16;
    double init_lo = 0.4;  // initial weights ~ U[init_lo, init_hi] * w_max
    double init_hi = 0.6;
    bool lateral_inhibition = true;
};

struct PipelineParams {
    std::uint64_t seed = 1;
    std::size_t train_limit = 1000;
    std::size_t label_limit = 1000;
    std::size_t classify_limit = 500;
    std::size_t threads = 1;
};

struct DataPaths {
    std::filesystem::path train_images;
    std::filesystem::path train_labels;
    std::filesystem::path test_images;
    std::filesystem::path test_labels;
};

struct BenchParams {
    std::vector<double> active_fractions{0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.4, 0.7, 1.0};
    std::size_t inputs = 784;
    std::size_t presentations = 8;
};

/// All tunables. Keys in the config file are `section.field`.
struct Config {
    NeuronParams neuron;
    StdpParams stdp;
    EncoderParams encoder;
    TimeUnitCost cost;
    NetworkParams network;
    PipelineParams pipeline;
    DataPaths data;
    BenchParams bench;

    /// Throws ConfigError naming the offending key.
    void validate() const;

    Dynamics dynamics() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, duplicate
/// keys and malformed values are ConfigErrors. Missing keys keep defaults.
/// Relative data paths are resolved against `base_dir`.
Config parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

Config load_config(const std::filesystem::path& path);

/// Renders every key; parse_config(format_config(c)) reproduces c.
std::string format_config(const Config& config);

}  // namespace ssnn
