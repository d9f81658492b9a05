#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ssnn/encoder.hpp"
#include "ssnn/neuron.hpp"
#include "ssnn/stdp.hpp"

namespace ssnn {

enum class Mode { train, classify };

/// Activity pattern of a time unit; selects which processes run.
enum class Scenario : std::uint8_t { idle = 0, input_only = 1, output_only = 2, both = 3 };

inline constexpr std::size_t kScenarioCount = 4;

Scenario classify_scenario(bool any_input, bool any_output) noexcept;
const char* scenario_name(Scenario s) noexcept;

/// Cycle cost of each process inside one time unit:
/// spike check, potential add, potential decay, weight change.
struct TimeUnitCost {
    std::uint32_t tsc = 1;
    std::uint32_t tpa = 2;
    std::uint32_t tpd = 1;
    std::uint32_t twc = 4;

    /// Requires tsc == tpd < tpa < twc.
    void validate() const;

    /// Event-driven cost: the potential adder runs only on input spikes,
    /// the weight-change block only on output spikes while training.
    std::uint64_t scenario_cycles(Scenario s, Mode mode) const noexcept;

    /// Cost of a time unit when every process runs unconditionally.
    std::uint64_t dense_cycles() const noexcept { return std::uint64_t{tsc} + tpa + tpd + twc; }
};

struct RunStats {
    std::uint64_t time_units_total = 0;
    std::uint64_t cycles_total = 0;
    std::array<std::uint64_t, kScenarioCount> tu_histogram{};
    std::uint64_t cycles_max_tu = 0;
    std::uint64_t synaptic_ops = 0;  // weight reads plus weight updates

    double cycles_avg_tu() const noexcept;
    void record_time_unit(std::uint64_t cycles, Scenario s) noexcept;
    void merge(const RunStats& other) noexcept;

    bool operator==(const RunStats&) const = default;
};

/// Everything that stays fixed while a network runs.
struct Dynamics {
    NeuronParams neuron;
    StdpParams stdp;
    StdpTable table;
    TimeUnitCost cost;
    bool lateral_inhibition = true;

    Dynamics(const NeuronParams& n, const StdpParams& s, const TimeUnitCost& c, bool inhibition = true);
};

/// Ascending spike times, pruned to those still able to pair.
using SpikeHistory = std::vector<TimeUnit>;

/// Most recent spike whose distance back from `now` lies in [lo, hi].
std::optional<TimeUnit> latest_in_window(std::span<const TimeUnit> history, TimeUnit now, std::int32_t lo,
                                         std::int32_t hi) noexcept;

/// Fully connected input -> output layer and its per-presentation state.
struct Network {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<double> weights;  // row-major, weights[i * outputs + o]
    std::vector<NeuronState> out_states;
    std::vector<SpikeHistory> pre_spikes;   // per input neuron
    std::vector<SpikeHistory> post_spikes;  // per output neuron
    double threshold = 1.0;
    bool inhibition_fired = false;
    std::optional<std::size_t> first_spiker;

    Network() = default;
    Network(std::size_t input_count, std::size_t output_count, double initial_weight = 0.0);

    double& weight(std::size_t i, std::size_t o) { return weights[i * outputs + o]; }
    double weight(std::size_t i, std::size_t o) const { return weights[i * outputs + o]; }

    /// Start of a presentation: neurons to rest, spike memories cleared.
    void reset(const NeuronParams& params, double new_threshold);
};

struct TimeUnitResult {
    std::vector<std::uint32_t> fired;
    std::uint64_t cycles = 0;
    Scenario scenario = Scenario::idle;
    std::uint64_t synaptic_ops = 0;
};

/// Advances the network by one time unit.
///
/// Training applies nearest-neighbour STDP: an input spike depresses its
/// synapses against each output's most recent spike inside the plasticity
/// window, an output spike potentiates its synapses against each input's
/// most recent spike inside the window. The first output spike of
/// a presentation inhibits every other non-refractory output by threshold / 2.
/// When several outputs fire together the one with the largest drive wins,
/// ties going to the lowest id.
///
/// Throws InputError if an input id is out of range.
TimeUnitResult run_time_unit(Network& net, std::span<const std::uint32_t> incoming, Mode mode,
                             const Dynamics& dyn, TimeUnit t);

struct PresentationResult {
    std::vector<std::uint32_t> spike_counts;
    std::vector<SpikeTimes> spike_trains;  // per output neuron
    std::optional<std::size_t> first_spiker;
    std::vector<double> final_potentials;
    RunStats stats;
};

/// Resets the network, loads the stimulus threshold and runs every time unit
/// of the presentation.
PresentationResult run_presentation(Network& net, const EncodedStimulus& stimulus, Mode mode,
                                    const Dynamics& dyn);

/// Reference simulator that visits every synapse and neuron each time unit.
/// Produces the same spikes and weights as run_presentation; its cycle
/// count charges every process on every time unit.
PresentationResult dense_oracle(Network& net, const EncodedStimulus& stimulus, Mode mode,
                                const Dynamics& dyn);

}  // namespace ssnn
