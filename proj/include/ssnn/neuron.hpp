#pragma once

#include <cstdint>
#include <optional>

namespace ssnn {

/// Discrete simulation step index. Time unit 0 precedes the first input.
using TimeUnit = std::int64_t;

struct NeuronParams {
    double decay_D = 0.25;      // leak per time unit, applied only above rest
    double p_min = -1.0;        // floor; at or below it the neuron resets to rest
    double resting_R_p = 0.0;
    double p_refract = 0.0;     // potential right after a spike
    std::int32_t t_refract = 5; // time units during which input is ignored

    /// Throws ConfigError naming the first violated field.
    void validate() const;
};

struct NeuronState {
    double potential = 0.0;
    std::int32_t refract_remaining = 0;
    std::optional<TimeUnit> last_spike_time;
};

/// Neuron at rest with no spike history.
NeuronState resting_state(const NeuronParams& params);

struct StepResult {
    NeuronState state;
    bool fired = false;
    /// Potential after integration and decay, before reset or floor.
    /// Equals the unchanged potential while refractory.
    double drive = 0.0;
};

/// One time unit of the simplified LIF update.
///
/// A refractory neuron only counts down. Otherwise the weighted input is
/// added and the leak D subtracted (the leak only applies while the old
/// potential is above rest). Reaching `threshold` fires and enters the
/// refractory phase at p_refract; falling to p_min or below resets to rest.
///
/// Throws InvariantError on a non-finite input or threshold <= resting_R_p.
StepResult step_potential(const NeuronState& state, double weighted_input, double threshold,
                          const NeuronParams& params, TimeUnit now);

}  // namespace ssnn
