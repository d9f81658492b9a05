#include "ssnn/neuron.hpp"

#include <cmath>
#include <string>

#include "ssnn/errors.hpp"

namespace ssnn {

void NeuronParams::validate() const {
    if (!std::isfinite(decay_D) || decay_D < 0.0) throw ConfigError("neuron.decay_D", "must be finite and >= 0");
    if (!std::isfinite(p_min)) throw ConfigError("neuron.p_min", "must be finite");
    if (!std::isfinite(resting_R_p) || p_min > resting_R_p)
        throw ConfigError("neuron.resting_R_p", "must be finite and >= neuron.p_min");
    if (!std::isfinite(p_refract) || p_refract > resting_R_p)
        throw ConfigError("neuron.p_refract", "must be finite and <= neuron.resting_R_p");
    if (t_refract < 0) throw ConfigError("neuron.t_refract", "must be >= 0");
}

NeuronState resting_state(const NeuronParams& params) {
    return NeuronState{params.resting_R_p, 0, std::nullopt};
}

StepResult step_potential(const NeuronState& state, double weighted_input, double threshold,
                          const NeuronParams& params, TimeUnit now) {
    if (!std::isfinite(weighted_input)) throw InvariantError("step_potential: non-finite weighted input");
    if (!(threshold > params.resting_R_p))
        throw InvariantError("step_potential: threshold " + std::to_string(threshold) +
                             " not above resting potential");

    StepResult out{state, false, state.potential};
    if (state.refract_remaining > 0) {
        --out.state.refract_remaining;
        return out;
    }

    double next = state.potential + weighted_input;
    if (state.potential > params.resting_R_p) next -= params.decay_D;
    out.drive = next;

    if (next >= threshold) {
        out.fired = true;
        out.state.potential = params.p_refract;
        out.state.refract_remaining = params.t_refract;
        out.state.last_spike_time = now;
    } else if (next <= params.p_min) {
        out.state.potential = params.resting_R_p;
    } else {
        out.state.potential = next;
    }
    return out;
}

}  // namespace ssnn
