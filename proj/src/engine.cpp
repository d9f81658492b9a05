#include "ssnn/engine.hpp"

#include <algorithm>
#include <string>

#include "ssnn/errors.hpp"

namespace ssnn {

Scenario classify_scenario(bool any_input, bool any_output) noexcept {
    return static_cast<Scenario>((any_input ? 1 : 0) | (any_output ? 2 : 0));
}

const char* scenario_name(Scenario s) noexcept {
    switch (s) {
        case Scenario::idle: return "idle";
        case Scenario::input_only: return "input_only";
        case Scenario::output_only: return "output_only";
        case Scenario::both: return "both";
    }
    return "?";
}

void TimeUnitCost::validate() const {
    if (tsc == 0) throw ConfigError("cost.tsc", "must be > 0");
    if (tpd != tsc) throw ConfigError("cost.tpd", "must equal cost.tsc");
    if (!(tpa > tsc)) throw ConfigError("cost.tpa", "must exceed cost.tsc");
    if (!(twc > tpa)) throw ConfigError("cost.twc", "must exceed cost.tpa");
}

std::uint64_t TimeUnitCost::scenario_cycles(Scenario s, Mode mode) const noexcept {
    const bool input = s == Scenario::input_only || s == Scenario::both;
    const bool output = s == Scenario::output_only || s == Scenario::both;
    std::uint64_t cycles = std::uint64_t{tsc} + tpd;
    if (input) cycles += tpa;
    if (output && mode == Mode::train) cycles += twc;
    return cycles;
}

double RunStats::cycles_avg_tu() const noexcept {
    return time_units_total == 0 ? 0.0 : static_cast<double>(cycles_total) / static_cast<double>(time_units_total);
}

void RunStats::record_time_unit(std::uint64_t cycles, Scenario s) noexcept {
    ++time_units_total;
    cycles_total += cycles;
    ++tu_histogram[static_cast<std::size_t>(s)];
    cycles_max_tu = std::max(cycles_max_tu, cycles);
}

void RunStats::merge(const RunStats& other) noexcept {
    time_units_total += other.time_units_total;
    cycles_total += other.cycles_total;
    for (std::size_t k = 0; k < kScenarioCount; ++k) tu_histogram[k] += other.tu_histogram[k];
    cycles_max_tu = std::max(cycles_max_tu, other.cycles_max_tu);
    synaptic_ops += other.synaptic_ops;
}

Dynamics::Dynamics(const NeuronParams& n, const StdpParams& s, const TimeUnitCost& c, bool inhibition)
    : neuron(n), stdp(s), table(s), cost(c), lateral_inhibition(inhibition) {
    neuron.validate();
    cost.validate();
}

Network::Network(std::size_t input_count, std::size_t output_count, double initial_weight)
    : inputs(input_count),
      outputs(output_count),
      weights(input_count * output_count, initial_weight),
      out_states(output_count),
      pre_spikes(input_count),
      post_spikes(output_count) {}

void Network::reset(const NeuronParams& params, double new_threshold) {
    std::fill(out_states.begin(), out_states.end(), resting_state(params));
    for (auto& h : pre_spikes) h.clear();
    for (auto& h : post_spikes) h.clear();
    threshold = new_threshold;
    inhibition_fired = false;
    first_spiker.reset();
}

std::optional<TimeUnit> latest_in_window(std::span<const TimeUnit> history, TimeUnit now, std::int32_t lo,
                                         std::int32_t hi) noexcept {
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
        const TimeUnit back = now - *it;
        if (back < lo) continue;
        if (back <= hi) return *it;
        break;
    }
    return std::nullopt;
}

namespace {

void remember(SpikeHistory& h, TimeUnit t, std::int32_t hi) {
    std::size_t stale = 0;
    while (stale < h.size() && t - h[stale] > hi) ++stale;
    h.erase(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(stale));
    h.push_back(t);
}

// Winner among neurons that fired in the same time unit: largest drive,
// then lowest id. `fired` is ascending.
std::size_t pick_winner(std::span<const std::uint32_t> fired, std::span<const double> drive) {
    std::size_t best = fired.front();
    for (std::uint32_t o : fired)
        if (drive[o] > drive[best]) best = o;
    return best;
}

void inhibit_others(Network& net, std::size_t winner) {
    const double amount = net.threshold / 2.0;
    for (std::size_t o = 0; o < net.outputs; ++o) {
        if (o == winner || net.out_states[o].refract_remaining > 0) continue;
        net.out_states[o].potential -= amount;
    }
}

void check_shape(const Network& net, const EncodedStimulus& stimulus) {
    if (stimulus.schedule.size() != net.inputs)
        throw InputError("stimulus has " + std::to_string(stimulus.schedule.size()) + " inputs, network has " +
                         std::to_string(net.inputs));
    if (stimulus.presentation_T < 1) throw InputError("stimulus presentation_T must be >= 1");
}

PresentationResult start_result(const Network& net) {
    PresentationResult r;
    r.spike_counts.assign(net.outputs, 0);
    r.spike_trains.assign(net.outputs, {});
    return r;
}

void finish_result(PresentationResult& r, const Network& net) {
    r.first_spiker = net.first_spiker;
    r.final_potentials.reserve(net.outputs);
    for (const auto& s : net.out_states) r.final_potentials.push_back(s.potential);
}

}  // namespace

TimeUnitResult run_time_unit(Network& net, std::span<const std::uint32_t> incoming, Mode mode,
                             const Dynamics& dyn, TimeUnit t) {
    std::vector<std::uint32_t> in(incoming.begin(), incoming.end());
    std::sort(in.begin(), in.end());
    in.erase(std::unique(in.begin(), in.end()), in.end());
    if (!in.empty() && in.back() >= net.inputs)
        throw InputError("input neuron id " + std::to_string(in.back()) + " out of range");

    const std::size_t O = net.outputs;
    std::uint64_t ops = 0;

    const std::int32_t lo = dyn.table.window_lo();
    const std::int32_t hi = dyn.table.window_hi();

    // Pre-synaptic spikes: depress against each output's latest spike.
    for (std::uint32_t i : in) {
        if (mode == Mode::train) {
            for (std::size_t o = 0; o < O; ++o) {
                const auto post = latest_in_window(net.post_spikes[o], t, lo, hi);
                if (!post) continue;
                const double dw = dyn.table.delta_w(*post - t);
                if (dw == 0.0) continue;
                double& w = net.weight(i, o);
                w = apply_weight_update(w, dw, dyn.stdp);
                ++ops;
            }
        }
        remember(net.pre_spikes[i], t, hi);
    }

    TimeUnitResult result;
    std::vector<double> drive(O, 0.0);
    for (std::size_t o = 0; o < O; ++o) {
        double sum = 0.0;
        for (std::uint32_t i : in) sum += net.weight(i, o);
        ops += in.size();
        const StepResult step = step_potential(net.out_states[o], sum, net.threshold, dyn.neuron, t);
        net.out_states[o] = step.state;
        drive[o] = step.drive;
        if (step.fired) {
            result.fired.push_back(static_cast<std::uint32_t>(o));
            remember(net.post_spikes[o], t, hi);
        }
    }

    // Post-synaptic spikes: potentiate against each input's latest spike.
    if (mode == Mode::train) {
        for (std::uint32_t o : result.fired) {
            for (std::size_t i = 0; i < net.inputs; ++i) {
                const auto pre = latest_in_window(net.pre_spikes[i], t, lo, hi);
                if (!pre) continue;
                const double dw = dyn.table.delta_w(t - *pre);
                if (dw == 0.0) continue;
                double& w = net.weight(i, o);
                w = apply_weight_update(w, dw, dyn.stdp);
                ++ops;
            }
        }
    }

    if (!result.fired.empty() && !net.first_spiker) {
        const std::size_t winner = pick_winner(result.fired, drive);
        net.first_spiker = winner;
        if (dyn.lateral_inhibition && !net.inhibition_fired) {
            inhibit_others(net, winner);
            net.inhibition_fired = true;
        }
    }

    result.scenario = classify_scenario(!in.empty(), !result.fired.empty());
    result.cycles = dyn.cost.scenario_cycles(result.scenario, mode);
    result.synaptic_ops = ops;
    return result;
}

PresentationResult run_presentation(Network& net, const EncodedStimulus& stimulus, Mode mode,
                                    const Dynamics& dyn) {
    check_shape(net, stimulus);
    net.reset(dyn.neuron, stimulus.threshold);
    PresentationResult r = start_result(net);
    const auto timeline = stimulus.by_time();
    for (TimeUnit t = 1; t <= stimulus.presentation_T; ++t) {
        const TimeUnitResult tu = run_time_unit(net, timeline[static_cast<std::size_t>(t - 1)], mode, dyn, t);
        for (std::uint32_t o : tu.fired) {
            ++r.spike_counts[o];
            r.spike_trains[o].push_back(static_cast<std::int32_t>(t));
        }
        r.stats.record_time_unit(tu.cycles, tu.scenario);
        r.stats.synaptic_ops += tu.synaptic_ops;
    }
    finish_result(r, net);
    return r;
}

PresentationResult dense_oracle(Network& net, const EncodedStimulus& stimulus, Mode mode, const Dynamics& dyn) {
    check_shape(net, stimulus);
    net.reset(dyn.neuron, stimulus.threshold);
    PresentationResult r = start_result(net);

    const std::size_t I = net.inputs;
    const std::size_t O = net.outputs;
    const auto T = static_cast<std::size_t>(stimulus.presentation_T);
    std::vector<std::uint8_t> raster(T * I, 0);
    for (std::size_t i = 0; i < I; ++i)
        for (std::int32_t t : stimulus.schedule[i]) raster[static_cast<std::size_t>(t - 1) * I + i] = 1;

    std::vector<std::uint8_t> out_raster(T * O, 0);
    const std::int32_t lo = dyn.stdp.window_lo;
    const std::int32_t hi = dyn.stdp.window_hi;

    // Scans a raster column backwards for the latest spike in [t - hi, t - lo].
    auto latest = [](const std::vector<std::uint8_t>& r, std::size_t stride, std::size_t col, std::size_t step,
                     std::int32_t lo, std::int32_t hi) -> std::optional<TimeUnit> {
        for (std::int64_t back = lo; back <= hi; ++back) {
            const auto s = static_cast<std::int64_t>(step) - back;
            if (s < 0) break;
            if (r[static_cast<std::size_t>(s) * stride + col] != 0) return s + 1;
        }
        return std::nullopt;
    };

    std::vector<std::uint8_t> fired(O);
    std::vector<double> drive(O);
    for (std::size_t step = 0; step < T; ++step) {
        const auto t = static_cast<TimeUnit>(step + 1);
        const std::uint8_t* spiking = &raster[step * I];
        bool any_input = false;

        for (std::size_t i = 0; i < I; ++i) {
            any_input = any_input || spiking[i] != 0;
            for (std::size_t o = 0; o < O; ++o) {
                if (mode != Mode::train || spiking[i] == 0) continue;
                const auto post = latest(out_raster, O, o, step, lo, hi);
                if (!post) continue;
                const double dw = dyn.table.delta_w(*post - t);
                if (dw != 0.0) net.weight(i, o) = apply_weight_update(net.weight(i, o), dw, dyn.stdp);
            }
        }

        bool any_output = false;
        for (std::size_t o = 0; o < O; ++o) {
            double sum = 0.0;
            for (std::size_t i = 0; i < I; ++i) sum += spiking[i] != 0 ? net.weight(i, o) : 0.0;
            const StepResult s = step_potential(net.out_states[o], sum, net.threshold, dyn.neuron, t);
            net.out_states[o] = s.state;
            drive[o] = s.drive;
            fired[o] = s.fired ? 1 : 0;
            out_raster[step * O + o] = fired[o];
            any_output = any_output || s.fired;
        }
        r.stats.synaptic_ops += I * O * 2;

        for (std::size_t o = 0; o < O; ++o) {
            for (std::size_t i = 0; i < I; ++i) {
                if (mode != Mode::train || fired[o] == 0) continue;
                const auto pre = latest(raster, I, i, step, lo, hi);
                if (!pre) continue;
                const double dw = dyn.table.delta_w(t - *pre);
                if (dw != 0.0) net.weight(i, o) = apply_weight_update(net.weight(i, o), dw, dyn.stdp);
            }
        }

        if (any_output && !net.first_spiker) {
            std::size_t winner = O;
            for (std::size_t o = 0; o < O; ++o)
                if (fired[o] != 0 && (winner == O || drive[o] > drive[winner])) winner = o;
            net.first_spiker = winner;
            if (dyn.lateral_inhibition && !net.inhibition_fired) {
                for (std::size_t o = 0; o < O; ++o)
                    if (o != winner && net.out_states[o].refract_remaining == 0)
                        net.out_states[o].potential -= net.threshold / 2.0;
                net.inhibition_fired = true;
            }
        }

        for (std::size_t o = 0; o < O; ++o) {
            if (fired[o] == 0) continue;
            ++r.spike_counts[o];
            r.spike_trains[o].push_back(static_cast<std::int32_t>(t));
        }
        r.stats.record_time_unit(dyn.cost.dense_cycles(), classify_scenario(any_input, any_output));
    }
    finish_result(r, net);
    return r;
}

}  // namespace ssnn
