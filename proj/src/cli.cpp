#include "ssnn/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

#include "ssnn/errors.hpp"
#include "ssnn/pipeline.hpp"

namespace ssnn {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
}

void print_stats(std::ostream& out, const RunStats& s) {
    out << "  time units      " << s.time_units_total << '\n'
        << "  cycles total    " << s.cycles_total << '\n'
        << "  cycles/TU avg   " << std::fixed << std::setprecision(3) << s.cycles_avg_tu() << '\n'
        << "  cycles/TU max   " << s.cycles_max_tu << '\n'
        << "  synaptic ops    " << s.synaptic_ops << '\n'
        << "  scenarios      ";
    for (std::size_t k = 0; k < kScenarioCount; ++k)
        out << ' ' << scenario_name(static_cast<Scenario>(k)) << '=' << s.tu_histogram[k];
    out << '\n';
    out.unsetf(std::ios::floatfield);
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        fn();
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return 1;
}

std::filesystem::path snapshot_path(const CliOptions& options) {
    return options.snapshot_path.empty() ? options.out_dir / "snapshot.ssnn" : options.snapshot_path;
}

// Rates for one synthetic presentation: every input active, uniform in (0, 1/rp_min].
std::vector<double> random_rates(std::mt19937_64& gen, std::size_t inputs, const EncoderParams& enc) {
    std::vector<double> rates(inputs);
    const double top = 1.0 / static_cast<double>(enc.rp_min);
    for (double& r : rates) r = top * (1.0 - static_cast<double>(gen() >> 11) * 0x1.0p-53);
    return rates;
}

}  // namespace

Config resolve_config(const CliOptions& options) {
    std::filesystem::path path = options.config_path;
    if (path.empty())
        if (const char* env = std::getenv(kConfigEnvVar); env && *env) path = env;
    Config config = path.empty() ? Config{} : load_config(path);
    if (options.seed) config.pipeline.seed = *options.seed;
    config.validate();
    return config;
}

double BenchRow::ratio() const noexcept {
    return dense_cycles == 0 ? 0.0 : static_cast<double>(event_cycles) / static_cast<double>(dense_cycles);
}

std::vector<BenchRow> run_bench(const Config& config) {
    config.validate();
    const std::size_t inputs = config.bench.inputs;
    const ModelSnapshot initial = initial_snapshot(config, inputs);
    const Dynamics dyn = initial.dynamics();

    // Active inputs at a given fraction are a prefix of one fixed permutation,
    // so denser levels contain every spike of sparser ones.
    std::mt19937_64 gen(config.pipeline.seed);
    std::vector<std::size_t> order(inputs);
    for (std::size_t i = 0; i < inputs; ++i) order[i] = i;
    for (std::size_t i = inputs; i > 1; --i) std::swap(order[i - 1], order[gen() % i]);
    std::vector<std::vector<double>> full_rates;
    for (std::size_t p = 0; p < config.bench.presentations; ++p)
        full_rates.push_back(random_rates(gen, inputs, config.encoder));

    std::vector<BenchRow> rows;
    for (double fraction : config.bench.active_fractions) {
        BenchRow row;
        row.active_fraction = fraction;
        const auto active = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(inputs)));
        Network event_net = initial.network();
        Network dense_net = initial.network();
        for (const auto& rates_all : full_rates) {
            std::vector<double> rates(inputs, 0.0);
            for (std::size_t k = 0; k < active; ++k) rates[order[k]] = rates_all[order[k]];
            EncodedStimulus stim;
            stim.presentation_T = config.encoder.presentation_T;
            stim.rates = rates;
            stim.schedule = make_schedule(rates, stim.presentation_T);
            stim.threshold = variable_threshold(rates, config.encoder, config.stdp.w_max);

            const auto fast = run_presentation(event_net, stim, Mode::train, dyn);
            const auto slow = dense_oracle(dense_net, stim, Mode::train, dyn);
            row.time_units += fast.stats.time_units_total;
            row.event_cycles += fast.stats.cycles_total;
            row.dense_cycles += slow.stats.cycles_total;
            row.busy_time_units += fast.stats.tu_histogram[static_cast<std::size_t>(Scenario::both)];
            row.spikes_match = row.spikes_match && fast.spike_trains == slow.spike_trains;
        }
        row.spikes_match = row.spikes_match && event_net.weights == dense_net.weights;
        rows.push_back(row);
    }
    return rows;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
    out << "active_fraction,time_units,busy_time_units,event_cycles,dense_cycles,ratio,spikes_match\n";
    out << std::setprecision(6);
    for (const auto& r : rows)
        out << r.active_fraction << ',' << r.time_units << ',' << r.busy_time_units << ',' << r.event_cycles << ','
            << r.dense_cycles << ',' << r.ratio() << ',' << (r.spikes_match ? 1 : 0) << '\n';
}

int cmd_train(const CliOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Config config = resolve_config(options);
        const Dataset data = load_idx(config.data.train_images, config.data.train_labels);
        const std::size_t limit = std::min(options.limit.value_or(config.pipeline.train_limit), data.size());
        const TrainResult result = train(data, data, config, limit);

        const auto snap_path = snapshot_path(options);
        if (snap_path.has_parent_path()) std::filesystem::create_directories(snap_path.parent_path());
        save_snapshot(result.snapshot, snap_path);
        auto csv = open_output(options.out_dir / "train_records.csv");
        write_records_csv(csv, result.records);

        out << "trained on " << limit << " images (" << result.snapshot.inputs << " inputs, "
            << result.snapshot.outputs << " outputs)\n";
        print_stats(out, result.stats);
        out << "  neuron classes ";
        for (auto c : result.snapshot.labeling.classes) out << ' ' << static_cast<int>(c);
        out << "\nsnapshot written to " << snap_path.string() << '\n';
    });
}

int cmd_classify(const CliOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Config config = resolve_config(options);
        const ModelSnapshot snapshot = load_snapshot(snapshot_path(options));
        const Dataset data = load_idx(config.data.test_images, config.data.test_labels);
        const std::size_t limit = std::min(options.limit.value_or(config.pipeline.classify_limit), data.size());
        const ClassifyResult result = classify(snapshot, data, limit, config.pipeline.threads);

        auto predictions = open_output(options.out_dir / "predictions.csv");
        write_records_csv(predictions, result.records);
        auto confusion = open_output(options.out_dir / "confusion.csv");
        write_confusion_csv(confusion, result);

        out << "classified " << limit << " images\n"
            << "  accuracy        " << std::fixed << std::setprecision(4) << result.accuracy << '\n';
        out.unsetf(std::ios::floatfield);
        print_stats(out, result.stats);
    });
}

int cmd_bench(const CliOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Config config = resolve_config(options);
        const auto rows = run_bench(config);
        auto csv = open_output(options.out_dir / "bench.csv");
        write_bench_csv(csv, rows);

        out << "active   time_units   event_cycles   dense_cycles   ratio\n";
        for (const auto& r : rows) {
            out << std::fixed << std::setprecision(3) << std::setw(6) << r.active_fraction << std::setw(13)
                << r.time_units << std::setw(15) << r.event_cycles << std::setw(15) << r.dense_cycles
                << std::setw(8) << r.ratio() << (r.spikes_match ? "" : "   MISMATCH") << '\n';
        }
        out.unsetf(std::ios::floatfield);
        for (const auto& r : rows)
            if (!r.spikes_match) throw InvariantError("event-driven and dense simulators disagree");
    });
}

int cmd_inspect(const CliOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ModelSnapshot snap = load_snapshot(snapshot_path(options));
        const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(snap.inputs))));
        const std::size_t rows = side * side == snap.inputs ? side : 1;
        const std::size_t cols = snap.inputs / rows;
        const double span = snap.stdp.w_max - snap.stdp.w_min;

        auto csv = open_output(options.out_dir / "weights.csv");
        csv << "neuron,input,row,col,weight\n";
        out << "neuron  class  score     mean_w\n";
        for (std::size_t o = 0; o < snap.outputs; ++o) {
            char name[32];
            std::snprintf(name, sizeof name, "neuron_%02zu.pgm", o);
            auto pgm = open_output(options.out_dir / name);
            pgm << "P5\n" << cols << ' ' << rows << "\n255\n";
            double sum = 0.0;
            for (std::size_t i = 0; i < snap.inputs; ++i) {
                const double w = snap.weights[i * snap.outputs + o];
                sum += w;
                csv << o << ',' << i << ',' << i / cols << ',' << i % cols << ',' << w << '\n';
                const auto level = static_cast<long>(std::lround(255.0 * (w - snap.stdp.w_min) / span));
                pgm.put(static_cast<char>(std::clamp(level, 0L, 255L)));
            }
            const bool labeled = o < snap.labeling.classes.size();
            out << std::setw(6) << o << std::setw(7) << (labeled ? static_cast<int>(snap.labeling.classes[o]) : -1)
                << std::setw(7) << std::fixed << std::setprecision(3) << (labeled ? snap.labeling.scores[o] : 0.0)
                << std::setw(11) << sum / static_cast<double>(snap.inputs) << '\n';
        }
        out.unsetf(std::ios::floatfield);
        out << "weight maps written to " << options.out_dir.string() << '\n';
    });
}

}  // namespace ssnn
