#include "ssnn/pipeline.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <thread>

namespace ssnn {

namespace {

// Uniform in [0, 1) from the top 53 bits; identical on every standard library.
double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::size_t argmax_lowest(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k)
        if (values[k] > values[best]) best = k;
    return best;
}

void require_images(const Dataset& data, std::size_t inputs) {
    for (const auto& img : data.images)
        if (img.pixels.size() != inputs)
            throw InputError("image has " + std::to_string(img.pixels.size()) + " pixels, network has " +
                             std::to_string(inputs) + " inputs");
}

ImageRecord make_record(std::size_t index, int label, const PresentationResult& r) {
    ImageRecord rec;
    rec.image_index = index;
    rec.label = label;
    rec.first_spiker = r.first_spiker;
    for (auto c : r.spike_counts) rec.output_spikes += c;
    rec.tu_count = r.stats.time_units_total;
    rec.cycles = r.stats.cycles_total;
    return rec;
}

}  // namespace

Grid Image::to_grid() const {
    Grid g(rows, cols);
    for (std::size_t k = 0; k < pixels.size(); ++k) g.values[k] = pixels[k];
    return g;
}

ModelSnapshot initial_snapshot(const Config& config, std::size_t inputs) {
    config.validate();
    ModelSnapshot s;
    s.neuron = config.neuron;
    s.stdp = config.stdp;
    s.encoder = config.encoder;
    s.cost = config.cost;
    s.lateral_inhibition = config.network.lateral_inhibition;
    s.inputs = inputs;
    s.outputs = config.network.outputs;

    std::mt19937_64 gen(config.pipeline.seed);
    const double span = config.stdp.w_max - config.stdp.w_min;
    const double lo = config.network.init_lo;
    const double hi = config.network.init_hi;
    s.weights.resize(inputs * s.outputs);
    for (double& w : s.weights) w = config.stdp.w_min + (lo + (hi - lo) * unit_uniform(gen)) * span;
    return s;
}

std::size_t predicting_neuron(const PresentationResult& result) {
    if (result.first_spiker) return *result.first_spiker;
    return argmax_lowest(result.final_potentials);
}

TrainResult train(const Dataset& train_set, const Dataset& label_set, const Config& config, std::size_t limit) {
    if (train_set.size() == 0) throw InputError("train: empty dataset");
    if (limit > train_set.size())
        throw InputError("train: limit " + std::to_string(limit) + " exceeds dataset size " +
                         std::to_string(train_set.size()));
    const std::size_t inputs = train_set.rows * train_set.cols;
    require_images(train_set, inputs);

    TrainResult out{initial_snapshot(config, inputs), {}, {}};
    const Dynamics dyn = out.snapshot.dynamics();
    Network net = out.snapshot.network();
    out.records.reserve(limit);
    for (std::size_t n = 0; n < limit; ++n) {
        const auto stim = encode(train_set.images[n].to_grid(), config.encoder, config.stdp.w_max);
        const auto r = run_presentation(net, stim, Mode::train, dyn);
        out.stats.merge(r.stats);
        out.records.push_back(make_record(n, train_set.labels[n], r));
    }
    out.snapshot.weights = net.weights;
    out.snapshot.labeling =
        label_neurons(out.snapshot, label_set, std::min(config.pipeline.label_limit, label_set.size()));
    return out;
}

NeuronLabeling label_neurons(const ModelSnapshot& snapshot, const Dataset& labeled, std::size_t limit) {
    limit = std::min(limit, labeled.size());
    require_images(labeled, snapshot.inputs);
    const std::size_t O = snapshot.outputs;
    const Dynamics dyn = snapshot.dynamics();
    Network net = snapshot.network();

    std::vector<std::array<double, kClassCount>> spikes(O, std::array<double, kClassCount>{});
    std::array<double, kClassCount> per_class{};
    for (std::size_t n = 0; n < limit; ++n) {
        const std::size_t label = labeled.labels[n];
        const auto stim = encode(labeled.images[n].to_grid(), snapshot.encoder, snapshot.stdp.w_max);
        const auto r = run_presentation(net, stim, Mode::classify, dyn);
        per_class[label] += 1.0;
        for (std::size_t o = 0; o < O; ++o) spikes[o][label] += r.spike_counts[o];
    }

    std::array<double, kClassCount> overall{};
    for (const auto& row : spikes)
        for (std::size_t c = 0; c < kClassCount; ++c) overall[c] += row[c];
    const auto fallback = static_cast<std::uint8_t>(argmax_lowest(overall));

    NeuronLabeling labeling;
    labeling.classes.resize(O);
    labeling.scores.resize(O);
    for (std::size_t o = 0; o < O; ++o) {
        std::array<double, kClassCount> mean{};
        for (std::size_t c = 0; c < kClassCount; ++c)
            mean[c] = per_class[c] > 0.0 ? spikes[o][c] / per_class[c] : 0.0;
        const std::size_t best = argmax_lowest(mean);
        if (mean[best] > 0.0) {
            labeling.classes[o] = static_cast<std::uint8_t>(best);
            labeling.scores[o] = mean[best];
        } else {
            labeling.classes[o] = fallback;
            labeling.scores[o] = 0.0;
        }
    }
    return labeling;
}

ClassifyResult classify(const ModelSnapshot& snapshot, const Dataset& data, std::size_t limit, std::size_t threads) {
    limit = std::min(limit, data.size());
    require_images(data, snapshot.inputs);
    if (snapshot.labeling.classes.size() != snapshot.outputs)
        throw InputError("classify: snapshot has no neuron labeling");
    const Dynamics dyn = snapshot.dynamics();

    ClassifyResult out;
    out.records.resize(limit);
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(limit, 1));
    std::vector<RunStats> partial(threads);

    auto work = [&](std::size_t worker) {
        Network net = snapshot.network();
        const std::size_t begin = limit * worker / threads;
        const std::size_t end = limit * (worker + 1) / threads;
        for (std::size_t n = begin; n < end; ++n) {
            const auto stim = encode(data.images[n].to_grid(), snapshot.encoder, snapshot.stdp.w_max);
            const auto r = run_presentation(net, stim, Mode::classify, dyn);
            partial[worker].merge(r.stats);
            ImageRecord rec = make_record(n, data.labels[n], r);
            rec.prediction = snapshot.labeling.classes[predicting_neuron(r)];
            out.records[n] = rec;
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
    }

    std::size_t correct = 0;
    for (const auto& rec : out.records) {
        ++out.confusion[static_cast<std::size_t>(rec.label)][static_cast<std::size_t>(rec.prediction)];
        if (rec.label == rec.prediction) ++correct;
    }
    for (const auto& s : partial) out.stats.merge(s);
    out.accuracy = limit == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(limit);
    return out;
}

void write_records_csv(std::ostream& out, std::span<const ImageRecord> records) {
    out << "image_index,label,prediction,first_spiker,tu_count,cycles\n";
    for (const auto& r : records) {
        out << r.image_index << ',' << r.label << ',' << r.prediction << ',';
        if (r.first_spiker) out << *r.first_spiker;
        else out << -1;
        out << ',' << r.tu_count << ',' << r.cycles << '\n';
    }
}

void write_confusion_csv(std::ostream& out, const ClassifyResult& result) {
    out << "label";
    for (std::size_t c = 0; c < kClassCount; ++c) out << ",pred_" << c;
    out << '\n';
    for (std::size_t l = 0; l < kClassCount; ++l) {
        out << l;
        for (std::size_t c = 0; c < kClassCount; ++c) out << ',' << result.confusion[l][c];
        out << '\n';
    }
}

}  // namespace ssnn
