// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "ssnn/cli.hpp"
#include "ssnn/config.hpp"
#include "ssnn/engine.hpp"
#include "ssnn/neuron.hpp"
#include "ssnn/pipeline.hpp"
#include "ssnn/stdp.hpp"

using namespace ssnn;
namespace fs = std::filesystem;

namespace {

const fs::path kSourceDir = SSNN_SOURCE_DIR;
const fs::path kConfig = kSourceDir / "configs" / "default.conf";

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "ssnn_acceptance" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Outcome stdp_table_fidelity() {
    Outcome o;
    const StdpParams p;
    const StdpTable table = build_table(p);
    o.require(table.pot().size() == 19 && table.dep().size() == 19, "table does not hold 19 entries per side");
    int exact = 0;
    for (int dt = 2; dt <= 20; ++dt) {
        exact += table.delta_w(dt) == p.a_plus * std::exp(-dt / p.tau_plus);
        exact += table.delta_w(-dt) == p.a_minus * std::exp(-dt / p.tau_minus);
    }
    o.require(exact == 38, fmt("%d of 38 offsets match the closed form", exact));
    for (int dt : {-1, 0, 1})
        o.require(table.delta_w(dt) == 0.0, fmt("dead-zone offset %d is non-zero", dt));
    for (int dt = 21; dt <= 200; ++dt)
        o.require(table.delta_w(dt) == 0.0 && table.delta_w(-dt) == 0.0, fmt("offset %d outside window is non-zero", dt));
    if (o.pass) o.detail = "19+19 entries, 38/38 exact, dead zone and outside window zero";
    return o;
}

Outcome soft_bound_closure() {
    Outcome o;
    const StdpParams p;
    const StdpTable table(p);
    const double lo = table.dep().front();
    const double hi = table.pot().front();
    std::mt19937_64 gen(20190601);
    std::uniform_real_distribution<double> start(p.w_min, p.w_max);
    std::uniform_real_distribution<double> step(lo, hi);
    std::size_t updates = 0;
    for (int seq = 0; seq < 1000; ++seq) {
        double w = start(gen);
        for (int k = 0; k < 500; ++k, ++updates) {
            w = apply_weight_update(w, step(gen), p);
            if (!(w >= p.w_min && w <= p.w_max)) {
                o.require(false, fmt("sequence %d left the bounds at step %d (w = %g)", seq, k, w));
                return o;
            }
        }
    }
    o.detail = fmt("1000 sequences, %zu updates, dw in [%.4f, %.4f], all in bounds", updates, lo, hi);
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    std::mt19937_64 gen(7);
    int runs[2] = {0, 0};
    int fired = 0;
    for (int k = 0; k < 400; ++k) {
        auto in = test::random_instance(gen);
        const Dynamics dyn(in.neuron, in.stdp, TimeUnitCost{}, in.inhibition);
        Network dense = in.net;
        const auto e = run_presentation(in.net, in.stimulus, in.mode, dyn);
        const auto d = dense_oracle(dense, in.stimulus, in.mode, dyn);
        o.require(e.spike_trains == d.spike_trains, fmt("instance %d: spike trains differ", k));
        o.require(in.net.weights == dense.weights, fmt("instance %d: final weights differ", k));
        ++runs[in.mode == Mode::train ? 0 : 1];
        fired += e.first_spiker.has_value();
    }
    o.require(runs[0] >= 100 && runs[1] >= 100, "fewer than 100 instances in a mode");
    if (o.pass) o.detail = fmt("%d train + %d classify instances identical (%d with output spikes)", runs[0], runs[1], fired);
    return o;
}

Outcome neuron_trajectories() {
    Outcome o;
    NeuronParams p;
    const double threshold = 10.0;

    NeuronState s{3.0, 0, std::nullopt};
    int t = 0;
    while (s.potential > p.resting_R_p) {
        const double before = s.potential;
        s = step_potential(s, 0.0, threshold, p, ++t).state;
        o.require(s.potential == before - p.decay_D, fmt("decay step %d did not drop by exactly D", t));
    }
    o.require(t == 12 && s.potential == p.resting_R_p, "pure decay did not reach rest in 12 steps");

    const auto floor = step_potential(NeuronState{-0.5, 0, std::nullopt}, -0.6, threshold, p, 1);
    o.require(!floor.fired && floor.state.potential == p.resting_R_p, "floor crossing did not reset to R_p");

    auto r = step_potential(resting_state(p), threshold, threshold, p, 1);
    o.require(r.fired && r.state.potential == p.p_refract && r.state.refract_remaining == p.t_refract,
              "firing did not enter refractory at p_refract");
    s = r.state;
    int blocked = 0;
    while (true) {
        r = step_potential(s, 100.0, threshold, p, 2 + blocked);
        if (r.fired) break;
        o.require(r.state.potential == p.p_refract, "input leaked through refractory");
        s = r.state;
        if (++blocked > 100) break;
    }
    o.require(blocked == p.t_refract, fmt("refractory blocked %d steps, expected %d", blocked, p.t_refract));
    if (o.pass) o.detail = fmt("decay 3.0 -> 0 in 12 exact steps, floor reset, refractory %d TUs", blocked);
    return o;
}

Outcome cost_structure() {
    Outcome o;
    const TimeUnitCost c;
    const auto idle = c.scenario_cycles(Scenario::idle, Mode::train);
    const auto in = c.scenario_cycles(Scenario::input_only, Mode::train);
    const auto out = c.scenario_cycles(Scenario::output_only, Mode::train);
    const auto both = c.scenario_cycles(Scenario::both, Mode::train);
    o.require(idle < in && in <= out && out < both, "scenario ordering violated");

    const Config config = load_config(kConfig);
    const Dataset train_set = load_idx(config.data.train_images, config.data.train_labels);
    const Dataset test_set = load_idx(config.data.test_images, config.data.test_labels);
    const std::size_t n = 250;
    Config small = config;
    small.pipeline.label_limit = n;
    const auto trained = train(train_set, train_set, small, n);
    const auto classified = classify(trained.snapshot, test_set, n);
    const RunStats& tr = trained.stats;
    const RunStats& cl = classified.stats;
    o.require(trained.snapshot.inputs == 784 && trained.snapshot.outputs == 16, "network is not 784x16");
    o.require(tr.cycles_avg_tu() > cl.cycles_avg_tu(), "average training TU cost does not exceed classification");
    o.require(static_cast<double>(tr.cycles_max_tu) > tr.cycles_avg_tu(), "training max TU cost not above average");
    o.require(static_cast<double>(cl.cycles_max_tu) > cl.cycles_avg_tu(), "classification max TU cost not above average");
    o.detail = fmt("scenarios %llu<%llu<=%llu<%llu; %zu images: train avg %.3f max %llu, classify avg %.3f max %llu",
                   (unsigned long long)idle, (unsigned long long)in, (unsigned long long)out,
                   (unsigned long long)both, n, tr.cycles_avg_tu(), (unsigned long long)tr.cycles_max_tu,
                   cl.cycles_avg_tu(), (unsigned long long)cl.cycles_max_tu) +
               (o.pass ? "" : "; " + o.detail);
    return o;
}

Outcome sparsity_benefit() {
    Outcome o;
    const Config config = load_config(kConfig);
    const auto rows = run_bench(config);
    int strict = 0;
    for (const auto& r : rows) {
        o.require(r.spikes_match, fmt("fraction %.2f: event-driven and dense results differ", r.active_fraction));
        o.require(r.event_cycles <= r.dense_cycles, fmt("fraction %.2f: event cycles exceed dense", r.active_fraction));
        if (r.busy_time_units < r.time_units) {
            o.require(r.event_cycles < r.dense_cycles,
                      fmt("fraction %.2f: idle time units but no saving", r.active_fraction));
            ++strict;
        }
    }
    std::string ratios;
    for (const auto& r : rows) ratios += fmt(" %.3f", r.ratio());
    o.detail = fmt("%zu levels, %d strictly cheaper; event/dense ratios:", rows.size(), strict) + ratios +
               (o.pass ? "" : "; " + o.detail);
    return o;
}

Outcome learning_signal() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const Config config = load_config(kConfig);
    const Dataset train_set = load_idx(config.data.train_images, config.data.train_labels);
    const Dataset test_set = load_idx(config.data.test_images, config.data.test_labels);
    const std::size_t n_train = 1000;
    const std::size_t n_test = 500;
    o.require(train_set.size() >= n_train && test_set.size() >= n_test, "not enough MNIST images on disk");
    if (!o.pass) return o;

    const auto trained = train(train_set, train_set, config, n_train);
    const auto result = classify(trained.snapshot, test_set, n_test, config.pipeline.threads);

    ModelSnapshot uniform = initial_snapshot(config, trained.snapshot.inputs);
    for (double& w : uniform.weights) w = 0.5 * (config.stdp.w_min + config.stdp.w_max);
    uniform.labeling = label_neurons(uniform, train_set, config.pipeline.label_limit);
    const auto baseline = classify(uniform, test_set, n_test);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    o.require(trained.snapshot.outputs == 16 && trained.snapshot.inputs * trained.snapshot.outputs == 12544,
              "network is not 784x16");
    o.require(result.accuracy >= 0.20, "trained accuracy below 20%");
    o.require(std::abs(baseline.accuracy - 0.10) <= 0.05, "uniform-weight baseline not within 10% +/- 5");
    o.require(seconds < 600.0, "runtime above 10 minutes");
    o.detail = fmt("trained %.1f%% on %zu held-out images (threshold 20%%), uniform baseline %.1f%%, %.1f s",
                   100.0 * result.accuracy, n_test, 100.0 * baseline.accuracy, seconds) +
               (o.pass ? "" : "; " + o.detail);
    return o;
}

Outcome idx_loader() {
    Outcome o;
    const auto dir = scratch("idx");
    const auto fixture = test::synthetic_dataset(64, 3, 28);
    write_idx(fixture, dir / "img", dir / "lbl");
    const auto loaded = load_idx(dir / "img", dir / "lbl");
    write_idx(loaded, dir / "img2", dir / "lbl2");
    o.require(slurp(dir / "img") == slurp(dir / "img2") && slurp(dir / "lbl") == slurp(dir / "lbl2"),
              "generated fixture did not round-trip byte for byte");

    const Config config = load_config(kConfig);
    const auto mnist = load_idx(config.data.test_images, config.data.test_labels);
    write_idx(mnist, dir / "mimg", dir / "mlbl");
    o.require(slurp(dir / "mimg") == slurp(config.data.test_images) &&
                  slurp(dir / "mlbl") == slurp(config.data.test_labels),
              "MNIST test files did not round-trip byte for byte");

    auto kind = [](const std::function<void()>& fn) {
        try {
            fn();
        } catch (const LoadError& e) {
            return static_cast<int>(e.kind());
        } catch (...) {
            return -2;
        }
        return -1;
    };
    const std::string labels = slurp(dir / "lbl");
    std::vector<std::uint8_t> wrong(labels.begin(), labels.end());
    wrong[3] = 0x03;
    o.require(kind([&] { parse_idx_labels(wrong); }) == static_cast<int>(LoadError::Kind::bad_magic),
              "label file with image magic not rejected as bad magic");
    const std::string images = slurp(dir / "img");
    std::vector<std::uint8_t> cut(images.begin(), images.end() - 100);
    o.require(kind([&] { parse_idx_images(cut); }) == static_cast<int>(LoadError::Kind::truncated),
              "truncated image file not rejected as truncated");
    std::vector<std::uint8_t> header_only(images.begin(), images.begin() + 6);
    o.require(kind([&] { parse_idx_images(header_only); }) == static_cast<int>(LoadError::Kind::truncated),
              "truncated header not rejected as truncated");
    if (o.pass) o.detail = "fixture and MNIST round-trip exact; bad magic and truncation raise their own errors";
    return o;
}

Outcome determinism() {
    Outcome o;
    std::vector<fs::path> dirs;
    for (const char* name : {"run_a", "run_b"}) {
        const auto dir = scratch(name);
        CliOptions opt;
        opt.config_path = kConfig;
        opt.out_dir = dir;
        std::ostringstream out;
        std::ostringstream err;
        o.require(cmd_train(opt, out, err) == 0, "train failed: " + err.str());
        o.require(cmd_classify(opt, out, err) == 0, "classify failed: " + err.str());
        o.require(cmd_bench(opt, out, err) == 0, "bench failed: " + err.str());
        dirs.push_back(dir);
    }
    const char* files[] = {"snapshot.ssnn", "train_records.csv", "predictions.csv", "confusion.csv", "bench.csv"};
    for (const char* f : files) {
        const std::string a = slurp(dirs[0] / f);
        o.require(!a.empty() && a == slurp(dirs[1] / f), std::string(f) + " differs between runs");
    }
    if (o.pass) o.detail = "snapshot, train/predict/confusion/bench CSVs byte-identical across two runs";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "STDP table fidelity", stdp_table_fidelity},
        {2, "soft-bound closure", soft_bound_closure},
        {3, "oracle equivalence", oracle_equivalence},
        {4, "neuron trajectories", neuron_trajectories},
        {5, "cost-model structure", cost_structure},
        {6, "sparsity benefit", sparsity_benefit},
        {7, "desk-scale learning signal", learning_signal},
        {8, "IDX loader", idx_loader},
        {9, "determinism", determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
