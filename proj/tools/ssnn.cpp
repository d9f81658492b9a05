// Command-line front end: train, classify, bench, inspect.

#include <iostream>

#include "CLI11.hpp"
#include "ssnn/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Event-driven simplified spiking neural network simulator"};
    app.require_subcommand(1);

    ssnn::CliOptions options;
    std::string config, snapshot, out = options.out_dir.string();
    std::size_t limit = 0;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config, "Config file (falls back to $SSNN_CONFIG, then built-in defaults)");
        cmd->add_option("--out", out, "Output directory")->capture_default_str();
        cmd->add_option("--seed", seed, "Override pipeline.seed");
    };

    auto* train = app.add_subcommand("train", "Unsupervised STDP training, then neuron labeling");
    add_common(train);
    train->add_option("--snapshot", snapshot, "Where to write the model (default OUT/snapshot.ssnn)");
    train->add_option("--limit", limit, "Number of training images");

    auto* classify = app.add_subcommand("classify", "Classify test images with a trained snapshot");
    add_common(classify);
    classify->add_option("--snapshot", snapshot, "Model to load (default OUT/snapshot.ssnn)");
    classify->add_option("--limit", limit, "Number of test images");

    auto* bench = app.add_subcommand("bench", "Sparsity sweep: event-driven vs dense cycle counts");
    add_common(bench);

    auto* inspect = app.add_subcommand("inspect", "Dump learned weight maps as CSV and PGM");
    inspect->add_option("--snapshot", snapshot, "Model to load (default OUT/snapshot.ssnn)");
    inspect->add_option("--out", out, "Output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    options.config_path = config;
    options.snapshot_path = snapshot;
    options.out_dir = out;
    for (auto* cmd : {train, classify}) {
        if (cmd->parsed() && cmd->count("--limit") > 0) options.limit = limit;
    }
    for (auto* cmd : {train, classify, bench}) {
        if (cmd->parsed() && cmd->count("--seed") > 0) options.seed = seed;
    }

    if (train->parsed()) return ssnn::cmd_train(options, std::cout, std::cerr);
    if (classify->parsed()) return ssnn::cmd_classify(options, std::cout, std::cerr);
    if (bench->parsed()) return ssnn::cmd_bench(options, std::cout, std::cerr);
    return ssnn::cmd_inspect(options, std::cout, std::cerr);
}
