#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ssnn/config.hpp"

namespace ssnn {

struct CliOptions {
    std::filesystem::path config_path;  // empty: built-in defaults
    std::filesystem::path snapshot_path;
    std::filesystem::path out_dir = "out";
    std::optional<std::size_t> limit;
    std::optional<std::uint64_t> seed;
};

/// Environment variable consulted when --config is absent.
inline constexpr const char* kConfigEnvVar = "SSNN_CONFIG";

/// Loads the config named by the options (or the environment) and applies
/// the --seed override.
Config resolve_config(const CliOptions& options);

struct BenchRow {
    double active_fraction = 0.0;
    std::uint64_t time_units = 0;
    std::uint64_t event_cycles = 0;
    std::uint64_t dense_cycles = 0;
    std::uint64_t busy_time_units = 0;  // time units with both input and output spikes
    bool spikes_match = true;  // event-driven and dense runs agreed

    double ratio() const noexcept;
};

/// Sparsity sweep on synthetic stimuli: for each fraction of active inputs,
/// trains a copy of one seeded network with both simulators.
std::vector<BenchRow> run_bench(const Config& config);
void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);

/// Subcommands. Each returns a process exit status and reports errors on `err`.
int cmd_train(const CliOptions& options, std::ostream& out, std::ostream& err);
int cmd_classify(const CliOptions& options, std::ostream& out, std::ostream& err);
int cmd_bench(const CliOptions& options, std::ostream& out, std::ostream& err);
int cmd_inspect(const CliOptions& options, std::ostream& out, std::ostream& err);

}  // namespace ssnn
