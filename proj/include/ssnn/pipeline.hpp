#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssnn/config.hpp"
#include "ssnn/encoder.hpp"
#include "ssnn/engine.hpp"
#include "ssnn/errors.hpp"

namespace ssnn {

inline constexpr std::size_t kClassCount = 10;

struct Image {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> pixels;

    Grid to_grid() const;
};

struct Dataset {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Image> images;
    std::vector<std::uint8_t> labels;

    std::size_t size() const noexcept { return images.size(); }
};

class LoadError : public Error {
  public:
    enum class Kind { io, bad_magic, truncated, count_mismatch, malformed };

    LoadError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

  private:
    Kind kind_;
};

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

std::vector<Image> parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize_idx_images(const Dataset& data);
std::vector<std::uint8_t> serialize_idx_labels(const Dataset& data);

/// Reads an MNIST image/label file pair. Throws LoadError.
Dataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path);
void write_idx(const Dataset& data, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path);

struct NeuronLabeling {
    std::vector<std::uint8_t> classes;  // per output neuron
    std::vector<double> scores;         // mean spikes per image of the assigned class

    bool operator==(const NeuronLabeling&) const = default;
};

struct ModelSnapshot {
    static constexpr int kFormatVersion = 1;

    NeuronParams neuron;
    StdpParams stdp;
    EncoderParams encoder;
    TimeUnitCost cost;
    bool lateral_inhibition = true;
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<double> weights;  // row-major inputs x outputs
    NeuronLabeling labeling;

    Dynamics dynamics() const;
    Network network() const;
};

/// Text container, one `key value` per line then the weight rows.
/// Doubles are written in shortest round-trip form so save/load/save is
/// byte-identical.
std::string serialize_snapshot(const ModelSnapshot& snapshot);
ModelSnapshot parse_snapshot(std::string_view text);
void save_snapshot(const ModelSnapshot& snapshot, const std::filesystem::path& path);
ModelSnapshot load_snapshot(const std::filesystem::path& path);

/// Untrained model with seeded uniform weights and an empty labeling.
ModelSnapshot initial_snapshot(const Config& config, std::size_t inputs);

/// Per-image outcome, one CSV row.
struct ImageRecord {
    std::size_t image_index = 0;
    int label = 0;
    int prediction = -1;  // -1 while training
    std::optional<std::size_t> first_spiker;
    std::uint32_t output_spikes = 0;
    std::uint64_t tu_count = 0;
    std::uint64_t cycles = 0;
};

struct TrainResult {
    ModelSnapshot snapshot;
    RunStats stats;
    std::vector<ImageRecord> records;
};

/// Unsupervised STDP over the first `limit` training images in order,
/// followed by labeling on the first label_limit images of `label_set`.
/// Throws InputError on an empty dataset or limit beyond its size.
TrainResult train(const Dataset& train_set, const Dataset& label_set, const Config& config,
                  std::size_t limit);

/// Presents each image in classify mode and gives every output neuron the
/// class with the highest mean spike count. Silent neurons get the class
/// that drew the most spikes overall, with score 0.
NeuronLabeling label_neurons(const ModelSnapshot& snapshot, const Dataset& labeled, std::size_t limit);

struct ClassifyResult {
    std::vector<ImageRecord> records;
    double accuracy = 0.0;
    std::array<std::array<std::uint64_t, kClassCount>, kClassCount> confusion{};  // [label][prediction]
    RunStats stats;
};

/// Winner-take-all readout: the first output neuron to fire names the
/// class; a silent presentation falls back to the highest final potential.
/// `threads` > 1 splits the images across clones of the frozen network.
ClassifyResult classify(const ModelSnapshot& snapshot, const Dataset& data, std::size_t limit,
                        std::size_t threads = 1);

/// Index of the neuron holding the prediction for one presentation.
std::size_t predicting_neuron(const PresentationResult& result);

void write_records_csv(std::ostream& out, std::span<const ImageRecord> records);
void write_confusion_csv(std::ostream& out, const ClassifyResult& result);

}  // namespace ssnn
