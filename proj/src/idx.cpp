#include <cstdio>
#include <fstream>
#include <iterator>

#include "ssnn/pipeline.hpp"

namespace ssnn {

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> b, std::size_t at) {
    return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) | (std::uint32_t{b[at + 2]} << 8) |
           std::uint32_t{b[at + 3]};
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void check_magic(std::span<const std::uint8_t> b, std::uint32_t expected, const char* what) {
    if (b.size() < 4) throw LoadError(LoadError::Kind::truncated, std::string(what) + ": file shorter than its magic");
    const std::uint32_t magic = read_be32(b, 0);
    if (magic != expected) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s: bad magic 0x%08x", what, magic);
        throw LoadError(LoadError::Kind::bad_magic, buf);
    }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError(LoadError::Kind::io, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadError(LoadError::Kind::io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw LoadError(LoadError::Kind::io, "write failed for " + path.string());
}

}  // namespace

std::vector<Image> parse_idx_images(std::span<const std::uint8_t> bytes) {
    check_magic(bytes, kIdxImageMagic, "idx images");
    if (bytes.size() < 16) throw LoadError(LoadError::Kind::truncated, "idx images: header truncated");
    const std::size_t count = read_be32(bytes, 4);
    const std::size_t rows = read_be32(bytes, 8);
    const std::size_t cols = read_be32(bytes, 12);
    if (rows == 0 || cols == 0) throw LoadError(LoadError::Kind::malformed, "idx images: zero image dimension");
    const std::size_t per = rows * cols;
    const std::size_t body = bytes.size() - 16;
    if (body < count * per) throw LoadError(LoadError::Kind::truncated, "idx images: pixel data truncated");
    if (body > count * per) throw LoadError(LoadError::Kind::malformed, "idx images: trailing bytes after pixel data");

    std::vector<Image> images(count);
    for (std::size_t n = 0; n < count; ++n) {
        const auto first = bytes.begin() + static_cast<std::ptrdiff_t>(16 + n * per);
        images[n] = Image{rows, cols, std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(per))};
    }
    return images;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
    check_magic(bytes, kIdxLabelMagic, "idx labels");
    if (bytes.size() < 8) throw LoadError(LoadError::Kind::truncated, "idx labels: header truncated");
    const std::size_t count = read_be32(bytes, 4);
    const std::size_t body = bytes.size() - 8;
    if (body < count) throw LoadError(LoadError::Kind::truncated, "idx labels: label data truncated");
    if (body > count) throw LoadError(LoadError::Kind::malformed, "idx labels: trailing bytes after label data");
    std::vector<std::uint8_t> labels(bytes.begin() + 8, bytes.end());
    for (std::uint8_t l : labels)
        if (l >= kClassCount) throw LoadError(LoadError::Kind::malformed, "idx labels: label " + std::to_string(l) + " > 9");
    return labels;
}

std::vector<std::uint8_t> serialize_idx_images(const Dataset& data) {
    std::vector<std::uint8_t> out;
    out.reserve(16 + data.size() * data.rows * data.cols);
    write_be32(out, kIdxImageMagic);
    write_be32(out, static_cast<std::uint32_t>(data.size()));
    write_be32(out, static_cast<std::uint32_t>(data.rows));
    write_be32(out, static_cast<std::uint32_t>(data.cols));
    for (const auto& img : data.images) out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

std::vector<std::uint8_t> serialize_idx_labels(const Dataset& data) {
    std::vector<std::uint8_t> out;
    out.reserve(8 + data.labels.size());
    write_be32(out, kIdxLabelMagic);
    write_be32(out, static_cast<std::uint32_t>(data.labels.size()));
    out.insert(out.end(), data.labels.begin(), data.labels.end());
    return out;
}

Dataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path) {
    Dataset d;
    d.images = parse_idx_images(read_file(images_path));
    d.labels = parse_idx_labels(read_file(labels_path));
    if (d.images.size() != d.labels.size())
        throw LoadError(LoadError::Kind::count_mismatch, "idx: " + std::to_string(d.images.size()) + " images but " +
                                                             std::to_string(d.labels.size()) + " labels");
    if (!d.images.empty()) {
        d.rows = d.images.front().rows;
        d.cols = d.images.front().cols;
    }
    return d;
}

void write_idx(const Dataset& data, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path) {
    write_file(images_path, serialize_idx_images(data));
    write_file(labels_path, serialize_idx_labels(data));
}

}  // namespace ssnn
