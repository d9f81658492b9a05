#include "ssnn/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssnn/errors.hpp"

namespace ssnn {

namespace {

// k / rate lands a hair above an integer for rates like 1/3; snap those back.
std::int64_t ceil_snapped(double x) {
    const double nearest = std::nearbyint(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace

Grid::Grid(std::size_t r, std::size_t c, std::vector<double> v) : rows(r), cols(c), values(std::move(v)) {
    if (values.size() != rows * cols) throw InputError("Grid: value count does not match shape");
}

Kernel Kernel::box(std::size_t side) {
    return Kernel{side, std::vector<double>(side * side, 1.0 / static_cast<double>(side * side))};
}

Kernel Kernel::identity(std::size_t side) {
    Kernel k{side, std::vector<double>(side * side, 0.0)};
    k.coeffs[(side / 2) * side + side / 2] = 1.0;
    return k;
}

void EncoderParams::validate() const {
    if (kernel.side == 0 || kernel.side % 2 == 0) throw ConfigError("encoder.kernel", "side length must be odd");
    if (kernel.coeffs.size() != kernel.side * kernel.side)
        throw ConfigError("encoder.kernel", "coefficient count must be side * side");
    for (double c : kernel.coeffs)
        if (!std::isfinite(c)) throw ConfigError("encoder.kernel", "coefficients must be finite");
    if (rp_min < 1) throw ConfigError("encoder.rp_min", "must be >= 1");
    if (!(r_max > 0.0) || !std::isfinite(r_max)) throw ConfigError("encoder.r_max", "must be > 0");
    if (presentation_T < 1) throw ConfigError("encoder.presentation_T", "must be >= 1");
    if (!(threshold_fraction > 0.0 && threshold_fraction <= 1.0))
        throw ConfigError("encoder.threshold_fraction", "must lie in (0, 1]");
    if (!(min_threshold > 0.0) || !std::isfinite(min_threshold))
        throw ConfigError("encoder.min_threshold", "must be > 0");
}

std::vector<std::vector<std::uint32_t>> EncodedStimulus::by_time() const {
    std::vector<std::vector<std::uint32_t>> out(static_cast<std::size_t>(std::max(presentation_T, 0)));
    for (std::size_t i = 0; i < schedule.size(); ++i)
        for (std::int32_t t : schedule[i]) out[static_cast<std::size_t>(t - 1)].push_back(static_cast<std::uint32_t>(i));
    return out;
}

Grid receptive_field(const Grid& image, const Kernel& kernel) {
    if (image.rows == 0 || image.cols == 0) throw InputError("receptive_field: empty image");
    if (image.values.size() != image.rows * image.cols) throw InputError("receptive_field: ragged image");
    if (kernel.side % 2 == 0 || kernel.coeffs.size() != kernel.side * kernel.side)
        throw InputError("receptive_field: kernel must be square with odd side");

    const auto half = static_cast<std::ptrdiff_t>(kernel.side / 2);
    const auto rows = static_cast<std::ptrdiff_t>(image.rows);
    const auto cols = static_cast<std::ptrdiff_t>(image.cols);
    Grid out(image.rows, image.cols);
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        for (std::ptrdiff_t c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (std::ptrdiff_t kr = -half; kr <= half; ++kr) {
                const std::ptrdiff_t sr = r + kr;
                if (sr < 0 || sr >= rows) continue;
                for (std::ptrdiff_t kc = -half; kc <= half; ++kc) {
                    const std::ptrdiff_t sc = c + kc;
                    if (sc < 0 || sc >= cols) continue;
                    const auto k = static_cast<std::size_t>((kr + half) * static_cast<std::ptrdiff_t>(kernel.side) + kc + half);
                    acc += kernel.coeffs[k] * image.values[static_cast<std::size_t>(sr * cols + sc)];
                }
            }
            out.values[static_cast<std::size_t>(r * cols + c)] = acc;
        }
    }
    return out;
}

double firing_rate(double rf, const EncoderParams& params) {
    if (!(rf > 0.0)) return 0.0;
    const double relative = std::min(rf / params.r_max, 1.0);
    return relative / static_cast<double>(params.rp_min);
}

std::vector<SpikeTimes> make_schedule(std::span<const double> rates, std::int32_t presentation_T) {
    std::vector<SpikeTimes> schedule(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const double rate = rates[i];
        if (!(rate > 0.0)) continue;
        for (std::int64_t k = 1;; ++k) {
            const std::int64_t t = ceil_snapped(static_cast<double>(k) / rate);
            if (t > presentation_T) break;
            if (!schedule[i].empty() && schedule[i].back() == t) continue;
            schedule[i].push_back(static_cast<std::int32_t>(t));
        }
    }
    return schedule;
}

double variable_threshold(std::span<const double> rates, const EncoderParams& params, double w_max) {
    double level = 0.0;
    for (double r : rates) level = params.threshold_basis == ThresholdBasis::sum ? level + r : std::max(level, r);
    if (!(level > 0.0)) return params.min_threshold;
    return params.threshold_fraction * level * static_cast<double>(params.presentation_T) * w_max;
}

EncodedStimulus encode(const Grid& image, const EncoderParams& params, double w_max) {
    const Grid rf = receptive_field(image, params.kernel);
    EncodedStimulus s;
    s.presentation_T = params.presentation_T;
    s.rates.reserve(rf.values.size());
    for (double v : rf.values) s.rates.push_back(firing_rate(v, params));
    s.schedule = make_schedule(s.rates, params.presentation_T);
    s.threshold = variable_threshold(s.rates, params, w_max);
    return s;
}

}  // namespace ssnn
