#include "ssnn/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "ssnn/errors.hpp"
#include "text.hpp"

namespace ssnn {

namespace {

struct Field {
    const char* key;
    std::function<void(Config&, std::string_view)> set;
    std::function<std::string(const Config&)> get;
};

double as_double(std::string_view key, std::string_view v) {
    auto d = text::parse_double(v);
    if (!d) throw ConfigError(std::string(key), "expected a number, got '" + std::string(v) + "'");
    return *d;
}

template <typename Int>
Int as_int(std::string_view key, std::string_view v) {
    auto n = text::parse_int<Int>(v);
    if (!n) throw ConfigError(std::string(key), "expected an integer, got '" + std::string(v) + "'");
    return *n;
}

bool as_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(std::string(key), "expected true or false, got '" + std::string(v) + "'");
}

std::vector<double> as_list(std::string_view key, std::string_view v) {
    std::vector<double> out;
    while (!v.empty()) {
        const auto comma = v.find(',');
        out.push_back(as_double(key, text::trim(v.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

std::string list_text(const std::vector<double>& values) {
    std::string s;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k) s += ", ";
        s += text::format_double(values[k]);
    }
    return s;
}

Kernel as_kernel(std::string_view key, std::string_view v) {
    auto coeffs = as_list(key, v);
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(coeffs.size()))));
    if (side * side != coeffs.size() || side % 2 == 0)
        throw ConfigError(std::string(key), "expected an odd square number of coefficients");
    return Kernel{side, std::move(coeffs)};
}

#define SSNN_DOUBLE(KEY, MEMBER)                                                         \
    Field {                                                                              \
        KEY, [](Config& c, std::string_view v) { c.MEMBER = as_double(KEY, v); },        \
            [](const Config& c) { return text::format_double(c.MEMBER); }                \
    }
#define SSNN_INT(KEY, MEMBER)                                                                         \
    Field {                                                                                           \
        KEY, [](Config& c, std::string_view v) { c.MEMBER = as_int<decltype(c.MEMBER)>(KEY, v); },    \
            [](const Config& c) { return std::to_string(c.MEMBER); }                                  \
    }
#define SSNN_PATH(KEY, MEMBER)                                                       \
    Field {                                                                          \
        KEY, [](Config& c, std::string_view v) { c.MEMBER = std::string(v); },       \
            [](const Config& c) { return c.MEMBER.generic_string(); }                \
    }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        SSNN_DOUBLE("neuron.decay_D", neuron.decay_D),
        SSNN_DOUBLE("neuron.p_min", neuron.p_min),
        SSNN_DOUBLE("neuron.resting_R_p", neuron.resting_R_p),
        SSNN_DOUBLE("neuron.p_refract", neuron.p_refract),
        SSNN_INT("neuron.t_refract", neuron.t_refract),
        SSNN_DOUBLE("stdp.a_plus", stdp.a_plus),
        SSNN_DOUBLE("stdp.a_minus", stdp.a_minus),
        SSNN_DOUBLE("stdp.tau_plus", stdp.tau_plus),
        SSNN_DOUBLE("stdp.tau_minus", stdp.tau_minus),
        SSNN_DOUBLE("stdp.sigma", stdp.sigma),
        SSNN_DOUBLE("stdp.w_min", stdp.w_min),
        SSNN_DOUBLE("stdp.w_max", stdp.w_max),
        SSNN_INT("stdp.window_lo", stdp.window_lo),
        SSNN_INT("stdp.window_hi", stdp.window_hi),
        Field{"encoder.kernel", [](Config& c, std::string_view v) { c.encoder.kernel = as_kernel("encoder.kernel", v); },
              [](const Config& c) { return list_text(c.encoder.kernel.coeffs); }},
        SSNN_INT("encoder.rp_min", encoder.rp_min),
        SSNN_DOUBLE("encoder.r_max", encoder.r_max),
        SSNN_INT("encoder.presentation_T", encoder.presentation_T),
        SSNN_DOUBLE("encoder.threshold_fraction", encoder.threshold_fraction),
        SSNN_DOUBLE("encoder.min_threshold", encoder.min_threshold),
        Field{"encoder.threshold_basis",
              [](Config& c, std::string_view v) {
                  if (v == "max") c.encoder.threshold_basis = ThresholdBasis::max;
                  else if (v == "sum") c.encoder.threshold_basis = ThresholdBasis::sum;
                  else throw ConfigError("encoder.threshold_basis", "expected max or sum, got '" + std::string(v) + "'");
              },
              [](const Config& c) {
                  return std::string(c.encoder.threshold_basis == ThresholdBasis::max ? "max" : "sum");
              }},
        SSNN_INT("cost.tsc", cost.tsc),
        SSNN_INT("cost.tpa", cost.tpa),
        SSNN_INT("cost.tpd", cost.tpd),
        SSNN_INT("cost.twc", cost.twc),
        SSNN_INT("network.outputs", network.outputs),
        SSNN_DOUBLE("network.init_lo", network.init_lo),
        SSNN_DOUBLE("network.init_hi", network.init_hi),
        Field{"network.lateral_inhibition",
              [](Config& c, std::string_view v) { c.network.lateral_inhibition = as_bool("network.lateral_inhibition", v); },
              [](const Config& c) { return std::string(c.network.lateral_inhibition ? "true" : "false"); }},
        SSNN_INT("pipeline.seed", pipeline.seed),
        SSNN_INT("pipeline.train_limit", pipeline.train_limit),
        SSNN_INT("pipeline.label_limit", pipeline.label_limit),
        SSNN_INT("pipeline.classify_limit", pipeline.classify_limit),
        SSNN_INT("pipeline.threads", pipeline.threads),
        SSNN_PATH("data.train_images", data.train_images),
        SSNN_PATH("data.train_labels", data.train_labels),
        SSNN_PATH("data.test_images", data.test_images),
        SSNN_PATH("data.test_labels", data.test_labels),
        Field{"bench.active_fractions",
              [](Config& c, std::string_view v) { c.bench.active_fractions = as_list("bench.active_fractions", v); },
              [](const Config& c) { return list_text(c.bench.active_fractions); }},
        SSNN_INT("bench.inputs", bench.inputs),
        SSNN_INT("bench.presentations", bench.presentations),
    };
    return table;
}

#undef SSNN_DOUBLE
#undef SSNN_INT
#undef SSNN_PATH

}  // namespace

void Config::validate() const {
    neuron.validate();
    stdp.validate();
    encoder.validate();
    cost.validate();
    if (!(encoder.min_threshold > neuron.resting_R_p))
        throw ConfigError("encoder.min_threshold", "must exceed neuron.resting_R_p");
    if (network.outputs == 0) throw ConfigError("network.outputs", "must be >= 1");
    if (!(network.init_lo >= 0.0 && network.init_lo <= 1.0)) throw ConfigError("network.init_lo", "must lie in [0, 1]");
    if (!(network.init_hi >= network.init_lo && network.init_hi <= 1.0))
        throw ConfigError("network.init_hi", "must lie in [network.init_lo, 1]");
    if (pipeline.threads == 0) throw ConfigError("pipeline.threads", "must be >= 1");
    for (double f : bench.active_fractions)
        if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("bench.active_fractions", "entries must lie in [0, 1]");
    if (bench.inputs == 0) throw ConfigError("bench.inputs", "must be >= 1");
}

Dynamics Config::dynamics() const { return Dynamics(neuron, stdp, cost, network.lateral_inhibition); }

Config parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    Config config;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = text::trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        const auto key = text::trim(line.substr(0, eq));
        const auto value = text::trim(line.substr(eq + 1));

        const Field* field = nullptr;
        for (const auto& f : fields())
            if (key == f.key) field = &f;
        if (!field) throw ConfigError(std::string(key), "unknown key");
        if (!seen.emplace(key).second) throw ConfigError(std::string(key), "duplicate key");
        field->set(config, value);
    }

    if (!base_dir.empty()) {
        for (auto* p : {&config.data.train_images, &config.data.train_labels, &config.data.test_images,
                        &config.data.test_labels})
            if (!p->empty() && p->is_relative()) *p = (base_dir / *p).lexically_normal();
    }
    config.validate();
    return config;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

std::string format_config(const Config& config) {
    std::string out;
    for (const auto& f : fields()) {
        out += f.key;
        out += " = ";
        out += f.get(config);
        out += '\n';
    }
    return out;
}

}  // namespace ssnn
