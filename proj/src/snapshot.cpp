#include <fstream>
#include <sstream>
#include <type_traits>

#include "ssnn/pipeline.hpp"
#include "text.hpp"

namespace ssnn {

namespace {

constexpr std::string_view kHeader = "ssnn-snapshot";

bool is_parameter_key(std::string_view line) {
    for (std::string_view prefix : {"neuron.", "stdp.", "encoder.", "cost.", "network.lateral_inhibition"})
        if (line.starts_with(prefix)) return true;
    return false;
}

Config as_config(const ModelSnapshot& s) {
    Config c;
    c.neuron = s.neuron;
    c.stdp = s.stdp;
    c.encoder = s.encoder;
    c.cost = s.cost;
    c.network.lateral_inhibition = s.lateral_inhibition;
    return c;
}

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
    throw LoadError(LoadError::Kind::malformed, "snapshot line " + std::to_string(line) + ": " + what);
}

class LineReader {
  public:
    explicit LineReader(std::string_view text) : rest_(text) {}

    std::string_view next() {
        if (rest_.empty())
            throw LoadError(LoadError::Kind::truncated,
                            "snapshot: unexpected end of file after line " + std::to_string(line_));
        const auto nl = rest_.find('\n');
        std::string_view line = rest_.substr(0, nl);
        rest_.remove_prefix(nl == std::string_view::npos ? rest_.size() : nl + 1);
        ++line_;
        return line;
    }

    bool done() const { return rest_.empty(); }
    std::size_t line() const { return line_; }

  private:
    std::string_view rest_;
    std::size_t line_ = 0;
};

std::string_view expect_key(LineReader& in, std::string_view key) {
    const std::string_view line = in.next();
    if (!line.starts_with(key) || line.size() <= key.size() || line[key.size()] != ' ')
        malformed(in.line(), "expected '" + std::string(key) + "'");
    return line.substr(key.size() + 1);
}

template <typename Parse>
auto split_values(std::string_view values, std::size_t expected, Parse parse, std::size_t line) {
    std::vector<std::remove_cvref_t<decltype(*parse(std::string_view{}))>> out;
    while (!values.empty()) {
        const auto sp = values.find(' ');
        const auto v = parse(values.substr(0, sp));
        if (!v) malformed(line, "malformed number");
        out.push_back(*v);
        values.remove_prefix(sp == std::string_view::npos ? values.size() : sp + 1);
    }
    if (out.size() != expected)
        malformed(line, "expected " + std::to_string(expected) + " values");
    return out;
}

std::size_t as_count(std::string_view v, std::size_t line) {
    auto n = text::parse_int<std::size_t>(v);
    if (!n) malformed(line, "malformed count");
    return *n;
}

}  // namespace

Dynamics ModelSnapshot::dynamics() const { return Dynamics(neuron, stdp, cost, lateral_inhibition); }

Network ModelSnapshot::network() const {
    Network net(inputs, outputs);
    net.weights = weights;
    return net;
}

std::string serialize_snapshot(const ModelSnapshot& s) {
    if (s.weights.size() != s.inputs * s.outputs) throw InvariantError("snapshot: weight count does not match shape");
    std::string out;
    out += kHeader;
    out += ' ';
    out += std::to_string(ModelSnapshot::kFormatVersion);
    out += '\n';

    const std::string params = format_config(as_config(s));
    std::string_view rest = params;
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        const auto line = rest.substr(0, nl + 1);
        if (is_parameter_key(line)) out += line;
        rest.remove_prefix(line.size());
    }

    out += "network.inputs " + std::to_string(s.inputs) + '\n';
    out += "network.outputs " + std::to_string(s.outputs) + '\n';
    out += "labeling.classes";
    for (auto c : s.labeling.classes) out += ' ' + std::to_string(c);
    out += "\nlabeling.scores";
    for (double v : s.labeling.scores) out += ' ' + text::format_double(v);
    out += "\nweights\n";
    for (std::size_t i = 0; i < s.inputs; ++i) {
        for (std::size_t o = 0; o < s.outputs; ++o) {
            if (o) out += ' ';
            out += text::format_double(s.weights[i * s.outputs + o]);
        }
        out += '\n';
    }
    out += "end\n";
    return out;
}

ModelSnapshot parse_snapshot(std::string_view text) {
    LineReader in(text);
    const std::string expected_header = std::string(kHeader) + ' ' + std::to_string(ModelSnapshot::kFormatVersion);
    if (in.next() != expected_header)
        throw LoadError(LoadError::Kind::bad_magic, "snapshot: expected header '" + expected_header + "'");

    std::string params;
    std::string_view line = in.next();
    while (is_parameter_key(line)) {
        params += line;
        params += '\n';
        line = in.next();
    }
    const Config c = parse_config(params);

    ModelSnapshot s;
    s.neuron = c.neuron;
    s.stdp = c.stdp;
    s.encoder = c.encoder;
    s.cost = c.cost;
    s.lateral_inhibition = c.network.lateral_inhibition;

    if (!line.starts_with("network.inputs "))
        malformed(in.line(), "expected 'network.inputs'");
    s.inputs = as_count(line.substr(15), in.line());
    s.outputs = as_count(expect_key(in, "network.outputs"), in.line());

    auto classes_text = in.next();
    if (!classes_text.starts_with("labeling.classes"))
        malformed(in.line(), "expected 'labeling.classes'");
    classes_text.remove_prefix(std::min<std::size_t>(classes_text.size(), 17));
    const auto classes = split_values(classes_text, classes_text.empty() ? 0 : s.outputs,
                                      text::parse_int<std::uint8_t>, in.line());
    s.labeling.classes.assign(classes.begin(), classes.end());

    auto scores_text = in.next();
    if (!scores_text.starts_with("labeling.scores"))
        malformed(in.line(), "expected 'labeling.scores'");
    scores_text.remove_prefix(std::min<std::size_t>(scores_text.size(), 16));
    s.labeling.scores = split_values(scores_text, scores_text.empty() ? 0 : s.outputs, text::parse_double, in.line());
    if (s.labeling.classes.size() != s.labeling.scores.size())
        throw LoadError(LoadError::Kind::malformed, "snapshot: labeling classes and scores differ in length");

    if (in.next() != "weights")
        malformed(in.line(), "expected 'weights'");
    s.weights.reserve(s.inputs * s.outputs);
    for (std::size_t i = 0; i < s.inputs; ++i) {
        const auto row = split_values(in.next(), s.outputs, text::parse_double, in.line());
        for (double w : row) {
            if (!(w >= s.stdp.w_min && w <= s.stdp.w_max))
                malformed(in.line(), "weight outside [w_min, w_max]");
            s.weights.push_back(w);
        }
    }
    if (in.next() != "end")
        malformed(in.line(), "expected 'end'");
    if (!in.done()) throw LoadError(LoadError::Kind::malformed, "snapshot: trailing content after 'end'");
    return s;
}

void save_snapshot(const ModelSnapshot& snapshot, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadError(LoadError::Kind::io, "cannot write snapshot " + path.string());
    out << serialize_snapshot(snapshot);
    if (!out) throw LoadError(LoadError::Kind::io, "write failed for snapshot " + path.string());
}

ModelSnapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError(LoadError::Kind::io, "cannot open snapshot " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_snapshot(buf.str());
}

}  // namespace ssnn
