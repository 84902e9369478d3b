#include "duonet/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "duonet/data.hpp"

namespace duonet {

namespace pt = boost::property_tree;

namespace {

template <typename T>
T parse_number(const std::string& section, const std::string& key, const std::string& text) {
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw FormatError("config [" + section + "] " + key + ": cannot parse '" + text + "'");
    }
    return value;
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& text) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw FormatError("config [" + section + "] " + key + ": expected true or false, got '" + text + "'");
}

// Walks the keys of one section, dispatching to a handler and rejecting unknown keys.
template <typename Handler>
void read_section(const std::string& name, const pt::ptree& section, Handler&& handle) {
    for (const auto& [key, node] : section) {
        if (!node.empty()) throw FormatError("config [" + name + "] " + key + ": nested sections are not supported");
        if (!handle(key, node.data())) throw FormatError("config [" + name + "]: unknown key '" + key + "'");
    }
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

void TrainConfig::validate() const {
    if (model.empty()) throw ConfigError("config defines no [block0] section");
    for (std::size_t i = 0; i < model.size(); ++i) {
        const BlockShape& s = model[i].shape;
        if (s.s_in == 0 || s.s_out == 0 || s.d_in == 0 || s.d_out == 0) {
            throw ConfigError("block" + std::to_string(i) + ": sizes must be >= 1");
        }
        if (!model[i].time_enabled && !model[i].transform_enabled) {
            throw ConfigError("block" + std::to_string(i) + ": both branches disabled");
        }
        if (model[i].transform_enabled && model[i].transform == TransformKind::hadamard) {
            if (!is_power_of_two(s.input_size()) || !is_power_of_two(s.output_size())) {
                throw ConfigError("block" + std::to_string(i) + ": hadamard transform needs power-of-two sizes");
            }
        }
        if (i > 0) {
            const BlockShape& prev = model[i - 1].shape;
            if (prev.s_out != s.s_in || prev.d_out != s.d_in) {
                throw ConfigError("block" + std::to_string(i) + " input does not match block" + std::to_string(i - 1) +
                                  " output");
            }
        }
    }
    if (window.m != model.front().shape.s_in) throw ConfigError("window m must equal block0 s_in");
    if (window.n != model.back().shape.s_out) throw ConfigError("window n must equal the last block's s_out");
    if (window.stride == 0) throw ConfigError("window stride must be >= 1");
    optimizer.validate();
    if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
    if (data.source != "synthetic" && data.source != "csv") {
        throw ConfigError("data source must be 'synthetic' or 'csv', got '" + data.source + "'");
    }
    if (data.source == "synthetic" && (model.front().shape.d_in != 1 || model.back().shape.d_out != 1)) {
        throw ConfigError("synthetic static system is single-input single-output");
    }
    if (data.source == "synthetic" && data.num_samples == 0) throw ConfigError("num_samples must be >= 1");
    if (!(data.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(data.train_fraction > 0.0) || !(data.validation_fraction > 0.0) || !(data.test_fraction > 0.0) ||
        std::abs(data.train_fraction + data.validation_fraction + data.test_fraction - 1.0) > 1e-9) {
        throw ConfigError("split fractions must be positive and sum to 1");
    }
}

TrainOptions TrainConfig::train_options() const {
    TrainOptions o;
    o.optimizer = optimizer;
    o.batch_size = batch_size;
    o.epochs = epochs;
    o.seed = seed;
    return o;
}

TrainConfig parse_config(std::string_view text) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw FormatError("config: " + e.message(), e.line());
    }

    TrainConfig cfg;
    std::map<std::size_t, BlockSpec> blocks;
    const auto is_section = [](const std::string& name) {
        return name == "data" || name == "window" || name == "optim" || name.starts_with("block");
    };
    for (const auto& [name, node] : tree) {
        if (node.empty() && !(node.data().empty() && is_section(name))) {
            if (name == "seed") {
                cfg.seed = parse_number<std::uint64_t>("", name, node.data());
                continue;
            }
            throw FormatError("config: unknown top-level key '" + name + "'");
        }
        if (name == "data") {
            read_section(name, node, [&](const std::string& k, const std::string& v) {
                if (k == "source") cfg.data.source = v;
                else if (k == "path") cfg.data.path = v;
                else if (k == "seed") cfg.data.seed = parse_number<std::uint64_t>(name, k, v);
                else if (k == "num_samples") cfg.data.num_samples = parse_number<std::size_t>(name, k, v);
                else if (k == "dt") cfg.data.dt = parse_number<double>(name, k, v);
                else if (k == "train_fraction") cfg.data.train_fraction = parse_number<double>(name, k, v);
                else if (k == "validation_fraction") cfg.data.validation_fraction = parse_number<double>(name, k, v);
                else if (k == "test_fraction") cfg.data.test_fraction = parse_number<double>(name, k, v);
                else return false;
                return true;
            });
        } else if (name == "window") {
            read_section(name, node, [&](const std::string& k, const std::string& v) {
                if (k == "m") cfg.window.m = parse_number<std::size_t>(name, k, v);
                else if (k == "n") cfg.window.n = parse_number<std::size_t>(name, k, v);
                else if (k == "stride") cfg.window.stride = parse_number<std::size_t>(name, k, v);
                else return false;
                return true;
            });
        } else if (name == "optim") {
            read_section(name, node, [&](const std::string& k, const std::string& v) {
                if (k == "kind") cfg.optimizer.kind = parse_optimizer_kind(v);
                else if (k == "alpha") cfg.optimizer.alpha = parse_number<double>(name, k, v);
                else if (k == "beta1") cfg.optimizer.beta1 = parse_number<double>(name, k, v);
                else if (k == "beta2") cfg.optimizer.beta2 = parse_number<double>(name, k, v);
                else if (k == "eps") cfg.optimizer.eps = parse_number<double>(name, k, v);
                else if (k == "batch_size") cfg.batch_size = parse_number<std::size_t>(name, k, v);
                else if (k == "epochs") cfg.epochs = parse_number<std::size_t>(name, k, v);
                else return false;
                return true;
            });
        } else if (name.starts_with("block")) {
            const auto index = parse_number<std::size_t>(name, "section index", name.substr(5));
            BlockSpec spec;
            read_section(name, node, [&](const std::string& k, const std::string& v) {
                if (k == "s_in") spec.shape.s_in = parse_number<std::size_t>(name, k, v);
                else if (k == "s_out") spec.shape.s_out = parse_number<std::size_t>(name, k, v);
                else if (k == "d_in") spec.shape.d_in = parse_number<std::size_t>(name, k, v);
                else if (k == "d_out") spec.shape.d_out = parse_number<std::size_t>(name, k, v);
                else if (k == "transform") spec.transform = parse_transform_kind(v);
                else if (k == "time_branch") spec.time_enabled = parse_bool(name, k, v);
                else if (k == "transform_branch") spec.transform_enabled = parse_bool(name, k, v);
                else if (k == "activation") spec.activation = parse_activation(v);
                else return false;
                return true;
            });
            blocks[index] = spec;
        } else {
            throw FormatError("config: unknown section [" + name + "]");
        }
    }
    std::size_t expected = 0;
    for (const auto& [index, spec] : blocks) {
        if (index != expected++) throw FormatError("config: block sections must be numbered block0, block1, ...");
        cfg.model.push_back(spec);
    }
    return cfg;
}

TrainConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string print_config(const TrainConfig& cfg) {
    std::ostringstream out;
    out << "seed = " << cfg.seed << "\n\n";
    out << "[data]\n"
        << "source = " << cfg.data.source << '\n'
        << "path = " << cfg.data.path << '\n'
        << "seed = " << cfg.data.seed << '\n'
        << "num_samples = " << cfg.data.num_samples << '\n'
        << "dt = " << format_double(cfg.data.dt) << '\n'
        << "train_fraction = " << format_double(cfg.data.train_fraction) << '\n'
        << "validation_fraction = " << format_double(cfg.data.validation_fraction) << '\n'
        << "test_fraction = " << format_double(cfg.data.test_fraction) << "\n\n";
    out << "[window]\n"
        << "m = " << cfg.window.m << '\n'
        << "n = " << cfg.window.n << '\n'
        << "stride = " << cfg.window.stride << "\n\n";
    out << "[optim]\n"
        << "kind = " << to_string(cfg.optimizer.kind) << '\n'
        << "alpha = " << format_double(cfg.optimizer.alpha) << '\n'
        << "beta1 = " << format_double(cfg.optimizer.beta1) << '\n'
        << "beta2 = " << format_double(cfg.optimizer.beta2) << '\n'
        << "eps = " << format_double(cfg.optimizer.eps) << '\n'
        << "batch_size = " << cfg.batch_size << '\n'
        << "epochs = " << cfg.epochs << '\n';
    for (std::size_t i = 0; i < cfg.model.size(); ++i) {
        const BlockSpec& b = cfg.model[i];
        out << "\n[block" << i << "]\n"
            << "s_in = " << b.shape.s_in << '\n'
            << "s_out = " << b.shape.s_out << '\n'
            << "d_in = " << b.shape.d_in << '\n'
            << "d_out = " << b.shape.d_out << '\n'
            << "transform = " << to_string(b.transform) << '\n'
            << "time_branch = " << bool_text(b.time_enabled) << '\n'
            << "transform_branch = " << bool_text(b.transform_enabled) << '\n'
            << "activation = " << to_string(b.activation) << '\n';
    }
    return out.str();
}

}  // namespace duonet
