#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "duonet/network.hpp"
#include "duonet/optim.hpp"

namespace duonet {

/// Where training data comes from.
struct DataSpec {
    std::string source = "synthetic";  // "synthetic" or "csv"
    std::string path;                  // csv only
    std::uint64_t seed = 1;            // synthetic only
    std::size_t num_samples = 10000;   // synthetic only
    double dt = 0.1;
    double train_fraction = 0.7;
    double validation_fraction = 0.15;
    double test_fraction = 0.15;

    friend bool operator==(const DataSpec&, const DataSpec&) = default;
};

struct WindowSpec {
    std::size_t m = 32;
    std::size_t n = 1;
    std::size_t stride = 1;

    friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

/// Complete description of one run. Stored as INI text:
///
///   seed = <u64>                      model initialization and shuffling
///   [data]   source, path, seed, num_samples, dt,
///            train_fraction, validation_fraction, test_fraction
///   [window] m, n, stride
///   [optim]  kind, alpha, beta1, beta2, eps, batch_size, epochs
///   [block0], [block1], ...  s_in, s_out, d_in, d_out, transform,
///            time_branch, transform_branch, activation
///
/// Every key is optional and falls back to the defaults above; unknown keys and
/// sections are rejected.
struct TrainConfig {
    std::uint64_t seed = 0;
    DataSpec data;
    WindowSpec window;
    OptimizerSettings optimizer;
    std::size_t batch_size = 32;
    std::size_t epochs = 100;
    std::vector<BlockSpec> model;

    /// Throws ConfigError if the block chain is broken, the window does not match the
    /// model ends, or a numeric field is out of range.
    void validate() const;

    TrainOptions train_options() const;

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Throws FormatError for malformed text and ConfigError for invalid values.
TrainConfig parse_config(std::string_view text);
TrainConfig load_config(const std::filesystem::path& path);
std::string print_config(const TrainConfig& cfg);

}  // namespace duonet
