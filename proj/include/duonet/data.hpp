#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "duonet/matrix.hpp"

namespace duonet {

/// Aligned input/output measurements, one row per sample.
struct SignalRecord {
    RealMatrix u;  // [L x D_in]
    RealMatrix y;  // [L x D_out]
    double sample_period = 1.0;

    std::size_t length() const noexcept { return u.rows(); }
};

/// Throws ShapeError unless u and y have the same number of rows.
void validate(const SignalRecord& rec);

/// Rows [begin, end) of both signals.
SignalRecord slice(const SignalRecord& rec, std::size_t begin, std::size_t end);

/// One training pair: m input rows and the n output rows ending at the same index.
struct Window {
    RealMatrix input;   // [m x D_in]
    RealMatrix target;  // [n x D_out]
    std::size_t end = 0;  // exclusive end index s in the source record
};

struct WindowedDataset {
    std::vector<Window> windows;
    std::size_t m = 1;
    std::size_t n = 1;
    std::size_t stride = 1;

    std::size_t size() const noexcept { return windows.size(); }
};

/// Window end indices s = max(m, n), max(m, n) + stride, ... <= L.
std::vector<std::size_t> window_ends(std::size_t length, std::size_t m, std::size_t n, std::size_t stride);

/// Pairs (U[s-m, s), Y[s-n, s)) for every s from window_ends. Windows may overlap.
/// Throws InsufficientDataError when L < max(m, n), ConfigError for zero m, n or stride.
WindowedDataset build_windows(const SignalRecord& rec, std::size_t m, std::size_t n, std::size_t stride);

struct StaticSystemParams {
    std::array<double, 5> alpha{};  // excitation frequencies, rad/s
    double beta1 = 0.0;
    double beta2 = 0.0;
};

struct StaticSystem {
    SignalRecord record;
    StaticSystemParams params;
};

/// u(t) = sum_i sin(alpha_i t), y(t) = beta1 u(t) + pi beta2 at t = k dt, with all
/// seven parameters drawn from Uniform(-5, 5).
StaticSystem generate_static_system(std::uint64_t seed, std::size_t num_samples, double dt = 0.1);

/// Contiguous train / validation / test segments of the raw record.
struct SplitRecords {
    SignalRecord train;
    SignalRecord validation;
    SignalRecord test;
};

/// Cuts at floor(L * train) and floor(L * (train + validation)).
SplitRecords split_record(const SignalRecord& rec, double train_fraction, double validation_fraction);

/// Header u0..u{D_in-1},y0..y{D_out-1}; values printed in shortest round-trip form.
void save_csv(const SignalRecord& rec, const std::filesystem::path& path);
SignalRecord load_csv(const std::filesystem::path& path, double sample_period = 1.0);

std::string format_double(double v);

}  // namespace duonet
