#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "duonet/network.hpp"

namespace duonet {

/// Binary checkpoint layout, all integers and floats little-endian:
///
///   "DUONET"              6-byte magic
///   u32 version           currently 1
///   u64 n, n bytes        config echo (UTF-8 text of the run configuration)
///   u64 seed
///   u32 block count
///   per block:
///     u32 s_in, s_out, d_in, d_out
///     u8 transform kind, u8 activation, u8 time_enabled, u8 transform_enabled
///     per enabled parameter group (w_l, b_l, w_t, b_t in that order):
///       u64 count, count f64   complex groups as interleaved (re, im)
inline constexpr std::string_view kCheckpointMagic = "DUONET";
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    Network network;
    std::string config_echo;
    std::uint64_t seed = 0;
};

std::string serialize_checkpoint(const Checkpoint& ckpt);
/// Throws VersionError for a bad magic or version, TruncatedError for short input and
/// ShapeError for parameter arrays that do not fit the declared block shapes.
Checkpoint deserialize_checkpoint(std::string_view bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace duonet
