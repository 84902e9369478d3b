#include "duonet/checkpoint.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace duonet {

namespace {

template <typename T>
void put(std::string& out, T value) {
    auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.append(bytes.data(), bytes.size());
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    template <typename T>
    T get(const char* what) {
        std::array<char, sizeof(T)> raw;
        take(raw.data(), raw.size(), what);
        if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
        return std::bit_cast<T>(raw);
    }

    std::string_view take_view(std::size_t n, const char* what) {
        if (bytes_.size() - pos_ < n) throw TruncatedError(std::string("checkpoint truncated while reading ") + what);
        auto v = bytes_.substr(pos_, n);
        pos_ += n;
        return v;
    }

    bool at_end() const noexcept { return pos_ == bytes_.size(); }

private:
    void take(char* dst, std::size_t n, const char* what) {
        const auto v = take_view(n, what);
        std::memcpy(dst, v.data(), n);
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

template <typename E>
E enum_from_byte(std::uint8_t b, std::uint8_t limit, const char* what) {
    if (b > limit) throw VersionError(std::string("checkpoint has unknown ") + what + " code " + std::to_string(b));
    return static_cast<E>(b);
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ckpt) {
    std::string out(kCheckpointMagic);
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::uint64_t>(out, ckpt.config_echo.size());
    out += ckpt.config_echo;
    put<std::uint64_t>(out, ckpt.seed);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.network.size()));
    for (const DualBlock& b : ckpt.network.blocks()) {
        const BlockSpec& s = b.spec();
        put<std::uint32_t>(out, static_cast<std::uint32_t>(s.shape.s_in));
        put<std::uint32_t>(out, static_cast<std::uint32_t>(s.shape.s_out));
        put<std::uint32_t>(out, static_cast<std::uint32_t>(s.shape.d_in));
        put<std::uint32_t>(out, static_cast<std::uint32_t>(s.shape.d_out));
        put<std::uint8_t>(out, static_cast<std::uint8_t>(s.transform));
        put<std::uint8_t>(out, static_cast<std::uint8_t>(s.activation));
        put<std::uint8_t>(out, s.time_enabled ? 1 : 0);
        put<std::uint8_t>(out, s.transform_enabled ? 1 : 0);
        for (const auto& g : b.parameters()) {
            put<std::uint64_t>(out, g.values.size());
            for (double v : g.values) put<double>(out, v);
        }
    }
    return out;
}

Checkpoint deserialize_checkpoint(std::string_view bytes) {
    Reader r(bytes);
    if (bytes.size() < kCheckpointMagic.size() || bytes.substr(0, kCheckpointMagic.size()) != kCheckpointMagic) {
        throw VersionError("not a checkpoint: magic bytes do not match");
    }
    r.take_view(kCheckpointMagic.size(), "magic");
    const auto version = r.get<std::uint32_t>("version");
    if (version != kCheckpointVersion) {
        throw VersionError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                           std::to_string(kCheckpointVersion) + ")");
    }
    const auto echo_len = r.get<std::uint64_t>("config length");
    std::string echo(r.take_view(echo_len, "config echo"));
    const auto seed = r.get<std::uint64_t>("seed");
    const auto count = r.get<std::uint32_t>("block count");

    std::vector<DualBlock> blocks;
    for (std::uint32_t i = 0; i < count; ++i) {
        BlockSpec s;
        s.shape.s_in = r.get<std::uint32_t>("block shape");
        s.shape.s_out = r.get<std::uint32_t>("block shape");
        s.shape.d_in = r.get<std::uint32_t>("block shape");
        s.shape.d_out = r.get<std::uint32_t>("block shape");
        s.transform = enum_from_byte<TransformKind>(r.get<std::uint8_t>("transform"), 3, "transform");
        s.activation = enum_from_byte<Activation>(r.get<std::uint8_t>("activation"), 4, "activation");
        s.time_enabled = r.get<std::uint8_t>("flags") != 0;
        s.transform_enabled = r.get<std::uint8_t>("flags") != 0;
        DualBlock block(s);
        for (auto& g : block.parameters()) {
            const auto n = r.get<std::uint64_t>("parameter count");
            if (n != g.values.size()) {
                throw ShapeError("checkpoint block " + std::to_string(i) + " " + std::string(g.name) + " has " +
                                 std::to_string(n) + " values, shape requires " + std::to_string(g.values.size()));
            }
            for (double& v : g.values) v = r.get<double>("parameters");
        }
        blocks.push_back(std::move(block));
    }
    if (!r.at_end()) throw ShapeError("checkpoint has trailing bytes");
    return Checkpoint{Network(std::move(blocks)), std::move(echo), seed};
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    const std::string bytes = serialize_checkpoint(ckpt);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_checkpoint(bytes);
}

}  // namespace duonet
