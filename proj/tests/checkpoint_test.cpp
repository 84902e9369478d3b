#include "duonet/checkpoint.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>

#include "duonet/error.hpp"
#include "oracles.hpp"

namespace duonet {
namespace {

BlockSpec spec(std::size_t s_in, std::size_t s_out, TransformKind kind, bool time, bool transform, Activation act,
               std::size_t d_in = 1, std::size_t d_out = 1) {
    BlockSpec s;
    s.shape = BlockShape{s_in, s_out, d_in, d_out};
    s.transform = kind;
    s.time_enabled = time;
    s.transform_enabled = transform;
    s.activation = act;
    return s;
}

Checkpoint sample_checkpoint() {
    Network net = Network::initialized({spec(6, 4, TransformKind::rfft, true, true, Activation::gelu, 2, 1),
                                        spec(4, 4, TransformKind::hadamard, false, true, Activation::tanh),
                                        spec(4, 2, TransformKind::identity, true, false, Activation::identity, 1, 3)},
                                       17);
    CounterRng rng(3, 3);
    for (auto& b : net.blocks())
        for (auto& g : b.parameters())
            for (double& v : g.values) v += rng.uniform(-1e-3, 1e-3);
    return Checkpoint{std::move(net), "seed = 17\n", 17};
}

TEST(Checkpoint, RoundTripPreservesEverythingBitForBit) {
    const Checkpoint a = sample_checkpoint();
    const std::string bytes = serialize_checkpoint(a);
    const Checkpoint b = deserialize_checkpoint(bytes);
    EXPECT_EQ(b.config_echo, a.config_echo);
    EXPECT_EQ(b.seed, a.seed);
    EXPECT_EQ(b.network.specs(), a.network.specs());
    EXPECT_EQ(serialize_checkpoint(b), bytes);

    const auto batch = oracle::random_batch(a.network, 5, 1);
    for (const auto& w : batch) {
        const RealMatrix ya = a.network.forward(w.input);
        const RealMatrix yb = b.network.forward(w.input);
        EXPECT_EQ(std::memcmp(ya.data().data(), yb.data().data(), ya.size() * sizeof(double)), 0);
    }
}

TEST(Checkpoint, LayoutStartsWithMagicAndVersion) {
    const std::string bytes = serialize_checkpoint(sample_checkpoint());
    EXPECT_EQ(bytes.substr(0, 6), "DUONET");
    EXPECT_EQ(bytes.substr(6, 4), std::string("\x01\x00\x00\x00", 4));
}

TEST(Checkpoint, BadMagicOrVersionIsAVersionError) {
    std::string bytes = serialize_checkpoint(sample_checkpoint());
    std::string bad_magic = bytes;
    bad_magic[0] = 'X';
    EXPECT_THROW(deserialize_checkpoint(bad_magic), VersionError);
    std::string bad_version = bytes;
    bad_version[6] = 2;
    EXPECT_THROW(deserialize_checkpoint(bad_version), VersionError);
}

TEST(Checkpoint, EveryTruncationIsDetected) {
    const std::string bytes = serialize_checkpoint(sample_checkpoint());
    for (std::size_t len = 0; len < bytes.size(); ++len) {
        EXPECT_THROW(deserialize_checkpoint(std::string_view(bytes).substr(0, len)), Error) << len;
    }
    EXPECT_THROW(deserialize_checkpoint(std::string_view(bytes).substr(0, bytes.size() - 3)), TruncatedError);
}

TEST(Checkpoint, TrailingBytesAreRejected) {
    EXPECT_THROW(deserialize_checkpoint(serialize_checkpoint(sample_checkpoint()) + "x"), ShapeError);
}

TEST(Checkpoint, FileRoundTripAndMissingFile) {
    const auto path = std::filesystem::temp_directory_path() / "duonet_checkpoint_test.bin";
    const Checkpoint a = sample_checkpoint();
    save_checkpoint(a, path);
    EXPECT_EQ(serialize_checkpoint(load_checkpoint(path)), serialize_checkpoint(a));
    std::filesystem::remove(path);
    EXPECT_THROW(load_checkpoint(path), IoError);
}

}  // namespace
}  // namespace duonet
