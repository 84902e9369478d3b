#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "duonet/autograd.hpp"
#include "duonet/data.hpp"
#include "duonet/network.hpp"

namespace duonet {

enum class OptimizerKind { sgd, adam };

std::string_view to_string(OptimizerKind k);
OptimizerKind parse_optimizer_kind(std::string_view name);

struct OptimizerSettings {
    OptimizerKind kind = OptimizerKind::adam;
    double alpha = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    /// Throws ConfigError unless alpha > 0, eps > 0 and 0 <= beta1, beta2 < 1.
    void validate() const;

    friend bool operator==(const OptimizerSettings&, const OptimizerSettings&) = default;
};

/// theta -= alpha * g elementwise.
void sgd_update(std::span<double> params, std::span<const double> grads, double alpha);

/// Adam moment buffers for one parameter array.
struct AdamMoments {
    RealVector m;
    RealVector v;
};

/// One Adam update with bias correction at step t (1-based):
/// m = b1 m + (1-b1) g, v = b2 v + (1-b2) g^2,
/// theta -= alpha * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps).
void adam_update(const OptimizerSettings& s, std::uint64_t t, AdamMoments& moments, std::span<double> params,
                 std::span<const double> grads);

/// Optimizer state for a whole network. Moment buffers mirror the parameter groups.
class OptimizerState {
public:
    OptimizerState(const OptimizerSettings& settings, const Network& net);

    const OptimizerSettings& settings() const noexcept { return settings_; }
    std::uint64_t step_count() const noexcept { return step_count_; }
    const std::vector<std::vector<AdamMoments>>& moments() const noexcept { return moments_; }

    /// Applies one update. Throws NumericError naming the parameter ("block[1].w_t[37]")
    /// if a gradient or updated value is not finite.
    void step(Network& net, const std::vector<GradientSet>& grads);

private:
    OptimizerSettings settings_;
    std::uint64_t step_count_ = 0;
    std::vector<std::vector<AdamMoments>> moments_;  // [block][group]
};

void sgd_step(Network& net, const std::vector<GradientSet>& grads, double alpha);
void adam_step(OptimizerState& state, Network& net, const std::vector<GradientSet>& grads);

struct TrainOptions {
    OptimizerSettings optimizer;
    std::size_t batch_size = 32;
    std::size_t epochs = 1;
    std::uint64_t seed = 0;
    std::ostream* progress = nullptr;  // receives "epoch=<e> loss=<f64>" lines
};

struct TrainReport {
    std::vector<double> epoch_losses;
    std::optional<double> validation_rmse;
    std::optional<double> validation_nrmse;
    double seconds = 0.0;
    std::uint64_t seed = 0;
};

struct TrainResult {
    Network network;
    TrainReport report;
};

/// Mini-batch training on the MSE loss. Each epoch shuffles the windows with a
/// generator seeded from (seed, epoch), keeps the last partial batch, and applies one
/// optimizer step per batch. The parameter trajectory depends only on the inputs.
/// If validation windows are given, the report carries their RMSE/NRMSE at the end.
TrainResult train(Network net, const WindowedDataset& data, const TrainOptions& options,
                  const WindowedDataset* validation = nullptr);

/// Permutation of 0..n-1 for one epoch.
std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, std::uint64_t epoch);

}  // namespace duonet
