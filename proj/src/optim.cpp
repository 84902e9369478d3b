#include "duonet/optim.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "duonet/eval.hpp"
#include "duonet/rng.hpp"

namespace duonet {

namespace {

std::string param_path(std::size_t block, std::string_view group, std::size_t index) {
    return "block[" + std::to_string(block) + "]." + std::string(group) + "[" + std::to_string(index) + "]";
}

void require_congruent(const Network& net, const std::vector<GradientSet>& grads) {
    if (grads.size() != net.size()) {
        throw ShapeError("gradient list has " + std::to_string(grads.size()) + " blocks, network has " +
                         std::to_string(net.size()));
    }
}

void check_finite(std::span<const double> values, std::size_t block, std::string_view group, const char* what) {
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k])) {
            throw NumericError(std::string("non-finite ") + what + " at " + param_path(block, group, k));
        }
    }
}

}  // namespace

std::string_view to_string(OptimizerKind k) { return k == OptimizerKind::sgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer_kind(std::string_view name) {
    if (name == "sgd") return OptimizerKind::sgd;
    if (name == "adam") return OptimizerKind::adam;
    throw ConfigError("unknown optimizer '" + std::string(name) + "'");
}

void OptimizerSettings::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("learning rate must be positive");
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw ConfigError("beta1 and beta2 must lie in [0, 1)");
    }
}

void sgd_update(std::span<double> params, std::span<const double> grads, double alpha) {
    if (params.size() != grads.size()) throw ShapeError("sgd_update: parameter/gradient length mismatch");
    for (std::size_t k = 0; k < params.size(); ++k) params[k] -= alpha * grads[k];
}

void adam_update(const OptimizerSettings& s, std::uint64_t t, AdamMoments& mo, std::span<double> params,
                 std::span<const double> grads) {
    if (params.size() != grads.size() || mo.m.size() != params.size() || mo.v.size() != params.size()) {
        throw ShapeError("adam_update: parameter/gradient/moment length mismatch");
    }
    const double td = static_cast<double>(t);
    const double c1 = 1.0 - std::pow(s.beta1, td);
    const double c2 = 1.0 - std::pow(s.beta2, td);
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double g = grads[k];
        mo.m[k] = s.beta1 * mo.m[k] + (1.0 - s.beta1) * g;
        mo.v[k] = s.beta2 * mo.v[k] + (1.0 - s.beta2) * g * g;
        const double m_hat = mo.m[k] / c1;
        const double v_hat = mo.v[k] / c2;
        params[k] -= s.alpha * m_hat / (std::sqrt(v_hat) + s.eps);
    }
}

OptimizerState::OptimizerState(const OptimizerSettings& settings, const Network& net) : settings_(settings) {
    settings_.validate();
    for (const auto& b : net.blocks()) {
        std::vector<AdamMoments> per_block;
        if (settings_.kind == OptimizerKind::adam) {
            for (const auto& g : b.parameters()) {
                per_block.push_back({RealVector(g.values.size(), 0.0), RealVector(g.values.size(), 0.0)});
            }
        }
        moments_.push_back(std::move(per_block));
    }
}

void OptimizerState::step(Network& net, const std::vector<GradientSet>& grads) {
    require_congruent(net, grads);
    ++step_count_;
    for (std::size_t b = 0; b < net.size(); ++b) {
        auto params = net.block(b).parameters();
        const auto g = grads[b].groups();
        if (params.size() != g.size()) throw ShapeError("gradient groups do not match block " + std::to_string(b));
        for (std::size_t i = 0; i < params.size(); ++i) {
            check_finite(g[i].values, b, params[i].name, "gradient");
            if (settings_.kind == OptimizerKind::sgd) {
                sgd_update(params[i].values, g[i].values, settings_.alpha);
            } else {
                adam_update(settings_, step_count_, moments_[b][i], params[i].values, g[i].values);
            }
            check_finite(params[i].values, b, params[i].name, "update");
        }
    }
}

void sgd_step(Network& net, const std::vector<GradientSet>& grads, double alpha) {
    OptimizerSettings s;
    s.kind = OptimizerKind::sgd;
    s.alpha = alpha;
    OptimizerState state(s, net);
    state.step(net, grads);
}

void adam_step(OptimizerState& state, Network& net, const std::vector<GradientSet>& grads) {
    if (state.settings().kind != OptimizerKind::adam) throw ConfigError("adam_step needs an Adam optimizer state");
    state.step(net, grads);
}

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, std::uint64_t epoch) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    CounterRng rng(seed, (streams::shuffle << 32) ^ epoch);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.below(i);
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

TrainResult train(Network net, const WindowedDataset& data, const TrainOptions& options,
                  const WindowedDataset* validation) {
    options.optimizer.validate();
    if (options.batch_size == 0) throw ConfigError("batch size must be >= 1");
    const auto started = std::chrono::steady_clock::now();

    TrainReport report;
    report.seed = options.seed;
    OptimizerState state(options.optimizer, net);

    if (options.epochs > 0 && data.windows.empty()) throw InsufficientDataError("training set has no windows");

    std::vector<Window> batch;
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        const auto order = epoch_order(data.size(), options.seed, epoch);
        double weighted = 0.0;
        for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
            const std::size_t stop = std::min(order.size(), start + options.batch_size);
            batch.clear();
            for (std::size_t k = start; k < stop; ++k) batch.push_back(data.windows[order[k]]);
            const BackwardResult br = backward(net, batch);
            state.step(net, br.grads);
            weighted += br.loss * static_cast<double>(batch.size());
        }
        const double epoch_loss = weighted / static_cast<double>(data.size());
        if (!std::isfinite(epoch_loss)) throw NumericError("training diverged at epoch " + std::to_string(epoch));
        report.epoch_losses.push_back(epoch_loss);
        if (options.progress) *options.progress << "epoch=" << epoch << " loss=" << format_double(epoch_loss) << '\n';
    }

    if (validation && !validation->windows.empty()) {
        RealVector y, yhat;
        for (const Window& w : validation->windows) {
            const RealMatrix pred = net.forward(w.input);
            for (double v : w.target.data()) y.push_back(v);
            for (double v : pred.data()) yhat.push_back(v);
        }
        report.validation_rmse = rmse(y, yhat);
        if (population_stddev(y) > 0.0) report.validation_nrmse = nrmse(y, yhat);
    }

    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return TrainResult{std::move(net), std::move(report)};
}

}  // namespace duonet
