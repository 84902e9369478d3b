#include "duonet/eval.hpp"

#include <cmath>

namespace duonet {

namespace {

void require_pair(std::span<const double> y, std::span<const double> yhat) {
    if (y.empty()) throw ShapeError("metric over an empty sequence");
    if (y.size() != yhat.size()) {
        throw ShapeError("metric length mismatch: " + std::to_string(y.size()) + " targets vs " +
                         std::to_string(yhat.size()) + " predictions");
    }
}

}  // namespace

double rmse(std::span<const double> y, std::span<const double> yhat) {
    require_pair(y, yhat);
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - yhat[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(y.size()));
}

double population_stddev(std::span<const double> y) {
    if (y.empty()) throw ShapeError("standard deviation of an empty sequence");
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double acc = 0.0;
    for (double v : y) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(y.size()));
}

double nrmse(std::span<const double> y, std::span<const double> yhat) {
    require_pair(y, yhat);
    const double sigma = population_stddev(y);
    if (!(sigma > 0.0)) throw DegenerateTargetError("target is constant; NRMSE is undefined");
    return rmse(y, yhat) / sigma;
}

EvalResult evaluate(std::span<const double> y, std::span<const double> yhat) {
    return EvalResult{rmse(y, yhat), nrmse(y, yhat), y.size()};
}

Simulation simulate(const Network& net, const SignalRecord& rec, std::size_t stride) {
    validate(rec);
    const std::size_t m = net.input_rows();
    const std::size_t n = net.output_rows();
    if (rec.u.cols() != net.input_cols() || rec.y.cols() != net.output_cols()) {
        throw ShapeError("record has " + std::to_string(rec.u.cols()) + " inputs and " + std::to_string(rec.y.cols()) +
                         " outputs, network expects " + std::to_string(net.input_cols()) + " and " +
                         std::to_string(net.output_cols()));
    }
    const WindowedDataset ds = build_windows(rec, m, n, stride);

    const std::size_t d_out = net.output_cols();
    std::vector<std::size_t> indices;
    RealVector y, yhat;
    for (const Window& w : ds.windows) {
        const RealMatrix pred = net.forward(w.input);
        for (std::size_t r = 0; r < n; ++r) {
            indices.push_back(w.end - n + r);
            for (std::size_t c = 0; c < d_out; ++c) {
                y.push_back(w.target(r, c));
                yhat.push_back(pred(r, c));
            }
        }
    }
    const std::size_t rows = indices.size();
    Simulation sim{std::move(indices), RealMatrix(rows, d_out, y), RealMatrix(rows, d_out, yhat), {}};
    sim.metrics = evaluate(y, yhat);
    return sim;
}

Simulation simulate(const Network& net, const SignalRecord& rec) {
    return simulate(net, rec, net.output_rows());
}

}  // namespace duonet
