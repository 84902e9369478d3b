#pragma once

// Reference implementations used only by the tests. They trade speed for being
// obviously correct and share no code with the library paths they check.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "duonet/autograd.hpp"
#include "duonet/network.hpp"
#include "duonet/rng.hpp"

namespace oracle {

using duonet::Complex;

inline std::vector<Complex> naive_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
            acc += x[j] * Complex(std::cos(angle), std::sin(angle));
        }
        out[k] = acc;
    }
    return out;
}

// Real part of the inverse DFT of the Hermitian extension of half-spectrum bins.
inline std::vector<double> naive_irfft(const std::vector<Complex>& bins, std::size_t n) {
    std::vector<Complex> full(n);
    for (std::size_t k = 0; k < n; ++k) {
        full[k] = k < bins.size() ? bins[k] : std::conj(bins[n - k]);
    }
    full[0] = full[0].real();
    if (n % 2 == 0) full[n / 2] = full[n / 2].real();
    for (std::size_t k = 1; k < bins.size(); ++k) full[n - k] = std::conj(full[k]);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        Complex acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
            acc += full[k] * Complex(std::cos(angle), std::sin(angle));
        }
        out[j] = acc.real() / static_cast<double>(n);
    }
    return out;
}

// Window end indices by scanning every candidate.
inline std::vector<std::size_t> enumerate_ends(std::size_t length, std::size_t m, std::size_t n, std::size_t stride) {
    std::vector<std::size_t> ends;
    const std::size_t first = std::max(m, n);
    for (std::size_t s = 0; s <= length; ++s) {
        if (s >= first && (s - first) % stride == 0) ends.push_back(s);
    }
    return ends;
}

// One block evaluated with naive DFTs (rfft kind) or dense matrix products (explicit).
inline std::vector<double> block_forward(const duonet::DualBlock& block, const std::vector<double>& x) {
    const std::size_t n_out = block.output_size();
    std::vector<double> z(n_out, 0.0);
    if (block.time_enabled()) {
        for (std::size_t j = 0; j < n_out; ++j) {
            double acc = block.b_l()[j];
            for (std::size_t i = 0; i < x.size(); ++i) acc += block.w_l()(j, i) * x[i];
            z[j] += acc;
        }
    }
    if (block.transform_enabled()) {
        const auto& in = block.input_transform();
        const auto& out = block.output_transform();
        std::vector<Complex> bins;
        if (in.is_explicit()) {
            bins.assign(in.size(), Complex{});
            for (std::size_t q = 0; q < in.size(); ++q)
                for (std::size_t i = 0; i < x.size(); ++i) bins[q] += x[i] * in.matrix()(i, q);
        } else {
            const auto full = naive_dft(x);
            bins.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(in.bins()));
        }
        std::vector<Complex> mixed(out.bins());
        for (std::size_t p = 0; p < mixed.size(); ++p) {
            mixed[p] = block.b_t()[p];
            for (std::size_t q = 0; q < bins.size(); ++q) mixed[p] += block.w_t()(p, q) * bins[q];
        }
        std::vector<double> back(n_out);
        if (out.is_explicit()) {
            for (std::size_t j = 0; j < n_out; ++j) {
                Complex acc{};
                for (std::size_t p = 0; p < mixed.size(); ++p) acc += mixed[p] * out.inverse_matrix()(p, j);
                back[j] = acc.real();
            }
        } else {
            back = naive_irfft(mixed, n_out);
        }
        for (std::size_t j = 0; j < n_out; ++j) z[j] += back[j];
    }
    for (double& v : z) v = duonet::activate(block.spec().activation, v);
    return z;
}

inline std::vector<double> network_forward(const duonet::Network& net, std::vector<double> x) {
    for (const auto& b : net.blocks()) x = block_forward(b, x);
    return x;
}

inline double batch_loss(const duonet::Network& net, const std::vector<duonet::Window>& batch) {
    double acc = 0.0;
    std::size_t count = 0;
    for (const auto& w : batch) {
        const auto in = w.input.data();
        const auto pred = network_forward(net, std::vector<double>(in.begin(), in.end()));
        const auto t = w.target.data();
        for (std::size_t j = 0; j < pred.size(); ++j) {
            acc += (pred[j] - t[j]) * (pred[j] - t[j]);
            ++count;
        }
    }
    return acc / static_cast<double>(count);
}

// Central differences of batch_loss for every scalar parameter, in the order of
// DualBlock::parameters() with complex values as (re, im) pairs.
inline std::vector<std::vector<std::vector<double>>> numeric_gradient(duonet::Network net,
                                                                      const std::vector<duonet::Window>& batch,
                                                                      double h) {
    std::vector<std::vector<std::vector<double>>> out;
    for (std::size_t b = 0; b < net.size(); ++b) {
        std::vector<std::vector<double>> per_block;
        const std::size_t groups = net.block(b).parameters().size();
        for (std::size_t g = 0; g < groups; ++g) {
            const std::size_t len = net.block(b).parameters()[g].values.size();
            std::vector<double> grad(len);
            for (std::size_t k = 0; k < len; ++k) {
                double& p = net.block(b).parameters()[g].values[k];
                const double saved = p;
                p = saved + h;
                const double up = batch_loss(net, batch);
                p = saved - h;
                const double down = batch_loss(net, batch);
                p = saved;
                grad[k] = (up - down) / (2.0 * h);
            }
            per_block.push_back(std::move(grad));
        }
        out.push_back(std::move(per_block));
    }
    return out;
}

inline std::vector<duonet::Window> random_batch(const duonet::Network& net, std::size_t count, std::uint64_t seed) {
    duonet::CounterRng rng(seed, 99);
    std::vector<duonet::Window> batch;
    for (std::size_t k = 0; k < count; ++k) {
        duonet::Window w{duonet::RealMatrix(net.input_rows(), net.input_cols()),
                         duonet::RealMatrix(net.output_rows(), net.output_cols()), 0};
        for (double& v : w.input.data()) v = rng.uniform(-1.0, 1.0);
        for (double& v : w.target.data()) v = rng.uniform(-1.0, 1.0);
        batch.push_back(std::move(w));
    }
    return batch;
}

}  // namespace oracle
