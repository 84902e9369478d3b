#include "duonet/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace duonet {

namespace {

struct BlockTrace {
    RealVector input;
    ComplexVector bins;  // transform of the input, empty if the branch is off
    RealVector pre_activation;
};

void require_batch_shapes(const Network& net, std::span<const Window> batch) {
    if (batch.empty()) throw ShapeError("empty batch");
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Window& w = batch[i];
        if (w.input.rows() != net.input_rows() || w.input.cols() != net.input_cols() ||
            w.target.rows() != net.output_rows() || w.target.cols() != net.output_cols()) {
            throw ShapeError("batch sample " + std::to_string(i) + " has input " + w.input.shape_string() +
                             " and target " + w.target.shape_string() + ", network maps [" +
                             std::to_string(net.input_rows()) + " x " + std::to_string(net.input_cols()) + "] to [" +
                             std::to_string(net.output_rows()) + " x " + std::to_string(net.output_cols()) + "]");
        }
    }
}

// Forward pass that keeps what the backward rules need. Returns the network output.
RealVector traced_forward(const Network& net, std::span<const double> x, std::vector<BlockTrace>& trace) {
    trace.resize(net.size());
    RealVector h(x.begin(), x.end());
    for (std::size_t b = 0; b < net.size(); ++b) {
        const DualBlock& block = net.block(b);
        BlockTrace& t = trace[b];
        t.input = h;
        t.bins.clear();
        RealVector z;
        if (block.time_enabled()) z = block.time_branch(h);
        if (block.transform_enabled()) {
            t.bins = block.input_transform().apply(h);
            ComplexVector spec(block.b_t());
            const ComplexMatrix& w = block.w_t();
            for (std::size_t p = 0; p < w.rows(); ++p) {
                const auto row = w.row_span(p);
                Complex acc{};
                for (std::size_t q = 0; q < row.size(); ++q) acc += row[q] * t.bins[q];
                spec[p] += acc;
            }
            const RealVector ht = block.output_transform().apply_inverse_real(spec);
            if (z.empty()) {
                z = ht;
            } else {
                for (std::size_t i = 0; i < z.size(); ++i) z[i] += ht[i];
            }
        }
        t.pre_activation = z;
        h = activate(block.spec().activation, z);
    }
    return h;
}

// Propagates dL/d(output) of one block into its gradient set; returns dL/d(input).
RealVector block_backward(const DualBlock& block, const BlockTrace& t, std::span<const double> grad_out,
                          GradientSet& g, bool need_input_grad) {
    const Activation act = block.spec().activation;
    RealVector gz(grad_out.size());
    for (std::size_t i = 0; i < gz.size(); ++i) gz[i] = grad_out[i] * activate_derivative(act, t.pre_activation[i]);

    RealVector gx(need_input_grad ? block.input_size() : 0, 0.0);

    if (block.time_enabled()) {
        const RealMatrix& w = block.w_l();
        RealMatrix& gw = *g.w_l;
        for (std::size_t p = 0; p < w.rows(); ++p) {
            const double gp = gz[p];
            g.b_l[p] += gp;
            for (std::size_t q = 0; q < w.cols(); ++q) gw(p, q) += gp * t.input[q];
            if (need_input_grad) {
                const auto row = w.row_span(p);
                for (std::size_t q = 0; q < row.size(); ++q) gx[q] += gp * row[q];
            }
        }
    }

    if (block.transform_enabled()) {
        const ComplexVector g_spec = block.output_transform().inverse_real_adjoint(gz);
        const ComplexMatrix& w = block.w_t();
        ComplexMatrix& gw = *g.w_t;
        ComplexVector g_bins(need_input_grad ? w.cols() : 0);
        for (std::size_t p = 0; p < w.rows(); ++p) {
            const Complex gp = g_spec[p];
            g.b_t[p] += gp;
            const auto row = w.row_span(p);
            for (std::size_t q = 0; q < w.cols(); ++q) {
                gw(p, q) += gp * std::conj(t.bins[q]);
                if (need_input_grad) g_bins[q] += std::conj(row[q]) * gp;
            }
        }
        if (need_input_grad) {
            const RealVector gxt = block.input_transform().forward_adjoint(g_bins);
            for (std::size_t q = 0; q < gx.size(); ++q) gx[q] += gxt[q];
        }
    }
    return gx;
}

}  // namespace

GradientSet GradientSet::zeros_like(const DualBlock& block) {
    GradientSet g;
    if (block.time_enabled()) {
        g.w_l.emplace(block.w_l().rows(), block.w_l().cols());
        g.b_l.assign(block.b_l().size(), 0.0);
    }
    if (block.transform_enabled()) {
        g.w_t.emplace(block.w_t().rows(), block.w_t().cols());
        g.b_t.assign(block.b_t().size(), Complex{});
    }
    return g;
}

std::vector<ParamGroup> GradientSet::groups() {
    std::vector<ParamGroup> out;
    if (w_l) {
        out.push_back({"w_l", w_l->data()});
        out.push_back({"b_l", b_l});
    }
    if (w_t) {
        out.push_back({"w_t", as_real_pairs(w_t->data())});
        out.push_back({"b_t", as_real_pairs(std::span<Complex>(b_t))});
    }
    return out;
}

std::vector<ConstParamGroup> GradientSet::groups() const {
    std::vector<ConstParamGroup> out;
    if (w_l) {
        out.push_back({"w_l", w_l->data()});
        out.push_back({"b_l", b_l});
    }
    if (w_t) {
        out.push_back({"w_t", as_real_pairs(w_t->data())});
        out.push_back({"b_t", as_real_pairs(std::span<const Complex>(b_t))});
    }
    return out;
}

double mse_loss(const Network& net, std::span<const Window> batch) {
    require_batch_shapes(net, batch);
    double total = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const RealVector yhat = net.forward_flat(batch[i].input.data());
        const auto y = batch[i].target.data();
        double sample = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double r = yhat[k] - y[k];
            sample += r * r;
        }
        if (!std::isfinite(sample)) throw NumericError("non-finite loss at batch index " + std::to_string(i));
        total += sample;
    }
    return total / static_cast<double>(batch.size() * net.output_shape().output_size());
}

BackwardResult backward(const Network& net, std::span<const Window> batch) {
    require_batch_shapes(net, batch);
    BackwardResult result;
    result.grads.reserve(net.size());
    for (const auto& b : net.blocks()) result.grads.push_back(GradientSet::zeros_like(b));

    const std::size_t n_out = net.output_shape().output_size();
    const double scale = 2.0 / static_cast<double>(batch.size() * n_out);

    std::vector<BlockTrace> trace;
    double total = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const RealVector yhat = traced_forward(net, batch[i].input.data(), trace);
        const auto y = batch[i].target.data();
        RealVector g(n_out);
        double sample = 0.0;
        for (std::size_t k = 0; k < n_out; ++k) {
            const double r = yhat[k] - y[k];
            sample += r * r;
            g[k] = scale * r;
        }
        if (!std::isfinite(sample)) throw NumericError("non-finite loss at batch index " + std::to_string(i));
        total += sample;

        for (std::size_t b = net.size(); b-- > 0;) {
            g = block_backward(net.block(b), trace[b], g, result.grads[b], b > 0);
        }
    }
    result.loss = total / static_cast<double>(batch.size() * n_out);
    return result;
}

GradCheckReport finite_diff_check(const Network& net, std::span<const Window> batch, double step) {
    if (!(step >= 1e-8 && step <= 1e-3)) {
        throw ConfigError("finite-difference step must lie in [1e-8, 1e-3], got " + std::to_string(step));
    }
    const BackwardResult analytic = backward(net, batch);

    GradCheckReport report;
    report.step = step;
    Network probe = net;
    for (std::size_t b = 0; b < probe.size(); ++b) {
        auto params = probe.block(b).parameters();
        const auto grads = analytic.grads[b].groups();
        for (std::size_t gi = 0; gi < params.size(); ++gi) {
            GroupCheck check{b, std::string(params[gi].name), 0.0, 0};
            auto values = params[gi].values;
            for (std::size_t k = 0; k < values.size(); ++k) {
                const double saved = values[k];
                values[k] = saved + step;
                const double up = mse_loss(probe, batch);
                values[k] = saved - step;
                const double down = mse_loss(probe, batch);
                values[k] = saved;
                if (!std::isfinite(up) || !std::isfinite(down)) {
                    throw NumericError("non-finite perturbed loss at block " + std::to_string(b) + " " +
                                       check.group + "[" + std::to_string(k) + "]");
                }
                const double numeric = (up - down) / (2.0 * step);
                const double exact = grads[gi].values[k];
                const double denom = std::max({std::abs(exact), std::abs(numeric), 1e-12});
                const double rel = std::abs(exact - numeric) / denom;
                if (rel > check.max_rel_error) {
                    check.max_rel_error = rel;
                    check.worst_index = k;
                }
                ++report.parameters_checked;
            }
            if (report.groups.empty() || check.max_rel_error > report.max_rel_error) {
                report.max_rel_error = check.max_rel_error;
                report.worst_group = report.groups.size();
            }
            report.groups.push_back(std::move(check));
        }
    }
    return report;
}

double min_abs_preactivation(const Network& net, std::span<const Window> batch) {
    require_batch_shapes(net, batch);
    double smallest = std::numeric_limits<double>::infinity();
    std::vector<BlockTrace> trace;
    for (const auto& w : batch) {
        traced_forward(net, w.input.data(), trace);
        for (const auto& t : trace)
            for (double z : t.pre_activation) smallest = std::min(smallest, std::abs(z));
    }
    return smallest;
}

}  // namespace duonet
