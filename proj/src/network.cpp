#include "duonet/network.hpp"

#include <cmath>
#include <numbers>

namespace duonet {

namespace {

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double standard_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

std::string_view to_string(Activation a) {
    switch (a) {
        case Activation::gelu: return "gelu";
        case Activation::relu: return "relu";
        case Activation::tanh: return "tanh";
        case Activation::sigmoid: return "sigmoid";
        case Activation::identity: return "identity";
    }
    return "?";
}

Activation parse_activation(std::string_view name) {
    for (auto a : {Activation::gelu, Activation::relu, Activation::tanh, Activation::sigmoid, Activation::identity}) {
        if (to_string(a) == name) return a;
    }
    throw ConfigError("unknown activation '" + std::string(name) + "'");
}

double activate(Activation a, double x) {
    switch (a) {
        case Activation::gelu: return x * standard_normal_cdf(x);
        case Activation::relu: return x > 0.0 ? x : 0.0;
        case Activation::tanh: return std::tanh(x);
        case Activation::sigmoid: return sigmoid(x);
        case Activation::identity: return x;
    }
    return x;
}

double activate_derivative(Activation a, double x) {
    switch (a) {
        case Activation::gelu: return standard_normal_cdf(x) + x * standard_normal_pdf(x);
        case Activation::relu: return x > 0.0 ? 1.0 : 0.0;
        case Activation::tanh: {
            const double t = std::tanh(x);
            return 1.0 - t * t;
        }
        case Activation::sigmoid: {
            const double s = sigmoid(x);
            return s * (1.0 - s);
        }
        case Activation::identity: return 1.0;
    }
    return 1.0;
}

RealVector activate(Activation a, std::span<const double> x) {
    RealVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = activate(a, x[i]);
    return out;
}

RealVector activate_derivative(Activation a, std::span<const double> x) {
    RealVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = activate_derivative(a, x[i]);
    return out;
}

std::span<double> as_real_pairs(std::span<Complex> v) noexcept {
    return {reinterpret_cast<double*>(v.data()), 2 * v.size()};
}

std::span<const double> as_real_pairs(std::span<const Complex> v) noexcept {
    return {reinterpret_cast<const double*>(v.data()), 2 * v.size()};
}

DualBlock::DualBlock(const BlockSpec& spec) : spec_(spec) {
    const BlockShape& s = spec.shape;
    if (s.s_in == 0 || s.s_out == 0 || s.d_in == 0 || s.d_out == 0) {
        throw ConfigError("block sizes must all be >= 1");
    }
    if (!spec.time_enabled && !spec.transform_enabled) {
        throw ConfigError("block must enable at least one of the time and transform branches");
    }
    if (spec.time_enabled) {
        w_l_.emplace(output_size(), input_size());
        b_l_.assign(output_size(), 0.0);
    }
    if (spec.transform_enabled) {
        in_transform_.emplace(OrthogonalTransform::make(spec.transform, input_size()));
        out_transform_.emplace(OrthogonalTransform::make(spec.transform, output_size()));
        w_t_.emplace(out_transform_->bins(), in_transform_->bins());
        b_t_.assign(out_transform_->bins(), Complex{});
    }
}

RealMatrix& DualBlock::w_l() {
    if (!w_l_) throw ConfigError("time branch is disabled");
    return *w_l_;
}
const RealMatrix& DualBlock::w_l() const {
    if (!w_l_) throw ConfigError("time branch is disabled");
    return *w_l_;
}
RealVector& DualBlock::b_l() {
    if (!w_l_) throw ConfigError("time branch is disabled");
    return b_l_;
}
const RealVector& DualBlock::b_l() const {
    if (!w_l_) throw ConfigError("time branch is disabled");
    return b_l_;
}
ComplexMatrix& DualBlock::w_t() {
    if (!w_t_) throw ConfigError("transform branch is disabled");
    return *w_t_;
}
const ComplexMatrix& DualBlock::w_t() const {
    if (!w_t_) throw ConfigError("transform branch is disabled");
    return *w_t_;
}
ComplexVector& DualBlock::b_t() {
    if (!w_t_) throw ConfigError("transform branch is disabled");
    return b_t_;
}
const ComplexVector& DualBlock::b_t() const {
    if (!w_t_) throw ConfigError("transform branch is disabled");
    return b_t_;
}
const OrthogonalTransform& DualBlock::input_transform() const {
    if (!in_transform_) throw ConfigError("transform branch is disabled");
    return *in_transform_;
}
const OrthogonalTransform& DualBlock::output_transform() const {
    if (!out_transform_) throw ConfigError("transform branch is disabled");
    return *out_transform_;
}

void DualBlock::require_input(std::span<const double> x) const {
    if (x.size() != input_size()) {
        throw ShapeError("block expects input length " + std::to_string(input_size()) + ", got " +
                         std::to_string(x.size()));
    }
}

RealVector DualBlock::time_branch(std::span<const double> x) const {
    require_input(x);
    const RealMatrix& w = w_l();
    RealVector h(b_l_);
    for (std::size_t p = 0; p < w.rows(); ++p) {
        const auto row = w.row_span(p);
        double acc = 0.0;
        for (std::size_t q = 0; q < row.size(); ++q) acc += row[q] * x[q];
        h[p] += acc;
    }
    return h;
}

RealVector DualBlock::transform_branch(std::span<const double> x) const {
    require_input(x);
    const ComplexMatrix& w = w_t();
    const ComplexVector bins = in_transform_->apply(x);
    ComplexVector z(b_t_);
    for (std::size_t p = 0; p < w.rows(); ++p) {
        const auto row = w.row_span(p);
        Complex acc{};
        for (std::size_t q = 0; q < row.size(); ++q) acc += row[q] * bins[q];
        z[p] += acc;
    }
    return out_transform_->apply_inverse_real(z);
}

RealVector DualBlock::pre_activation(std::span<const double> x) const {
    if (!spec_.transform_enabled) return time_branch(x);
    if (!spec_.time_enabled) return transform_branch(x);
    RealVector h = time_branch(x);
    const RealVector ht = transform_branch(x);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] += ht[i];
    return h;
}

RealVector DualBlock::forward(std::span<const double> x) const {
    return activate(spec_.activation, pre_activation(x));
}

void DualBlock::initialize(CounterRng& rng) {
    if (w_l_) {
        const double bound = std::sqrt(1.0 / static_cast<double>(w_l_->cols()));
        for (double& v : w_l_->data()) v = rng.uniform(-bound, bound);
        std::fill(b_l_.begin(), b_l_.end(), 0.0);
    }
    if (w_t_) {
        const double bound = std::sqrt(1.0 / static_cast<double>(w_t_->cols()));
        for (Complex& v : w_t_->data()) {
            const double re = rng.uniform(-bound, bound);
            const double im = rng.uniform(-bound, bound);
            v = Complex(re, im);
        }
        std::fill(b_t_.begin(), b_t_.end(), Complex{});
    }
}

std::size_t DualBlock::parameter_count() const {
    std::size_t n = 0;
    for (const auto& g : parameters()) n += g.values.size();
    return n;
}

std::vector<ParamGroup> DualBlock::parameters() {
    std::vector<ParamGroup> groups;
    if (w_l_) {
        groups.push_back({"w_l", w_l_->data()});
        groups.push_back({"b_l", b_l_});
    }
    if (w_t_) {
        groups.push_back({"w_t", as_real_pairs(w_t_->data())});
        groups.push_back({"b_t", as_real_pairs(std::span<Complex>(b_t_))});
    }
    return groups;
}

std::vector<ConstParamGroup> DualBlock::parameters() const {
    std::vector<ConstParamGroup> groups;
    if (w_l_) {
        groups.push_back({"w_l", w_l_->data()});
        groups.push_back({"b_l", b_l_});
    }
    if (w_t_) {
        groups.push_back({"w_t", as_real_pairs(w_t_->data())});
        groups.push_back({"b_t", as_real_pairs(std::span<const Complex>(b_t_))});
    }
    return groups;
}

RealVector reshape_in(const RealMatrix& m) {
    const auto d = m.data();
    return RealVector(d.begin(), d.end());
}

RealMatrix reshape_out(std::span<const double> v, std::size_t rows, std::size_t cols) {
    if (v.size() != rows * cols) {
        throw ShapeError("reshape_out: length " + std::to_string(v.size()) + " does not fill [" +
                         std::to_string(rows) + " x " + std::to_string(cols) + "]");
    }
    return RealMatrix(rows, cols, RealVector(v.begin(), v.end()));
}

Network::Network(std::vector<DualBlock> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw ConfigError("network needs at least one block");
    for (std::size_t i = 1; i < blocks_.size(); ++i) {
        const BlockShape& prev = blocks_[i - 1].shape();
        const BlockShape& next = blocks_[i].shape();
        if (prev.s_out != next.s_in || prev.d_out != next.d_in) {
            throw ConfigError("block " + std::to_string(i) + " expects input [" + std::to_string(next.s_in) + " x " +
                              std::to_string(next.d_in) + "] but block " + std::to_string(i - 1) + " produces [" +
                              std::to_string(prev.s_out) + " x " + std::to_string(prev.d_out) + "]");
        }
    }
}

Network Network::from_specs(const std::vector<BlockSpec>& specs) {
    std::vector<DualBlock> blocks;
    blocks.reserve(specs.size());
    for (const auto& s : specs) blocks.emplace_back(s);
    return Network(std::move(blocks));
}

Network Network::initialized(const std::vector<BlockSpec>& specs, std::uint64_t seed) {
    Network net = from_specs(specs);
    CounterRng rng(seed, streams::init);
    for (auto& b : net.blocks_) b.initialize(rng);
    return net;
}

std::vector<BlockSpec> Network::specs() const {
    std::vector<BlockSpec> out;
    for (const auto& b : blocks_) out.push_back(b.spec());
    return out;
}

RealVector Network::forward_flat(std::span<const double> x) const {
    RealVector h(x.begin(), x.end());
    for (const auto& b : blocks_) h = b.forward(h);
    return h;
}

RealMatrix Network::forward(const RealMatrix& window) const {
    if (window.rows() != input_rows() || window.cols() != input_cols()) {
        throw ShapeError("network expects window [" + std::to_string(input_rows()) + " x " +
                         std::to_string(input_cols()) + "], got " + window.shape_string());
    }
    return reshape_out(forward_flat(reshape_in(window)), output_rows(), output_cols());
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (const auto& b : blocks_) n += b.parameter_count();
    return n;
}

}  // namespace duonet
