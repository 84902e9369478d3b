#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "duonet/matrix.hpp"
#include "duonet/rng.hpp"
#include "duonet/transforms.hpp"

namespace duonet {

enum class Activation { gelu, relu, tanh, sigmoid, identity };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

/// Applies the activation elementwise. gelu is the exact x * Phi(x) form.
RealVector activate(Activation a, std::span<const double> x);
/// Elementwise derivative at the pre-activation values; relu'(0) is taken as 0.
RealVector activate_derivative(Activation a, std::span<const double> x);

double activate(Activation a, double x);
double activate_derivative(Activation a, double x);

/// Sequence lengths and channel counts of a block's input and output.
struct BlockShape {
    std::size_t s_in = 1;
    std::size_t s_out = 1;
    std::size_t d_in = 1;
    std::size_t d_out = 1;

    std::size_t input_size() const noexcept { return s_in * d_in; }
    std::size_t output_size() const noexcept { return s_out * d_out; }

    friend bool operator==(const BlockShape&, const BlockShape&) = default;
};

/// Architecture of one dual block, without parameter values.
struct BlockSpec {
    BlockShape shape;
    TransformKind transform = TransformKind::rfft;
    bool time_enabled = true;
    bool transform_enabled = true;
    Activation activation = Activation::gelu;

    friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

/// Named view of one parameter array. Complex arrays are exposed as interleaved
/// (re, im) doubles.
struct ParamGroup {
    std::string_view name;
    std::span<double> values;
};

struct ConstParamGroup {
    std::string_view name;
    std::span<const double> values;
};

std::span<double> as_real_pairs(std::span<Complex> v) noexcept;
std::span<const double> as_real_pairs(std::span<const Complex> v) noexcept;

/// One layer of the network: y = act(x W_l^T + b_l + T_out^-1(T_in(x) W_t^T + b_t)).
///
/// x is the flattened [S_i x D_i] window (length S_i D_i). The time branch holds
/// W_l [S_o D_o x S_i D_i] and b_l. The transform branch holds W_t [B_o x B_i] and b_t
/// where B is floor(S D / 2) + 1 for rfft and S D for explicit transforms. Either branch
/// can be disabled, in which case it contributes zero and owns no parameters.
class DualBlock {
public:
    /// All parameters zero. Throws ConfigError if both branches are disabled or a size is 0.
    explicit DualBlock(const BlockSpec& spec);

    const BlockSpec& spec() const noexcept { return spec_; }
    const BlockShape& shape() const noexcept { return spec_.shape; }
    std::size_t input_size() const noexcept { return spec_.shape.input_size(); }
    std::size_t output_size() const noexcept { return spec_.shape.output_size(); }
    bool time_enabled() const noexcept { return spec_.time_enabled; }
    bool transform_enabled() const noexcept { return spec_.transform_enabled; }

    RealMatrix& w_l();
    const RealMatrix& w_l() const;
    RealVector& b_l();
    const RealVector& b_l() const;
    ComplexMatrix& w_t();
    const ComplexMatrix& w_t() const;
    ComplexVector& b_t();
    const ComplexVector& b_t() const;

    const OrthogonalTransform& input_transform() const;
    const OrthogonalTransform& output_transform() const;

    RealVector time_branch(std::span<const double> x) const;
    RealVector transform_branch(std::span<const double> x) const;
    /// Sum of enabled branches before the activation.
    RealVector pre_activation(std::span<const double> x) const;
    RealVector forward(std::span<const double> x) const;

    /// Uniform(-sqrt(1/fan_in), sqrt(1/fan_in)) weights, zero biases.
    void initialize(CounterRng& rng);

    std::size_t parameter_count() const;
    std::vector<ParamGroup> parameters();
    std::vector<ConstParamGroup> parameters() const;

private:
    void require_input(std::span<const double> x) const;

    BlockSpec spec_;
    std::optional<RealMatrix> w_l_;
    RealVector b_l_;
    std::optional<ComplexMatrix> w_t_;
    ComplexVector b_t_;
    std::optional<OrthogonalTransform> in_transform_;
    std::optional<OrthogonalTransform> out_transform_;
};

/// Flattens an [S x D] window row-major.
RealVector reshape_in(const RealMatrix& m);
/// Inverse of reshape_in; v.size() must equal rows * cols.
RealMatrix reshape_out(std::span<const double> v, std::size_t rows, std::size_t cols);

/// Sequential stack of dual blocks with matching shapes between neighbours.
class Network {
public:
    /// Throws ConfigError if the list is empty or a block's (S_i, D_i) differs from the
    /// previous block's (S_o, D_o).
    explicit Network(std::vector<DualBlock> blocks);

    /// Zero-parameter network for the given architecture.
    static Network from_specs(const std::vector<BlockSpec>& specs);
    /// Network with seeded random initialization.
    static Network initialized(const std::vector<BlockSpec>& specs, std::uint64_t seed);

    std::size_t size() const noexcept { return blocks_.size(); }
    DualBlock& block(std::size_t i) { return blocks_.at(i); }
    const DualBlock& block(std::size_t i) const { return blocks_.at(i); }
    std::span<DualBlock> blocks() noexcept { return blocks_; }
    std::span<const DualBlock> blocks() const noexcept { return blocks_; }
    std::vector<BlockSpec> specs() const;

    const BlockShape& input_shape() const { return blocks_.front().shape(); }
    const BlockShape& output_shape() const { return blocks_.back().shape(); }
    std::size_t input_rows() const { return input_shape().s_in; }
    std::size_t input_cols() const { return input_shape().d_in; }
    std::size_t output_rows() const { return output_shape().s_out; }
    std::size_t output_cols() const { return output_shape().d_out; }

    /// [S_i x D_i] window in, [S_o x D_o] prediction out.
    RealMatrix forward(const RealMatrix& window) const;
    RealVector forward_flat(std::span<const double> x) const;

    std::size_t parameter_count() const;

private:
    std::vector<DualBlock> blocks_;
};

}  // namespace duonet
