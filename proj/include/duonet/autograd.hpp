#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "duonet/data.hpp"
#include "duonet/network.hpp"

namespace duonet {

/// Loss gradient for one block, shaped like the block's parameters. Groups of a
/// disabled branch are absent.
struct GradientSet {
    std::optional<RealMatrix> w_l;
    RealVector b_l;
    std::optional<ComplexMatrix> w_t;
    ComplexVector b_t;

    static GradientSet zeros_like(const DualBlock& block);

    std::vector<ParamGroup> groups();
    std::vector<ConstParamGroup> groups() const;
};

struct BackwardResult {
    double loss = 0.0;
    std::vector<GradientSet> grads;  // one per block
};

/// Mean squared error over all samples and output coordinates.
double mse_loss(const Network& net, std::span<const Window> batch);

/// Loss and its gradient with respect to every enabled parameter. Complex parameters
/// get (dL/dRe, dL/dIm) stored as the real and imaginary part of the gradient entry.
/// Samples are accumulated in batch order.
BackwardResult backward(const Network& net, std::span<const Window> batch);

struct GroupCheck {
    std::size_t block = 0;
    std::string group;
    double max_rel_error = 0.0;
    std::size_t worst_index = 0;  // into the group's real-pair view
};

struct GradCheckReport {
    std::vector<GroupCheck> groups;
    double max_rel_error = 0.0;
    std::size_t worst_group = 0;  // index into groups
    double step = 0.0;
    std::size_t parameters_checked = 0;
};

/// Compares backward() against central differences (L(p+h) - L(p-h)) / 2h for every
/// scalar parameter. Relative error uses max(|analytic|, |numeric|, 1e-12) as the
/// denominator. step must lie in [1e-8, 1e-3].
GradCheckReport finite_diff_check(const Network& net, std::span<const Window> batch, double step = 1e-6);

/// Smallest |pre-activation| over all blocks and samples; used to keep relu checks
/// away from the kink.
double min_abs_preactivation(const Network& net, std::span<const Window> batch);

}  // namespace duonet
