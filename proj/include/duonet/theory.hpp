#pragma once

#include <cstddef>
#include <span>

#include "duonet/matrix.hpp"
#include "duonet/network.hpp"
#include "duonet/transforms.hpp"

namespace duonet {

/// Dense linear map equivalent to a square transform branch: x W_f + b_f.
struct DenseEquivalent {
    ComplexMatrix w_f;
    ComplexVector b_f;
};

/// W_f = T W_t^T T^-1 and b_f = b_t T^-1, so that
/// (x T W_t^T + b_t) T^-1 == x W_f + b_f for every x.
/// Requires an explicit unitary transform and a square w_t of the same size.
DenseEquivalent dense_equivalent(const OrthogonalTransform& t, const ComplexMatrix& w_t, std::span<const Complex> b_t);

/// (x T W_t^T + b_t) T^-1 evaluated in the transform domain, before any projection.
ComplexVector branch_linear(const OrthogonalTransform& t, const ComplexMatrix& w_t, std::span<const Complex> b_t,
                            std::span<const double> x);

ComplexVector dense_linear(const DenseEquivalent& d, std::span<const double> x);

/// H_ab with entries conj(Tinv_ai) * T_jb. For a real orthogonal T this is
/// phi_ia * phi_bj (phi_k the k-th column of T); for the DFT paired with its inverse it
/// is omega^(ia + bj) / N under either normalization.
ComplexMatrix h_ab_matrix(const OrthogonalTransform& t, std::size_t a, std::size_t b);

/// M_ab with entries T_ib * Tinv_aj, the exact derivative of x T W_t^T T^-1 with respect
/// to W_t(a, b): d/dW_ab = x M_ab. Equals H_ab^T whenever T is real.
ComplexMatrix derivative_matrix(const OrthogonalTransform& t, std::size_t a, std::size_t b);

/// x * M_ab; does not depend on W_t or b_t.
ComplexVector gradient_factor(const OrthogonalTransform& t, std::span<const double> x, std::size_t a, std::size_t b);

/// sum_ab W_t(a, b) M_ab, which reconstructs T W_t^T T^-1.
ComplexMatrix sum_structure(const OrthogonalTransform& t, const ComplexMatrix& w_t);

/// sum_ab W_t(a, b) H_ab^T; matches T W_t^T T^-1 only for real T.
ComplexMatrix sum_structure_h(const OrthogonalTransform& t, const ComplexMatrix& w_t);

/// Compares the closed-form derivative of B(x) = act(Re((x T W_t^T + b_t) T^-1)) with
/// respect to Re and Im of W_t(a, b) against central differences with the given step.
/// Returns the largest absolute deviation over both parts and all output coordinates.
double gradient_structure_check(const OrthogonalTransform& t, const ComplexMatrix& w_t, std::span<const Complex> b_t,
                                std::span<const double> x, std::size_t a, std::size_t b, Activation act,
                                double step = 1e-6);

}  // namespace duonet
