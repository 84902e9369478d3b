#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "duonet/matrix.hpp"

namespace duonet {

/// Non-negative-frequency half of the DFT of a real sequence of length origin_len.
struct Spectrum {
    ComplexVector bins;  // floor(origin_len / 2) + 1 entries
    std::size_t origin_len = 0;
};

inline std::size_t rfft_bins(std::size_t n) { return n / 2 + 1; }

/// X_k = sum_n x_n exp(-2 pi i n k / N) for k = 0 .. N/2. Radix-2 for powers of two,
/// direct summation otherwise.
Spectrum rfft(std::span<const double> x);

/// Inverse of rfft with the 1/N factor. Imaginary parts of the DC bin and, for even
/// lengths, the Nyquist bin are discarded.
RealVector irfft(const Spectrum& s);

/// In-place complex FFT (forward sign) for power-of-two lengths.
void fft_inplace(std::span<Complex> a);

bool is_power_of_two(std::size_t n) noexcept;

enum class DftNormalization { unitary, forward_unnormalized };

/// Entry (n, k) = c * omega^(n k), omega = exp(-2 pi i / N), c = 1/sqrt(N) or 1.
ComplexMatrix dft_matrix(std::size_t n, DftNormalization norm);

/// Sylvester-Hadamard matrix scaled to be orthonormal. n must be a power of two.
ComplexMatrix hadamard_matrix(std::size_t n);

/// Transform families a network block can be configured with.
enum class TransformKind { rfft, identity, hadamard, dft };

std::string_view to_string(TransformKind kind);
TransformKind parse_transform_kind(std::string_view name);

/// Forward/inverse transform pair acting on row vectors.
///
/// The rfft kind maps a real vector of length N to floor(N/2)+1 bins. Explicit kinds
/// hold a transition matrix T (columns are the basis vectors) and its inverse and map
/// x to x * T. Real-valued output of the inverse is obtained by Hermitian projection
/// (rfft) or by taking the real part (explicit).
class OrthogonalTransform {
public:
    static OrthogonalTransform rfft(std::size_t n);

    /// Explicit transform with T^-1 = T^H. Throws ShapeError unless T is square and
    /// ||T T^H - I||_inf < 1e-10.
    static OrthogonalTransform unitary(ComplexMatrix t);

    /// Explicit transform with a caller-supplied inverse, e.g. the unnormalized DFT
    /// paired with T^H / N. Throws ShapeError unless ||T T_inv - I||_inf < 1e-10.
    static OrthogonalTransform with_inverse(ComplexMatrix t, ComplexMatrix t_inv);

    static OrthogonalTransform make(TransformKind kind, std::size_t n);

    bool is_explicit() const noexcept { return matrix_.has_value(); }
    std::size_t size() const noexcept { return size_; }
    /// Length of the transformed representation.
    std::size_t bins() const noexcept { return is_explicit() ? size_ : rfft_bins(size_); }

    /// Transition matrix T; explicit kinds only.
    const ComplexMatrix& matrix() const;
    const ComplexMatrix& inverse_matrix() const;

    ComplexVector apply(std::span<const double> x) const;
    /// Complex input is only meaningful for explicit kinds.
    ComplexVector apply(std::span<const Complex> x) const;
    ComplexVector apply_inverse(std::span<const Complex> z) const;

    /// Real-valued inverse used by the network's transform branch.
    RealVector apply_inverse_real(std::span<const Complex> z) const;

    /// Adjoint of apply_inverse_real: given dL/dh for h = apply_inverse_real(z), returns
    /// dL/dRe(z) + i dL/dIm(z). Components the projection ignores get exactly zero.
    ComplexVector inverse_real_adjoint(std::span<const double> grad_out) const;

    /// Adjoint of apply on real input: given dL/dRe(X) + i dL/dIm(X) for X = apply(x),
    /// returns dL/dx.
    RealVector forward_adjoint(std::span<const Complex> grad_bins) const;

private:
    OrthogonalTransform(std::size_t n, std::optional<ComplexMatrix> t, std::optional<ComplexMatrix> t_inv)
        : size_(n), matrix_(std::move(t)), inverse_(std::move(t_inv)) {}

    std::size_t size_;
    std::optional<ComplexMatrix> matrix_;
    std::optional<ComplexMatrix> inverse_;
};

/// ||a b - I||_inf for square products.
double identity_residual(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace duonet
