#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "duonet/error.hpp"

namespace duonet {

using Complex = std::complex<double>;
using RealVector = std::vector<double>;
using ComplexVector = std::vector<Complex>;

/// Dense row-major matrix with at least one row and one column.
///
/// Vectors are treated as rows throughout the library, so a linear layer is
/// written x * W^T + b with x of shape [1 x n].
template <typename T>
class Matrix {
public:
    using value_type = T;

    /// Zero-filled matrix.
    Matrix(std::size_t rows, std::size_t cols);

    /// Takes ownership of row-major data. Entries must be finite.
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data);

    static Matrix identity(std::size_t n);

    /// Single-row matrix holding a copy of v.
    static Matrix row(std::span<const T> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }
    std::span<const T> row_span(std::size_t r) const noexcept {
        return std::span<const T>(data_).subspan(r * cols_, cols_);
    }

    std::string shape_string() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;

extern template class Matrix<double>;
extern template class Matrix<Complex>;

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

RealMatrix add(const RealMatrix& a, const RealMatrix& b);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);

RealMatrix hadamard(const RealMatrix& a, const RealMatrix& b);
ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);

RealMatrix transpose(const RealMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);
ComplexMatrix conj_transpose(const ComplexMatrix& a);

ComplexMatrix scale(const ComplexMatrix& a, Complex s);

ComplexMatrix embed_real(const RealMatrix& a);

/// Drops imaginary parts; throws NonRealError if any |im| exceeds tol.
RealMatrix project_real(const ComplexMatrix& a, double tol);

/// Row vector times matrix: x * m.
ComplexVector vecmat(std::span<const Complex> x, const ComplexMatrix& m);
ComplexVector vecmat(std::span<const double> x, const ComplexMatrix& m);

/// Largest |a_ij - b_ij|; shapes must match.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace duonet
