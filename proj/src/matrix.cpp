#include "duonet/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace duonet {

namespace {

bool finite(double v) { return std::isfinite(v); }
bool finite(const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

template <typename T>
void require_same_shape(const Matrix<T>& a, const Matrix<T>& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                         b.shape_string());
    }
}

template <typename T>
Matrix<T> matmul_impl(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: cannot multiply " + a.shape_string() + " by " + b.shape_string());
    }
    Matrix<T> out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

template <typename T, typename Op>
Matrix<T> elementwise(const Matrix<T>& a, const Matrix<T>& b, const char* name, Op op) {
    require_same_shape(a, b, name);
    Matrix<T> out(a.rows(), a.cols());
    auto da = a.data();
    auto db = b.data();
    auto dout = out.data();
    for (std::size_t i = 0; i < da.size(); ++i) dout[i] = op(da[i], db[i]);
    return out;
}

template <typename T, typename F>
Matrix<T> transposed(const Matrix<T>& a, F f) {
    Matrix<T> out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = f(a(i, j));
    return out;
}

template <typename X>
ComplexVector vecmat_impl(std::span<const X> x, const ComplexMatrix& m) {
    if (x.size() != m.rows()) {
        throw ShapeError("vecmat: vector of length " + std::to_string(x.size()) +
                         " cannot multiply " + m.shape_string());
    }
    ComplexVector out(m.cols());
    for (std::size_t k = 0; k < m.rows(); ++k) {
        const auto row = m.row_span(k);
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += x[k] * row[j];
    }
    return out;
}

template <typename T>
double max_abs_diff_impl(std::span<const T> a, std::span<const T> b) {
    if (a.size() != b.size()) throw ShapeError("max_abs_diff: length mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

template <typename T>
Matrix<T>::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) throw ShapeError("matrix dimensions must be >= 1, got " + shape_string());
    data_.assign(rows * cols, T{});
}

template <typename T>
Matrix<T>::Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) throw ShapeError("matrix dimensions must be >= 1, got " + shape_string());
    if (data_.size() != rows * cols) {
        throw ShapeError("matrix " + shape_string() + " needs " + std::to_string(rows * cols) +
                         " values, got " + std::to_string(data_.size()));
    }
    for (const auto& v : data_) {
        if (!finite(v)) throw NumericError("matrix " + shape_string() + " has a non-finite entry");
    }
}

template <typename T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
    Matrix<T> m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
}

template <typename T>
Matrix<T> Matrix<T>::row(std::span<const T> v) {
    return Matrix<T>(1, v.size(), std::vector<T>(v.begin(), v.end()));
}

template <typename T>
std::string Matrix<T>::shape_string() const {
    return "[" + std::to_string(rows_) + " x " + std::to_string(cols_) + "]";
}

template class Matrix<double>;
template class Matrix<Complex>;

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) { return matmul_impl(a, b); }
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul_impl(a, b); }

RealMatrix add(const RealMatrix& a, const RealMatrix& b) {
    return elementwise(a, b, "add", [](double x, double y) { return x + y; });
}
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
    return elementwise(a, b, "add", [](Complex x, Complex y) { return x + y; });
}

RealMatrix hadamard(const RealMatrix& a, const RealMatrix& b) {
    return elementwise(a, b, "hadamard", [](double x, double y) { return x * y; });
}
ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
    return elementwise(a, b, "hadamard", [](Complex x, Complex y) { return x * y; });
}

RealMatrix transpose(const RealMatrix& a) {
    return transposed(a, [](double v) { return v; });
}
ComplexMatrix transpose(const ComplexMatrix& a) {
    return transposed(a, [](Complex v) { return v; });
}
ComplexMatrix conj_transpose(const ComplexMatrix& a) {
    return transposed(a, [](Complex v) { return std::conj(v); });
}

ComplexMatrix scale(const ComplexMatrix& a, Complex s) {
    ComplexMatrix out = a;
    for (auto& v : out.data()) v *= s;
    return out;
}

ComplexMatrix embed_real(const RealMatrix& a) {
    ComplexMatrix out(a.rows(), a.cols());
    auto src = a.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = Complex(src[i], 0.0);
    return out;
}

RealMatrix project_real(const ComplexMatrix& a, double tol) {
    double worst = 0.0;
    RealMatrix out(a.rows(), a.cols());
    auto src = a.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        worst = std::max(worst, std::abs(src[i].imag()));
        dst[i] = src[i].real();
    }
    if (worst > tol) {
        throw NonRealError("project_real: imaginary residue " + std::to_string(worst) +
                               " exceeds tolerance",
                           worst);
    }
    return out;
}

ComplexVector vecmat(std::span<const Complex> x, const ComplexMatrix& m) { return vecmat_impl(x, m); }
ComplexVector vecmat(std::span<const double> x, const ComplexMatrix& m) { return vecmat_impl(x, m); }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    return max_abs_diff_impl(a.data(), b.data());
}
double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
    return max_abs_diff_impl(a, b);
}
double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    return max_abs_diff_impl(a, b);
}

}  // namespace duonet
