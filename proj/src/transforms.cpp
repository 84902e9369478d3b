#include "duonet/transforms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>

namespace duonet {

namespace {

constexpr double kUnitaryTol = 1e-10;

// exp(-2 pi i j / n) with the angle reduced modulo n first. Quarter turns are exact so
// the DC and Nyquist bins of a real signal carry no roundoff imaginary part.
Complex root_of_unity(std::size_t j, std::size_t n) {
    j %= n;
    if ((4 * j) % n == 0) {
        static constexpr Complex quarter[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
        return quarter[4 * j / n];
    }
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    return std::polar(1.0, angle);
}

// All n roots of unity, computed once per length and thread.
const ComplexVector& roots(std::size_t n) {
    thread_local std::map<std::size_t, ComplexVector> cache;
    auto [it, inserted] = cache.try_emplace(n);
    if (inserted) {
        it->second.resize(n);
        for (std::size_t j = 0; j < n; ++j) it->second[j] = root_of_unity(j, n);
    }
    return it->second;
}

// Weight of bin k when folding the half spectrum back into a length-n signal.
double fold_weight(std::size_t k, std::size_t n) {
    if (k == 0) return 1.0;
    if (n % 2 == 0 && k == n / 2) return 1.0;
    return 2.0;
}

void require_nonempty(std::size_t n, const char* op) {
    if (n == 0) throw ShapeError(std::string(op) + ": empty input");
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

void fft_inplace(std::span<Complex> a) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n)) throw ShapeError("fft_inplace: length " + std::to_string(n) + " is not a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const ComplexVector& twiddle = roots(n);

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const Complex u = a[start + k];
                const Complex v = a[start + k + half] * twiddle[k * stride];
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
    }
}

Spectrum rfft(std::span<const double> x) {
    const std::size_t n = x.size();
    require_nonempty(n, "rfft");
    const std::size_t nb = rfft_bins(n);
    Spectrum out{ComplexVector(nb), n};

    if (is_power_of_two(n)) {
        ComplexVector buf(x.begin(), x.end());
        fft_inplace(buf);
        std::copy_n(buf.begin(), nb, out.bins.begin());
        return out;
    }

    const ComplexVector& w = roots(n);
    for (std::size_t k = 0; k < nb; ++k) {
        Complex acc{};
        for (std::size_t j = 0; j < n; ++j) acc += x[j] * w[(j * k) % n];
        out.bins[k] = acc;
    }
    return out;
}

RealVector irfft(const Spectrum& s) {
    const std::size_t n = s.origin_len;
    require_nonempty(n, "irfft");
    if (s.bins.size() != rfft_bins(n)) {
        throw ShapeError("irfft: " + std::to_string(s.bins.size()) + " bins inconsistent with length " +
                         std::to_string(n));
    }
    RealVector y(n);
    const double inv_n = 1.0 / static_cast<double>(n);

    if (n == 1) {
        y[0] = s.bins[0].real();
        return y;
    }

    if (is_power_of_two(n)) {
        // Hermitian extension, then inverse FFT via conjugation.
        ComplexVector full(n);
        full[0] = s.bins[0].real();
        full[n / 2] = s.bins[n / 2].real();
        for (std::size_t k = 1; k < n / 2; ++k) {
            full[k] = std::conj(s.bins[k]);
            full[n - k] = s.bins[k];
        }
        fft_inplace(full);
        for (std::size_t j = 0; j < n; ++j) y[j] = full[j].real() * inv_n;
        return y;
    }

    const ComplexVector& w = roots(n);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < s.bins.size(); ++k) {
            acc += fold_weight(k, n) * (s.bins[k] * std::conj(w[(j * k) % n])).real();
        }
        y[j] = acc * inv_n;
    }
    return y;
}

ComplexMatrix dft_matrix(std::size_t n, DftNormalization norm) {
    require_nonempty(n, "dft_matrix");
    const double c = norm == DftNormalization::unitary ? 1.0 / std::sqrt(static_cast<double>(n)) : 1.0;
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k) m(r, k) = c * root_of_unity(r * k, n);
    return m;
}

ComplexMatrix hadamard_matrix(std::size_t n) {
    if (!is_power_of_two(n)) throw ShapeError("hadamard_matrix: size " + std::to_string(n) + " is not a power of two");
    const double c = 1.0 / std::sqrt(static_cast<double>(n));
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k) m(r, k) = (std::popcount(r & k) % 2 ? -c : c);
    return m;
}

std::string_view to_string(TransformKind kind) {
    switch (kind) {
        case TransformKind::rfft: return "rfft";
        case TransformKind::identity: return "identity";
        case TransformKind::hadamard: return "hadamard";
        case TransformKind::dft: return "dft";
    }
    return "?";
}

TransformKind parse_transform_kind(std::string_view name) {
    for (auto k : {TransformKind::rfft, TransformKind::identity, TransformKind::hadamard, TransformKind::dft}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown transform kind '" + std::string(name) + "'");
}

double identity_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
    const ComplexMatrix p = matmul(a, b);
    if (p.rows() != p.cols()) throw ShapeError("identity_residual: product is not square");
    return max_abs_diff(p, ComplexMatrix::identity(p.rows()));
}

OrthogonalTransform OrthogonalTransform::rfft(std::size_t n) {
    require_nonempty(n, "OrthogonalTransform::rfft");
    return OrthogonalTransform(n, std::nullopt, std::nullopt);
}

OrthogonalTransform OrthogonalTransform::unitary(ComplexMatrix t) {
    if (t.rows() != t.cols()) throw ShapeError("unitary transform needs a square matrix, got " + t.shape_string());
    ComplexMatrix t_inv = conj_transpose(t);
    const double residual = identity_residual(t, t_inv);
    if (!(residual < kUnitaryTol)) {
        throw ShapeError("transform matrix is not unitary: ||T T^H - I|| = " + std::to_string(residual));
    }
    const std::size_t n = t.rows();
    return OrthogonalTransform(n, std::move(t), std::move(t_inv));
}

OrthogonalTransform OrthogonalTransform::with_inverse(ComplexMatrix t, ComplexMatrix t_inv) {
    if (t.rows() != t.cols() || t_inv.rows() != t.rows() || t_inv.cols() != t.cols()) {
        throw ShapeError("transform pair shapes " + t.shape_string() + " and " + t_inv.shape_string() +
                         " are not square and equal");
    }
    const double residual = identity_residual(t, t_inv);
    if (!(residual < kUnitaryTol)) {
        throw ShapeError("transform pair is not inverse: ||T T_inv - I|| = " + std::to_string(residual));
    }
    const std::size_t n = t.rows();
    return OrthogonalTransform(n, std::move(t), std::move(t_inv));
}

OrthogonalTransform OrthogonalTransform::make(TransformKind kind, std::size_t n) {
    switch (kind) {
        case TransformKind::rfft: return rfft(n);
        case TransformKind::identity: return unitary(ComplexMatrix::identity(n));
        case TransformKind::hadamard: return unitary(hadamard_matrix(n));
        case TransformKind::dft: return unitary(dft_matrix(n, DftNormalization::unitary));
    }
    throw ConfigError("unknown transform kind");
}

const ComplexMatrix& OrthogonalTransform::matrix() const {
    if (!matrix_) throw ConfigError("rfft transform has no explicit matrix");
    return *matrix_;
}

const ComplexMatrix& OrthogonalTransform::inverse_matrix() const {
    if (!inverse_) throw ConfigError("rfft transform has no explicit matrix");
    return *inverse_;
}

ComplexVector OrthogonalTransform::apply(std::span<const double> x) const {
    if (x.size() != size_) {
        throw ShapeError("transform of size " + std::to_string(size_) + " applied to length " + std::to_string(x.size()));
    }
    if (is_explicit()) return vecmat(x, *matrix_);
    return duonet::rfft(x).bins;
}

ComplexVector OrthogonalTransform::apply(std::span<const Complex> x) const {
    if (!is_explicit()) throw ConfigError("rfft transform accepts real input only");
    if (x.size() != size_) {
        throw ShapeError("transform of size " + std::to_string(size_) + " applied to length " + std::to_string(x.size()));
    }
    return vecmat(x, *matrix_);
}

ComplexVector OrthogonalTransform::apply_inverse(std::span<const Complex> z) const {
    if (z.size() != bins()) {
        throw ShapeError("inverse transform expects " + std::to_string(bins()) + " bins, got " + std::to_string(z.size()));
    }
    if (is_explicit()) return vecmat(z, *inverse_);
    const RealVector y = irfft(Spectrum{ComplexVector(z.begin(), z.end()), size_});
    return ComplexVector(y.begin(), y.end());
}

RealVector OrthogonalTransform::apply_inverse_real(std::span<const Complex> z) const {
    if (z.size() != bins()) {
        throw ShapeError("inverse transform expects " + std::to_string(bins()) + " bins, got " + std::to_string(z.size()));
    }
    if (!is_explicit()) return irfft(Spectrum{ComplexVector(z.begin(), z.end()), size_});
    const ComplexVector y = vecmat(z, *inverse_);
    RealVector out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i].real();
    return out;
}

ComplexVector OrthogonalTransform::inverse_real_adjoint(std::span<const double> grad_out) const {
    if (grad_out.size() != size_) {
        throw ShapeError("inverse adjoint expects length " + std::to_string(size_) + ", got " +
                         std::to_string(grad_out.size()));
    }
    if (is_explicit()) {
        // h_n = Re(sum_k z_k Tinv_kn)  =>  dL/dz_k = sum_n g_n conj(Tinv_kn)
        const ComplexMatrix& inv = *inverse_;
        ComplexVector g(inv.rows());
        for (std::size_t k = 0; k < inv.rows(); ++k) {
            const auto row = inv.row_span(k);
            Complex acc{};
            for (std::size_t j = 0; j < row.size(); ++j) acc += grad_out[j] * std::conj(row[j]);
            g[k] = acc;
        }
        return g;
    }
    // h_n = (1/N) sum_k c_k Re(z_k e^{2 pi i n k / N})  =>  dL/dz_k = (c_k / N) X_k(g)
    ComplexVector g = duonet::rfft(grad_out).bins;
    const double inv_n = 1.0 / static_cast<double>(size_);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] *= fold_weight(k, size_) * inv_n;
    g[0].imag(0.0);
    if (size_ % 2 == 0) g[size_ / 2].imag(0.0);
    return g;
}

RealVector OrthogonalTransform::forward_adjoint(std::span<const Complex> grad_bins) const {
    if (grad_bins.size() != bins()) {
        throw ShapeError("forward adjoint expects " + std::to_string(bins()) + " bins, got " +
                         std::to_string(grad_bins.size()));
    }
    if (is_explicit()) {
        // X_k = sum_n x_n T_nk  =>  dL/dx_n = Re(sum_k G_k conj(T_nk))
        const ComplexMatrix& t = *matrix_;
        RealVector dx(size_);
        for (std::size_t j = 0; j < size_; ++j) {
            const auto row = t.row_span(j);
            Complex acc{};
            for (std::size_t k = 0; k < row.size(); ++k) acc += grad_bins[k] * std::conj(row[k]);
            dx[j] = acc.real();
        }
        return dx;
    }
    // dL/dx_n = sum_k Re(G_k e^{2 pi i n k / N}), an irfft with the fold weights undone.
    Spectrum s{ComplexVector(grad_bins.begin(), grad_bins.end()), size_};
    const double n = static_cast<double>(size_);
    for (std::size_t k = 0; k < s.bins.size(); ++k) s.bins[k] *= n / fold_weight(k, size_);
    return irfft(s);
}

}  // namespace duonet
