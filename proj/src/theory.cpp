#include "duonet/theory.hpp"

#include <algorithm>
#include <cmath>

namespace duonet {

namespace {

void require_square_branch(const OrthogonalTransform& t, const ComplexMatrix& w_t, std::span<const Complex> b_t) {
    if (!t.is_explicit()) throw ConfigError("transition-matrix analysis needs an explicit transform");
    const std::size_t n = t.size();
    if (w_t.rows() != n || w_t.cols() != n) {
        throw ShapeError("branch weights " + w_t.shape_string() + " are not square of size " + std::to_string(n));
    }
    if (b_t.size() != n) throw ShapeError("branch bias length " + std::to_string(b_t.size()) + " != " + std::to_string(n));
}

void require_index(const OrthogonalTransform& t, std::size_t a, std::size_t b) {
    if (!t.is_explicit()) throw ConfigError("transition-matrix analysis needs an explicit transform");
    if (a >= t.size() || b >= t.size()) {
        throw ShapeError("index (" + std::to_string(a) + ", " + std::to_string(b) + ") out of range for size " +
                         std::to_string(t.size()));
    }
}

RealVector branch_output(const OrthogonalTransform& t, const ComplexMatrix& w_t, std::span<const Complex> b_t,
                         std::span<const double> x, Activation act) {
    const ComplexVector z = branch_linear(t, w_t, b_t, x);
    RealVector out(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) out[j] = activate(act, z[j].real());
    return out;
}

}  // namespace

DenseEquivalent dense_equivalent(const OrthogonalTransform& t, const ComplexMatrix& w_t, std::span<const Complex> b_t) {
    require_square_branch(t, w_t, b_t);
    const double residual = identity_residual(t.matrix(), conj_transpose(t.matrix()));
    if (!(residual < 1e-10)) {
        throw ShapeError("dense equivalent needs a unitary transform (||T T^H - I|| = " + std::to_string(residual) + ")");
    }
    const ComplexMatrix& tm = t.matrix();
    const ComplexMatrix& ti = t.inverse_matrix();
    DenseEquivalent d{matmul(matmul(tm, transpose(w_t)), ti), vecmat(b_t, ti)};
    return d;
}

ComplexVector branch_linear(const OrthogonalTransform& t, const ComplexMatrix& w_t, std::span<const Complex> b_t,
                            std::span<const double> x) {
    require_square_branch(t, w_t, b_t);
    const ComplexVector bins = t.apply(x);
    ComplexVector z(b_t.begin(), b_t.end());
    for (std::size_t p = 0; p < w_t.rows(); ++p) {
        const auto row = w_t.row_span(p);
        for (std::size_t q = 0; q < row.size(); ++q) z[p] += row[q] * bins[q];
    }
    return t.apply_inverse(z);
}

ComplexVector dense_linear(const DenseEquivalent& d, std::span<const double> x) {
    ComplexVector out = vecmat(x, d.w_f);
    if (out.size() != d.b_f.size()) throw ShapeError("dense equivalent bias length mismatch");
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += d.b_f[j];
    return out;
}

ComplexMatrix h_ab_matrix(const OrthogonalTransform& t, std::size_t a, std::size_t b) {
    require_index(t, a, b);
    const ComplexMatrix& tm = t.matrix();
    const ComplexMatrix& ti = t.inverse_matrix();
    const std::size_t n = t.size();
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = std::conj(ti(a, i)) * tm(j, b);
    return h;
}

ComplexMatrix derivative_matrix(const OrthogonalTransform& t, std::size_t a, std::size_t b) {
    require_index(t, a, b);
    const ComplexMatrix& tm = t.matrix();
    const ComplexMatrix& ti = t.inverse_matrix();
    const std::size_t n = t.size();
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = tm(i, b) * ti(a, j);
    return m;
}

ComplexVector gradient_factor(const OrthogonalTransform& t, std::span<const double> x, std::size_t a, std::size_t b) {
    return vecmat(x, derivative_matrix(t, a, b));
}

ComplexMatrix sum_structure(const OrthogonalTransform& t, const ComplexMatrix& w_t) {
    require_square_branch(t, w_t, ComplexVector(t.size()));
    const std::size_t n = t.size();
    ComplexMatrix acc(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) acc = add(acc, scale(derivative_matrix(t, a, b), w_t(a, b)));
    return acc;
}

ComplexMatrix sum_structure_h(const OrthogonalTransform& t, const ComplexMatrix& w_t) {
    require_square_branch(t, w_t, ComplexVector(t.size()));
    const std::size_t n = t.size();
    ComplexMatrix acc(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) acc = add(acc, scale(transpose(h_ab_matrix(t, a, b)), w_t(a, b)));
    return acc;
}

double gradient_structure_check(const OrthogonalTransform& t, const ComplexMatrix& w_t, std::span<const Complex> b_t,
                                std::span<const double> x, std::size_t a, std::size_t b, Activation act, double step) {
    require_square_branch(t, w_t, b_t);
    require_index(t, a, b);

    const ComplexVector z = branch_linear(t, w_t, b_t, x);
    const ComplexVector factor = gradient_factor(t, x, a, b);

    double worst = 0.0;
    ComplexMatrix probe = w_t;
    for (const Complex dir : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
        probe(a, b) = w_t(a, b) + step * dir;
        const RealVector up = branch_output(t, probe, b_t, x, act);
        probe(a, b) = w_t(a, b) - step * dir;
        const RealVector down = branch_output(t, probe, b_t, x, act);
        probe(a, b) = w_t(a, b);
        for (std::size_t j = 0; j < z.size(); ++j) {
            const double analytic = (dir * factor[j]).real() * activate_derivative(act, z[j].real());
            const double numeric = (up[j] - down[j]) / (2.0 * step);
            worst = std::max(worst, std::abs(analytic - numeric));
        }
    }
    return worst;
}

}  // namespace duonet
