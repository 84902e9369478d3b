#include "duonet/matrix.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "duonet/error.hpp"

namespace duonet {
namespace {

TEST(Matrix, ZeroFilledAndIndexedRowMajor) {
    RealMatrix m(2, 3);
    EXPECT_EQ(m.rows(), 2u);
    EXPECT_EQ(m.cols(), 3u);
    for (double v : m.data()) EXPECT_EQ(v, 0.0);
    m(1, 2) = 5.0;
    EXPECT_EQ(m.data()[5], 5.0);
    EXPECT_EQ(m.shape_string(), "[2 x 3]");
}

TEST(Matrix, RejectsBadConstruction) {
    EXPECT_THROW(RealMatrix(0, 3), ShapeError);
    EXPECT_THROW(RealMatrix(2, 2, {1.0, 2.0, 3.0}), ShapeError);
    EXPECT_THROW(RealMatrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}), NumericError);
    EXPECT_THROW(RealMatrix(1, 1, {std::numeric_limits<double>::infinity()}), NumericError);
}

TEST(Matrix, MatmulKnownProduct) {
    const RealMatrix a(2, 2, {1, 2, 3, 4});
    const RealMatrix b(2, 2, {5, 6, 7, 8});
    EXPECT_EQ(matmul(a, b), RealMatrix(2, 2, {19, 22, 43, 50}));
    EXPECT_THROW(matmul(a, RealMatrix(3, 1)), ShapeError);
}

TEST(Matrix, AddAndHadamardRequireMatchingShapes) {
    const RealMatrix a(1, 2, {1, 2});
    const RealMatrix b(1, 2, {3, 4});
    EXPECT_EQ(add(a, b), RealMatrix(1, 2, {4, 6}));
    EXPECT_EQ(hadamard(a, b), RealMatrix(1, 2, {3, 8}));
    EXPECT_THROW(add(a, RealMatrix(2, 1)), ShapeError);
    EXPECT_THROW(hadamard(a, RealMatrix(2, 1)), ShapeError);
}

TEST(Matrix, TransposeAndConjugateTranspose) {
    const ComplexMatrix a(1, 2, {Complex(1, 2), Complex(3, -4)});
    const ComplexMatrix t = transpose(a);
    const ComplexMatrix h = conj_transpose(a);
    ASSERT_EQ(t.rows(), 2u);
    EXPECT_EQ(t(1, 0), Complex(3, -4));
    EXPECT_EQ(h(1, 0), Complex(3, 4));
    EXPECT_EQ(transpose(transpose(a)), a);
}

TEST(Matrix, IdentityIsNeutralForMatmul) {
    const ComplexMatrix a(2, 2, {Complex(1, 1), 2.0, 3.0, Complex(0, -1)});
    EXPECT_EQ(matmul(a, ComplexMatrix::identity(2)), a);
    EXPECT_EQ(matmul(ComplexMatrix::identity(2), a), a);
}

TEST(Matrix, ProjectRealChecksImaginaryResidue) {
    const ComplexMatrix small(1, 2, {Complex(1.0, 1e-14), Complex(-2.0, 0.0)});
    EXPECT_EQ(project_real(small, 1e-12), RealMatrix(1, 2, {1.0, -2.0}));
    const ComplexMatrix big(1, 1, {Complex(1.0, 1e-3)});
    try {
        project_real(big, 1e-12);
        FAIL() << "expected NonRealError";
    } catch (const NonRealError& e) {
        EXPECT_DOUBLE_EQ(e.max_imag(), 1e-3);
    }
}

TEST(Matrix, EmbedRealThenProjectRoundTrips) {
    const RealMatrix a(2, 2, {1.5, -2, 0, 7});
    EXPECT_EQ(project_real(embed_real(a), 0.0), a);
}

TEST(Matrix, VecmatMatchesRowMatrixProduct) {
    const ComplexMatrix m(2, 3, {1, 2, 3, Complex(0, 1), 0, -1});
    const ComplexVector x{Complex(1, 1), 2.0};
    const ComplexVector y = vecmat(x, m);
    const ComplexMatrix ref = matmul(ComplexMatrix::row(x), m);
    ASSERT_EQ(y.size(), 3u);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(y[j], ref(0, j));
    const RealVector xr{1.0, 2.0};
    EXPECT_THROW(vecmat(RealVector{1.0}, m), ShapeError);
    EXPECT_EQ(vecmat(xr, m)[2], Complex(1.0, 0.0));
}

TEST(Matrix, MaxAbsDiff) {
    const ComplexMatrix a(1, 2, {Complex(1, 0), Complex(0, 1)});
    const ComplexMatrix b(1, 2, {Complex(1, 0), Complex(0, 3)});
    EXPECT_DOUBLE_EQ(max_abs_diff(a, b), 2.0);
    EXPECT_THROW(max_abs_diff(a, ComplexMatrix(2, 1)), ShapeError);
}

}  // namespace
}  // namespace duonet
