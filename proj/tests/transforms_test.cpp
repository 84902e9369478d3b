#include "duonet/transforms.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "duonet/error.hpp"
#include "duonet/rng.hpp"
#include "oracles.hpp"

namespace duonet {
namespace {

RealVector random_vector(std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed, 7);
    RealVector x(n);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    return x;
}

TEST(Rfft, FrozenFourPointExample) {
    const Spectrum s = rfft(RealVector{0.0, 1.0, 0.0, -1.0});
    ASSERT_EQ(s.bins.size(), 3u);
    EXPECT_NEAR(std::abs(s.bins[0]), 0.0, 1e-15);
    EXPECT_NEAR(s.bins[1].real(), 0.0, 1e-15);
    EXPECT_NEAR(s.bins[1].imag(), -2.0, 1e-15);
    EXPECT_NEAR(std::abs(s.bins[2]), 0.0, 1e-15);
}

TEST(Rfft, BinCountIsHalfPlusOne) {
    for (std::size_t n = 1; n <= 17; ++n) {
        EXPECT_EQ(rfft(RealVector(n, 1.0)).bins.size(), n / 2 + 1) << n;
        EXPECT_EQ(rfft_bins(n), n / 2 + 1);
    }
}

TEST(Rfft, RejectsEmptyInput) { EXPECT_THROW(rfft(RealVector{}), ShapeError); }

TEST(Rfft, MatchesNaiveDftForAllSmallLengths) {
    for (std::size_t n = 1; n <= 64; ++n) {
        const RealVector x = random_vector(n, n);
        const Spectrum s = rfft(x);
        const auto ref = oracle::naive_dft(x);
        for (std::size_t k = 0; k < s.bins.size(); ++k) EXPECT_NEAR(std::abs(s.bins[k] - ref[k]), 0.0, 1e-9) << n;
    }
}

TEST(Rfft, RoundTripIsIdentity) {
    for (std::size_t n = 1; n <= 64; ++n) {
        const RealVector x = random_vector(n, 100 + n);
        const RealVector back = irfft(rfft(x));
        ASSERT_EQ(back.size(), n);
        EXPECT_LT(max_abs_diff(x, back), 1e-10) << n;
    }
}

TEST(Rfft, InverseDropsImaginaryDcAndNyquist) {
    for (std::size_t n : {6u, 7u}) {
        Spectrum s = rfft(random_vector(n, 3));
        const RealVector clean = irfft(s);
        s.bins.front() += Complex(0.0, 0.75);
        if (n % 2 == 0) s.bins.back() += Complex(0.0, -1.25);
        EXPECT_LT(max_abs_diff(clean, irfft(s)), 1e-12);
    }
}

TEST(Rfft, InverseOfArbitraryBinsMatchesHermitianOracle) {
    CounterRng rng(5, 1);
    for (std::size_t n = 1; n <= 20; ++n) {
        Spectrum s{ComplexVector(rfft_bins(n)), n};
        for (Complex& c : s.bins) c = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const RealVector got = irfft(s);
        const auto ref = oracle::naive_irfft(std::vector<Complex>(s.bins.begin(), s.bins.end()), n);
        EXPECT_LT(max_abs_diff(got, ref), 1e-12) << n;
    }
}

TEST(Rfft, Linearity) {
    const RealVector a = random_vector(12, 1), b = random_vector(12, 2);
    RealVector sum(12);
    for (std::size_t i = 0; i < 12; ++i) sum[i] = 2.0 * a[i] - 3.0 * b[i];
    const auto sa = rfft(a).bins, sb = rfft(b).bins, ss = rfft(sum).bins;
    for (std::size_t k = 0; k < ss.size(); ++k) EXPECT_NEAR(std::abs(ss[k] - (2.0 * sa[k] - 3.0 * sb[k])), 0.0, 1e-12);
}

TEST(FftInplace, RejectsNonPowerOfTwo) {
    ComplexVector a(6);
    EXPECT_THROW(fft_inplace(a), ShapeError);
}

TEST(DftMatrix, NormalizationsAndUnitarity) {
    for (std::size_t n : {1u, 2u, 5u, 8u}) {
        const ComplexMatrix u = dft_matrix(n, DftNormalization::unitary);
        const ComplexMatrix f = dft_matrix(n, DftNormalization::forward_unnormalized);
        EXPECT_LT(identity_residual(u, conj_transpose(u)), 1e-12);
        EXPECT_NEAR(std::abs(f(1 % n, 1 % n) / u(1 % n, 1 % n)), std::sqrt(static_cast<double>(n)), 1e-12);
    }
}

TEST(DftMatrix, RowVectorProductMatchesNaiveDft) {
    const RealVector x = random_vector(9, 4);
    const ComplexVector got = vecmat(x, dft_matrix(9, DftNormalization::forward_unnormalized));
    const auto ref = oracle::naive_dft(x);
    for (std::size_t k = 0; k < 9; ++k) EXPECT_NEAR(std::abs(got[k] - ref[k]), 0.0, 1e-12);
}

TEST(Hadamard, OrthonormalSymmetricAndSignPattern) {
    for (std::size_t n : {1u, 2u, 4u, 16u}) {
        const ComplexMatrix h = hadamard_matrix(n);
        EXPECT_LT(identity_residual(h, conj_transpose(h)), 1e-12);
        EXPECT_EQ(h, transpose(h));
        const double mag = 1.0 / std::sqrt(static_cast<double>(n));
        for (const Complex& v : h.data()) {
            EXPECT_NEAR(std::abs(v.real()), mag, 1e-15);
            EXPECT_EQ(v.imag(), 0.0);
        }
    }
    EXPECT_THROW(hadamard_matrix(6), ShapeError);
}

TEST(TransformKind, NamesRoundTrip) {
    for (TransformKind k : {TransformKind::rfft, TransformKind::identity, TransformKind::hadamard, TransformKind::dft}) {
        EXPECT_EQ(parse_transform_kind(to_string(k)), k);
    }
    EXPECT_THROW(parse_transform_kind("wavelet"), ConfigError);
}

TEST(OrthogonalTransform, UnitaryRejectsNonUnitary) {
    ComplexMatrix t = ComplexMatrix::identity(3);
    t(0, 0) = 2.0;
    EXPECT_THROW(OrthogonalTransform::unitary(t), ShapeError);
    EXPECT_THROW(OrthogonalTransform::unitary(ComplexMatrix(2, 3)), ShapeError);
    EXPECT_THROW(OrthogonalTransform::with_inverse(ComplexMatrix::identity(2), t), ShapeError);
}

TEST(OrthogonalTransform, RfftKindHasNoMatrix) {
    const auto t = OrthogonalTransform::make(TransformKind::rfft, 8);
    EXPECT_FALSE(t.is_explicit());
    EXPECT_EQ(t.bins(), 5u);
    EXPECT_THROW(t.matrix(), ConfigError);
}

TEST(OrthogonalTransform, ApplyThenInverseIsIdentityForEveryKind) {
    for (TransformKind k : {TransformKind::rfft, TransformKind::identity, TransformKind::hadamard, TransformKind::dft}) {
        const auto t = OrthogonalTransform::make(k, 8);
        const RealVector x = random_vector(8, 11);
        EXPECT_LT(max_abs_diff(x, t.apply_inverse_real(t.apply(x))), 1e-12) << to_string(k);
    }
}

TEST(OrthogonalTransform, UnnormalizedDftWithExplicitInverse) {
    const std::size_t n = 6;
    const ComplexMatrix f = dft_matrix(n, DftNormalization::forward_unnormalized);
    const auto t = OrthogonalTransform::with_inverse(f, scale(conj_transpose(f), 1.0 / static_cast<double>(n)));
    const RealVector x = random_vector(n, 12);
    EXPECT_LT(max_abs_diff(x, t.apply_inverse_real(t.apply(x))), 1e-12);
}

// <adjoint(g), z> must equal <g, inverse_real(z)> under the real inner product that
// treats a complex entry as a (re, im) pair.
double real_inner(std::span<const Complex> a, std::span<const Complex> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return acc;
}

double real_inner(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

TEST(OrthogonalTransform, AdjointIdentities) {
    CounterRng rng(21, 1);
    for (TransformKind k : {TransformKind::rfft, TransformKind::identity, TransformKind::hadamard, TransformKind::dft}) {
        for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 8u}) {
            if (k == TransformKind::hadamard && !is_power_of_two(n)) continue;
            const auto t = OrthogonalTransform::make(k, n);
            ComplexVector z(t.bins());
            for (Complex& c : z) c = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
            RealVector g(n);
            for (double& v : g) v = rng.uniform(-1, 1);
            const double lhs = real_inner(t.inverse_real_adjoint(g), z);
            const double rhs = real_inner(g, t.apply_inverse_real(z));
            EXPECT_NEAR(lhs, rhs, 1e-12) << to_string(k) << " n=" << n;

            ComplexVector gb(t.bins());
            for (Complex& c : gb) c = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
            const RealVector x = random_vector(n, n);
            EXPECT_NEAR(real_inner(t.forward_adjoint(gb), x), real_inner(gb, t.apply(x)), 1e-12) << to_string(k);
        }
    }
}

TEST(OrthogonalTransform, RfftAdjointZeroesIgnoredImaginaryParts) {
    for (std::size_t n : {4u, 5u}) {
        const auto t = OrthogonalTransform::rfft(n);
        const ComplexVector g = t.inverse_real_adjoint(random_vector(n, 8));
        EXPECT_EQ(g.front().imag(), 0.0);
        if (n % 2 == 0) {
            EXPECT_EQ(g.back().imag(), 0.0);
        }
    }
}

}  // namespace
}  // namespace duonet
