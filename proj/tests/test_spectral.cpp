#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "fwn/rng.hpp"
#include "fwn/spectral.hpp"

using namespace fwn;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.normal();
    }
    return m;
}

// Brute-force oracle: evaluates the definitions with plain nested loops and
// explicit exponentials, independent of the FFT path under test.
CVector oracle_fdft(const Matrix& x, Eigen::Index k) {
    const Eigen::Index t_len = x.rows();
    const double omega = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(t_len);
    CVector out = CVector::Zero(x.cols());
    for (Eigen::Index t = 0; t < t_len; ++t) {
        const Complex w = std::exp(Complex(0.0, -omega * static_cast<double>(t)));
        for (Eigen::Index j = 0; j < x.cols(); ++j) out[j] += x(t, j) * w;
    }
    return out / std::sqrt(2.0 * M_PI * static_cast<double>(t_len));
}

struct OracleS {
    CMatrix s1;
    CMatrix s2;
};

OracleS oracle_s_statistics(const Matrix& x) {
    const Eigen::Index t_len = x.rows();
    const Eigen::Index g = x.cols();
    const Eigen::Index m = t_len / 2;
    OracleS out{CMatrix::Zero(g, g), CMatrix::Zero(g, g)};
    for (Eigen::Index k = 1; k <= m; ++k) {
        const CVector v = oracle_fdft(x, k);
        const CVector w = oracle_fdft(x, k - 1);
        for (Eigen::Index a = 0; a < g; ++a) {
            for (Eigen::Index b = 0; b < g; ++b) {
                const Complex pk = v[a] * std::conj(v[b]);
                out.s1(a, b) += pk + std::conj(pk);
                if (k >= 2) {
                    const Complex pk1 = w[a] * std::conj(w[b]);
                    out.s2(a, b) += pk * std::conj(pk1);
                }
            }
        }
    }
    out.s1 /= static_cast<double>(t_len);
    out.s2 *= 2.0 / static_cast<double>(t_len);
    return out;
}

Complex oracle_m2(const Matrix& x) {
    const OracleS s = oracle_s_statistics(x);
    return 2.0 * M_PI * (s.s2 - s.s1.cwiseProduct(s.s1.conjugate())).mean();
}

}  // namespace

TEST_CASE("fdft at omega=0 is the scaled time average") {
    Rng rng(1);
    const Grid g = Grid::midpoint(5);
    const Matrix vals = random_matrix(12, 5, rng);
    const FunctionalSample x(g, vals);
    const ComplexCurve c = fdft(x, FourierFrequency(0, 12));
    const Vector expect = vals.colwise().sum() / std::sqrt(2.0 * M_PI * 12.0);
    CHECK((c.values().real() - expect).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(c.values().imag().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fdft of a time-constant sample vanishes off the zero frequency") {
    const Grid g = Grid::midpoint(4);
    Matrix vals(8, 4);
    for (Eigen::Index t = 0; t < 8; ++t) vals.row(t) << 1.0, -2.0, 0.5, 3.0;
    const FunctionalSample x(g, vals);
    for (Eigen::Index k = 1; k <= 4; ++k) {
        CHECK(fdft(x, FourierFrequency(k, 8)).values().cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("fdft at T=2, k=1 is the scaled difference") {
    Rng rng(2);
    const Grid g = Grid::midpoint(6);
    const Matrix vals = random_matrix(2, 6, rng);
    const FunctionalSample x(g, vals);
    const CVector got = fdft(x, FourierFrequency(1, 2)).values();
    const Vector expect = (vals.row(0) - vals.row(1)) / std::sqrt(4.0 * M_PI);
    CHECK((got.real() - expect).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(got.imag().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fdft table matches the direct transform and satisfies Parseval") {
    Rng rng(3);
    for (Eigen::Index t_len : {7, 8, 16, 31}) {
        const Grid g = Grid::midpoint(9);
        const FunctionalSample x(g, random_matrix(t_len, 9, rng));
        const FdftTable fd = fdft_table(x);
        REQUIRE(fd.n_freq() == t_len / 2 + 1);
        for (Eigen::Index k = 0; k <= t_len / 2; ++k) {
            const CVector direct = fdft(x, FourierFrequency(k, t_len)).values();
            CHECK((fd.curves().row(k).transpose() - direct).cwiseAbs().maxCoeff() < 1e-10);
        }
        CHECK(parseval_residual(x, fd) < 1e-8);
        // X~_0 of real data is real
        CHECK(fd.curves().row(0).imag().cwiseAbs().maxCoeff() <
              1e-10 * (1.0 + fd.curves().row(0).cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("periodogram is a hermitian rank-one kernel with nonnegative diagonal") {
    Rng rng(4);
    const Grid g = Grid::midpoint(7);
    const FunctionalSample x(g, random_matrix(10, 7, rng));
    const FdftTable fd = fdft_table(x);
    const BivariateKernel p = periodogram(fd, 2);
    REQUIRE(p.hermitian());
    for (Eigen::Index a = 0; a < 7; ++a) {
        CHECK(p.values()(a, a).real() >= 0.0);
        CHECK(std::abs(p.values()(a, a).imag()) < 1e-14);
        for (Eigen::Index b = 0; b < 7; ++b) {
            CHECK(std::abs(p.values()(b, a) - std::conj(p.values()(a, b))) < 1e-14);
        }
    }
    CHECK_THROWS_AS(periodogram(fd, 6), std::invalid_argument);

    const FunctionalSample zero(g, Matrix::Zero(10, 7));
    CHECK(periodogram(fdft_table(zero), 1).values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("s_statistics matches the nested-loop oracle on a deterministic sample") {
    // T=4, G=2, values 1..8 laid out row-major
    const Grid g = Grid::midpoint(2);
    Matrix vals(4, 2);
    vals << 1, 2, 3, 4, 5, 6, 7, 8;
    const FunctionalSample x(g, vals);
    const SStatistics s = s_statistics(x);
    const OracleS ref = oracle_s_statistics(vals);
    CHECK((s.s1.values() - ref.s1).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((s.s2.values() - ref.s2).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(s.s1.real_symmetric());

    // structural counts at T=4: S1 sums k=1..2, S2 has the single k=2 term
    const CVector v2 = oracle_fdft(vals, 2);
    const CVector v1 = oracle_fdft(vals, 1);
    CMatrix single(2, 2);
    for (Eigen::Index a = 0; a < 2; ++a) {
        for (Eigen::Index b = 0; b < 2; ++b) {
            single(a, b) = v2[a] * std::conj(v2[b]) * std::conj(v1[a] * std::conj(v1[b]));
        }
    }
    single *= 2.0 / 4.0;
    CHECK((s.s2.values() - single).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("zero sample gives zero statistics") {
    const Grid g = Grid::midpoint(3);
    const FunctionalSample zero(g, Matrix::Zero(8, 3));
    const SStatistics s = s_statistics(zero);
    CHECK(s.s1.values().cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.s2.values().cwiseAbs().maxCoeff() == 0.0);
    const MHatParts parts = m_hat_fast(fdft_table(zero));
    CHECK(parts.a2 == 0.0);
    CHECK(parts.a1 == 0.0);
}

TEST_CASE("fast path agrees with the kernel path over random shapes") {
    Rng rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        const Eigen::Index t_len = 4 + static_cast<Eigen::Index>(rng.next_u64() % 61);
        const Eigen::Index g_n = 2 + static_cast<Eigen::Index>(rng.next_u64() % 31);
        const Matrix vals = random_matrix(t_len, g_n, rng);
        const FunctionalSample x(Grid::midpoint(g_n), vals);
        const MHatParts parts = m_hat_fast(fdft_table(x));
        const double fast = 2.0 * M_PI * (parts.a2 - parts.a1);
        const Complex kernel = oracle_m2(vals);
        REQUIRE(std::abs(kernel.imag()) < 1e-10 * (1.0 + std::abs(kernel.real())));
        REQUIRE(std::abs(fast - kernel.real()) <= 1e-10 * (1.0 + std::abs(kernel.real())));
        REQUIRE(parts.a2 >= 0.0);
        REQUIRE(parts.a1 >= 0.0);
    }
}

TEST_CASE("degree-4 scaling equivariance") {
    Rng rng(6);
    const Matrix vals = random_matrix(24, 8, rng);
    const Grid g = Grid::midpoint(8);
    const MHatParts base = m_hat_fast(fdft_table(FunctionalSample(g, vals)));
    const double c = 1.7;
    const MHatParts scaled = m_hat_fast(fdft_table(FunctionalSample(g, c * vals)));
    const double c4 = c * c * c * c;
    CHECK(scaled.a2 == Catch::Approx(c4 * base.a2).epsilon(1e-10));
    CHECK(scaled.a1 == Catch::Approx(c4 * base.a1).epsilon(1e-10));
    const double m_base = 2.0 * M_PI * (base.a2 - base.a1);
    const double m_scaled = 2.0 * M_PI * (scaled.a2 - scaled.a1);
    CHECK(m_scaled == Catch::Approx(c4 * m_base).epsilon(1e-10));
}

TEST_CASE("full frequency identity holds to rounding error") {
    Rng rng(7);
    const Matrix vals = random_matrix(8, 4, rng);
    CHECK(full_frequency_identity_check(FunctionalSample(Grid::midpoint(4), vals)) < 1e-10);

    Matrix repeated(9, 4);
    const Matrix one = random_matrix(1, 4, rng);
    for (Eigen::Index t = 0; t < 9; ++t) repeated.row(t) = one;
    CHECK(full_frequency_identity_check(FunctionalSample(Grid::midpoint(4), repeated)) < 1e-10);

    const FunctionalSample zero(Grid::midpoint(4), Matrix::Zero(6, 4));
    CHECK(full_frequency_identity_check(zero) == 0.0);
}

TEST_CASE("s_statistics requires T >= 4") {
    const Grid g = Grid::midpoint(3);
    CHECK_THROWS_AS(s_statistics(FunctionalSample(g, Matrix::Ones(3, 3))), std::invalid_argument);
}
