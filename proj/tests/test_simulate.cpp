#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fwn/core.hpp"
#include "fwn/simulate.hpp"

using namespace fwn;

namespace {

// Composite Simpson on [0,1]; the independent quadrature oracle for the
// kernel normalization constants.
template <typename F>
double simpson(F f, int n = 2000) {
    double acc = f(0.0) + f(1.0);
    for (int i = 1; i < n; ++i) {
        const double x = static_cast<double>(i) / n;
        acc += f(x) * ((i % 2 == 1) ? 4.0 : 2.0);
    }
    return acc / (3.0 * n);
}

}  // namespace

TEST_CASE("brownian motion: terminal variance, independent increments, determinism") {
    const Grid g = Grid::midpoint(16);
    const int n = 10000;
    double sum_last = 0.0, sumsq_last = 0.0;
    double sum_d1 = 0.0, sum_d2 = 0.0, sum_d12 = 0.0, sumsq_d1 = 0.0, sumsq_d2 = 0.0;
    for (int i = 0; i < n; ++i) {
        Rng rng = Rng::stream(404, static_cast<std::uint64_t>(i));
        const Vector w = brownian_motion_path(g, rng);
        sum_last += w[15];
        sumsq_last += w[15] * w[15];
        const double d1 = w[4] - w[0];
        const double d2 = w[12] - w[8];
        sum_d1 += d1;
        sum_d2 += d2;
        sum_d12 += d1 * d2;
        sumsq_d1 += d1 * d1;
        sumsq_d2 += d2 * d2;
    }
    const double var_last = sumsq_last / n - (sum_last / n) * (sum_last / n);
    CHECK(var_last == Catch::Approx(g.point(15)).epsilon(0.05));

    const double c12 = sum_d12 / n - (sum_d1 / n) * (sum_d2 / n);
    const double v1 = sumsq_d1 / n - (sum_d1 / n) * (sum_d1 / n);
    const double v2 = sumsq_d2 / n - (sum_d2 / n) * (sum_d2 / n);
    CHECK(std::abs(c12 / std::sqrt(v1 * v2)) < 0.05);

    Rng a = Rng::stream(7, 3), b = Rng::stream(7, 3);
    CHECK(brownian_motion_path(g, a) == brownian_motion_path(g, b));
}

TEST_CASE("brownian bridge: zero mean, pinned variance, tiny grid smoke") {
    const Grid g = Grid::midpoint(10);
    const int n = 10000;
    Vector sum = Vector::Zero(10);
    double sumsq_last = 0.0;
    for (int i = 0; i < n; ++i) {
        Rng rng = Rng::stream(505, static_cast<std::uint64_t>(i));
        const Vector b = brownian_bridge_path(g, rng);
        sum += b;
        sumsq_last += b[9] * b[9];
    }
    const Vector mean = sum / n;
    // E B = 0 within ~3 SE pointwise (sd <= 1/2, n = 1e4)
    CHECK(mean.cwiseAbs().maxCoeff() < 3.0 * 0.5 / std::sqrt(static_cast<double>(n)) + 1e-3);
    const double tau = g.point(9);
    CHECK(sumsq_last / n == Catch::Approx(tau * (1.0 - tau)).epsilon(0.10));

    const Grid tiny = Grid::midpoint(2);
    Rng rng(1);
    const Vector b = brownian_bridge_path(tiny, rng);
    CHECK(b.allFinite());
}

TEST_CASE("far1_kernel constants match independent quadrature") {
    const Grid g = Grid::midpoint(1000);

    const BivariateKernel kw = far1_kernel(FarKernel::wiener, g, 0.3);
    const double cw = kw.values()(999, 999).real() / g.point(999);
    CHECK(cw == Catch::Approx(0.3 * std::sqrt(6.0)).margin(1e-6));  // 0.73485

    const BivariateKernel kg = far1_kernel(FarKernel::gaussian, g, 0.3);
    const double tau = g.point(123), sigma = g.point(777);
    const double cg = kg.values()(123, 777).real() / std::exp(0.5 * (tau * tau + sigma * sigma));
    const double integral = simpson([](double t) { return std::exp(t * t); });  // 1.46265...
    CHECK(cg == Catch::Approx(0.3 / integral).margin(1e-6));  // 0.20511

    // discrete HS norm hits the target exactly on any grid
    for (Eigen::Index gn : {37, 100}) {
        const Grid gg = Grid::midpoint(gn);
        for (auto kind : {FarKernel::wiener, FarKernel::gaussian}) {
            const BivariateKernel k = far1_kernel(kind, gg, 0.3);
            const double hs =
                std::sqrt(k.values().squaredNorm() / static_cast<double>(gn * gn));
            CHECK(hs == Catch::Approx(0.3).margin(1e-12));
        }
    }

    CHECK(far1_kernel(FarKernel::wiener, g, 0.0).values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("simulate is deterministic in the spec") {
    DgpSpec spec;
    spec.kind = DgpKind::far1;
    spec.far_kernel = FarKernel::wiener;
    spec.grid_size = 12;
    spec.t_len = 40;
    spec.seed = 99;
    const FunctionalSample a = simulate(spec);
    const FunctionalSample b = simulate(spec);
    CHECK(a.values() == b.values());
    spec.seed = 100;
    CHECK(simulate(spec).values() != a.values());
}

TEST_CASE("far1 with zero operator norm returns the innovations") {
    DgpSpec spec;
    spec.kind = DgpKind::far1;
    spec.target_hs_norm = 0.0;
    spec.grid_size = 8;
    spec.t_len = 10;
    spec.seed = 3;
    spec.burn_in = 5;
    const FunctionalSample x = simulate(spec);
    const Grid g = Grid::midpoint(8);
    for (Eigen::Index t = 0; t < 10; ++t) {
        Rng rng = Rng::stream(3, static_cast<std::uint64_t>(t + 5));
        const Vector eps = brownian_motion_path(g, rng);
        CHECK((x.values().row(t).transpose() - eps).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("far1 satisfies the lag-1 operator relation r1 = rho r0 (MC mean)") {
    DgpSpec spec;
    spec.kind = DgpKind::far1;
    spec.far_kernel = FarKernel::wiener;
    spec.target_hs_norm = 0.3;
    spec.grid_size = 24;
    spec.t_len = 4096;
    const Grid g = Grid::midpoint(24);
    const Matrix rho = far1_kernel(FarKernel::wiener, g, 0.3).values().real() / 24.0;
    Matrix r0 = Matrix::Zero(24, 24), r1 = Matrix::Zero(24, 24);
    const int reps = 6;
    for (int rep = 0; rep < reps; ++rep) {
        spec.seed = 7100 + static_cast<std::uint64_t>(rep);
        const FunctionalSample x = simulate(spec);
        r0 += autocov_kernel(x, 0).values().real();
        r1 += autocov_kernel(x, 1).values().real();
    }
    r0 /= reps;
    r1 /= reps;
    const Matrix predicted = rho * r0;
    const double rel = (r1 - predicted).norm() / predicted.norm();
    CHECK(rel < 0.10);
}

TEST_CASE("farch1 is uncorrelated but dependent") {
    DgpSpec spec;
    spec.kind = DgpKind::farch1;
    spec.grid_size = 24;
    spec.t_len = 4096;
    spec.seed = 88;
    const FunctionalSample x = simulate(spec);
    const double r0 = autocov_kernel(x, 0).values().real().norm();
    const double r1 = autocov_kernel(x, 1).values().real().norm();
    CHECK(r1 / r0 < 0.10);  // white in the second-order sense

    Matrix sq = x.values().cwiseProduct(x.values());
    const FunctionalSample xsq(x.grid(), std::move(sq));
    const double q0 = autocov_kernel(xsq, 0).values().real().norm();
    const double q1 = autocov_kernel(xsq, 1).values().real().norm();
    CHECK(q1 / q0 > 3.0 * r1 / r0);  // squared process carries real dependence
}

TEST_CASE("stationarity smoke test: halves agree after burn-in") {
    DgpSpec spec;
    spec.kind = DgpKind::far1;
    spec.far_kernel = FarKernel::gaussian;
    spec.grid_size = 16;
    spec.t_len = 4096;
    spec.seed = 31;
    const FunctionalSample x = simulate(spec);
    const Eigen::Index half = spec.t_len / 2;
    const Vector m1 = x.values().topRows(half).colwise().mean();
    const Vector m2 = x.values().bottomRows(half).colwise().mean();
    // each mean has sd ~ sigma/sqrt(half); allow 3 sigma with sigma <= 1.5
    CHECK((m1 - m2).cwiseAbs().maxCoeff() < 3.0 * 1.5 / std::sqrt(static_cast<double>(half)) * 2.0);
}

TEST_CASE("far1 sample stays finite at the reference norm") {
    DgpSpec spec;
    spec.kind = DgpKind::far1;
    spec.far_kernel = FarKernel::wiener;
    spec.target_hs_norm = 0.3;
    spec.grid_size = 50;
    spec.t_len = 10000;
    spec.seed = 1234;
    const FunctionalSample x = simulate(spec);
    CHECK(x.values().allFinite());
    CHECK(x.values().cwiseAbs().maxCoeff() < 50.0);
}

TEST_CASE("spec validation") {
    DgpSpec spec;
    spec.kind = DgpKind::far1;
    spec.target_hs_norm = 1.5;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.target_hs_norm = 0.3;
    spec.burn_in = -1;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.burn_in = 0;
    spec.grid_size = 1;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
