#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "fwn/core.hpp"
#include "fwn/rng.hpp"

namespace fwn {

enum class DgpKind { iid_bm, iid_bb, farch1, far1 };
enum class FarKernel { gaussian, wiener };
enum class Innovation { bm, bb };

inline const char* to_string(DgpKind k) {
    switch (k) {
        case DgpKind::iid_bm: return "iid_bm";
        case DgpKind::iid_bb: return "iid_bb";
        case DgpKind::farch1: return "farch1";
        case DgpKind::far1: return "far1";
    }
    return "?";
}

inline const char* to_string(FarKernel k) {
    return k == FarKernel::gaussian ? "gaussian" : "wiener";
}

inline const char* to_string(Innovation k) { return k == Innovation::bm ? "bm" : "bb"; }

/**
 * @brief Full description of a data-generating process; together with the
 *        seed it determines the sample exactly.
 */
struct DgpSpec {
    DgpKind kind = DgpKind::iid_bm;
    Eigen::Index grid_size = 100;
    Eigen::Index t_len = 128;
    std::uint64_t seed = 0;
    // far1 only
    FarKernel far_kernel = FarKernel::gaussian;
    double target_hs_norm = 0.3;
    Innovation innovation = Innovation::bm;
    // farch1 only
    double c_psi = 0.3418;
    // far1 / farch1
    Eigen::Index burn_in = 200;

    void validate() const {
        if (grid_size < 2) throw std::invalid_argument("DgpSpec: grid_size must be >= 2");
        if (t_len < 1) throw std::invalid_argument("DgpSpec: T must be >= 1");
        if (burn_in < 0) throw std::invalid_argument("DgpSpec: burn_in must be >= 0");
        if (kind == DgpKind::far1 && !(target_hs_norm >= 0.0 && target_hs_norm < 1.0)) {
            throw std::invalid_argument("DgpSpec: far1 needs HS norm in [0,1) for stationarity");
        }
        if (kind == DgpKind::farch1 && c_psi < 0.0) {
            throw std::invalid_argument("DgpSpec: c_psi must be >= 0");
        }
    }
};

/**
 * @brief One standard Brownian motion path on the grid.
 *
 * Increments are sized by consecutive grid gaps, the first from 0 to tau_0,
 * so Cov(W(tau_i), W(tau_j)) = min(tau_i, tau_j) holds exactly at the nodes.
 */
inline Vector brownian_motion_path(const Grid& grid, Rng& rng) {
    const Eigen::Index g = grid.size();
    Vector w(g);
    double prev_tau = 0.0;
    double level = 0.0;
    for (Eigen::Index j = 0; j < g; ++j) {
        level += std::sqrt(grid.point(j) - prev_tau) * rng.normal();
        w[j] = level;
        prev_tau = grid.point(j);
    }
    return w;
}

/// Brownian bridge B(tau) = W(tau) - tau * W(1); the endpoint W(1) is
/// simulated by extending the path with one final increment.
inline Vector brownian_bridge_path(const Grid& grid, Rng& rng) {
    const Eigen::Index g = grid.size();
    Vector w = brownian_motion_path(grid, rng);
    const double tail = 1.0 - grid.point(g - 1);
    const double w1 = w[g - 1] + (tail > 0.0 ? std::sqrt(tail) * rng.normal() : 0.0);
    return w - w1 * grid.points();
}

/**
 * @brief FAR(1) operator kernel: Gaussian c*exp((tau^2+sigma^2)/2) or Wiener
 *        c*min(tau,sigma), with c calibrated so the discrete Hilbert-Schmidt
 *        norm sqrt(integrate_bi(|K|^2)) on this grid equals the target.
 */
inline BivariateKernel far1_kernel(FarKernel kind, const Grid& grid, double target_hs_norm) {
    if (target_hs_norm < 0.0) throw std::invalid_argument("far1_kernel: negative target norm");
    const Eigen::Index g = grid.size();
    Matrix base(g, g);
    for (Eigen::Index i = 0; i < g; ++i) {
        for (Eigen::Index j = 0; j < g; ++j) {
            const double tau = grid.point(i), sigma = grid.point(j);
            base(i, j) = kind == FarKernel::gaussian
                             ? std::exp(0.5 * (tau * tau + sigma * sigma))
                             : std::min(tau, sigma);
        }
    }
    const double norm = std::sqrt(base.squaredNorm() / static_cast<double>(g * g));
    base *= target_hs_norm / norm;
    return BivariateKernel(grid, base.cast<Complex>(), true, true);
}

/// Simulate T curves from the process described by `spec` (post burn-in).
inline FunctionalSample simulate(const DgpSpec& spec) {
    spec.validate();
    const Grid grid = Grid::midpoint(spec.grid_size);
    const Eigen::Index g = spec.grid_size;
    const Eigen::Index t_out = spec.t_len;

    Matrix out(t_out, g);
    switch (spec.kind) {
        case DgpKind::iid_bm:
        case DgpKind::iid_bb: {
            for (Eigen::Index t = 0; t < t_out; ++t) {
                Rng row = Rng::stream(spec.seed, static_cast<std::uint64_t>(t));
                out.row(t) = (spec.kind == DgpKind::iid_bm ? brownian_motion_path(grid, row)
                                                           : brownian_bridge_path(grid, row))
                                 .transpose();
            }
            break;
        }
        case DgpKind::far1: {
            const Matrix k =
                far1_kernel(spec.far_kernel, grid, spec.target_hs_norm).values().real() /
                static_cast<double>(g);
            const bool bb = spec.innovation == Innovation::bb;
            Vector x = Vector::Zero(g);
            for (Eigen::Index t = 0; t < spec.burn_in + t_out; ++t) {
                Rng row = Rng::stream(spec.seed, static_cast<std::uint64_t>(t));
                const Vector eps =
                    bb ? brownian_bridge_path(grid, row) : brownian_motion_path(grid, row);
                x = k * x + eps;
                if (!x.allFinite()) throw std::runtime_error("simulate: far1 blew up");
                if (t >= spec.burn_in) out.row(t - spec.burn_in) = x.transpose();
            }
            break;
        }
        case DgpKind::farch1: {
            Matrix k(g, g);
            for (Eigen::Index i = 0; i < g; ++i) {
                for (Eigen::Index j = 0; j < g; ++j) {
                    k(i, j) = spec.c_psi * std::exp(0.5 * (grid.point(i) * grid.point(i) +
                                                           grid.point(j) * grid.point(j)));
                }
            }
            k /= static_cast<double>(g);  // quadrature weight of the volatility integral
            Vector x = Vector::Zero(g);
            for (Eigen::Index t = 0; t < spec.burn_in + t_out; ++t) {
                Rng row = Rng::stream(spec.seed, static_cast<std::uint64_t>(t));
                const Vector eps = brownian_motion_path(grid, row);
                const Vector vol = (grid.points() + k * x.cwiseProduct(x)).cwiseSqrt();
                x = eps.cwiseProduct(vol);
                if (!x.allFinite()) throw std::runtime_error("simulate: farch1 blew up");
                if (t >= spec.burn_in) out.row(t - spec.burn_in) = x.transpose();
            }
            break;
        }
    }
    return FunctionalSample(grid, std::move(out));
}

}  // namespace fwn
