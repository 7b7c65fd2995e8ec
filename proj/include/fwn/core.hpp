#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace fwn {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/**
 * @brief Evaluation grid on [0,1] shared by all curves and kernels.
 *
 * The default is the midpoint grid tau_j = (j + 1/2)/G; integrals over [0,1]
 * are then plain averages of grid values (the interval has unit length).
 */
class Grid {
public:
    /// Midpoint grid with G points.
    static Grid midpoint(Eigen::Index n_points) {
        Vector pts(n_points);
        for (Eigen::Index j = 0; j < n_points; ++j) {
            pts[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(n_points);
        }
        return Grid(std::move(pts));
    }

    explicit Grid(Vector points) : points_(std::move(points)) {
        if (points_.size() < 2) throw std::invalid_argument("Grid: need at least 2 points");
        for (Eigen::Index j = 0; j < points_.size(); ++j) {
            if (!(points_[j] >= 0.0 && points_[j] <= 1.0)) {
                throw std::invalid_argument("Grid: points must lie in [0,1]");
            }
            if (j > 0 && !(points_[j] > points_[j - 1])) {
                throw std::invalid_argument("Grid: points must be strictly increasing");
            }
        }
    }

    Eigen::Index size() const { return points_.size(); }
    double point(Eigen::Index j) const { return points_[j]; }
    const Vector& points() const { return points_; }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.points_.size() == b.points_.size() && a.points_ == b.points_;
    }

private:
    Vector points_;
};

/// T observed real curves on a common grid; row t is X_t evaluated on the grid.
class FunctionalSample {
public:
    FunctionalSample(Grid grid, Matrix values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.cols() != grid_.size()) {
            throw std::invalid_argument("FunctionalSample: column count must match grid size");
        }
        if (values_.rows() < 1) throw std::invalid_argument("FunctionalSample: need T >= 1");
        if (!values_.allFinite()) throw std::invalid_argument("FunctionalSample: non-finite values");
    }

    const Grid& grid() const { return grid_; }
    const Matrix& values() const { return values_; }
    Eigen::Index length() const { return values_.rows(); }       ///< T
    Eigen::Index grid_size() const { return values_.cols(); }    ///< G

private:
    Grid grid_;
    Matrix values_;
};

/// One complex-valued curve on a grid (e.g. a functional DFT coefficient).
class ComplexCurve {
public:
    ComplexCurve(Grid grid, CVector values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.size()) {
            throw std::invalid_argument("ComplexCurve: size must match grid");
        }
        if (!values_.allFinite()) throw std::invalid_argument("ComplexCurve: non-finite values");
    }

    const Grid& grid() const { return grid_; }
    const CVector& values() const { return values_; }

private:
    Grid grid_;
    CVector values_;
};

/**
 * @brief Complex G x G kernel on the grid squared: entry (i,j) = k(tau_i, tau_j).
 *
 * The optional flags record structure the producer guarantees; setting a flag
 * asserts it (tolerance 1e-10 relative to the largest entry).
 */
class BivariateKernel {
public:
    BivariateKernel(Grid grid, CMatrix values, bool hermitian = false,
                    bool real_symmetric = false)
        : grid_(std::move(grid)),
          values_(std::move(values)),
          hermitian_(hermitian),
          real_symmetric_(real_symmetric) {
        if (values_.rows() != grid_.size() || values_.cols() != grid_.size()) {
            throw std::invalid_argument("BivariateKernel: shape must be G x G");
        }
        if (!values_.allFinite()) throw std::invalid_argument("BivariateKernel: non-finite values");
        const double scale = values_.cwiseAbs().maxCoeff();
        const double tol = 1e-10 * (1.0 + scale);
        if (real_symmetric_) {
            if (values_.imag().cwiseAbs().maxCoeff() > tol ||
                (values_.real() - values_.real().transpose()).cwiseAbs().maxCoeff() > tol) {
                throw std::invalid_argument("BivariateKernel: real_symmetric flag violated");
            }
        } else if (hermitian_) {
            if ((values_ - values_.adjoint()).cwiseAbs().maxCoeff() > tol) {
                throw std::invalid_argument("BivariateKernel: hermitian flag violated");
            }
        }
    }

    const Grid& grid() const { return grid_; }
    const CMatrix& values() const { return values_; }
    bool hermitian() const { return hermitian_ || real_symmetric_; }
    bool real_symmetric() const { return real_symmetric_; }

private:
    Grid grid_;
    CMatrix values_;
    bool hermitian_;
    bool real_symmetric_;
};

/// Fourier frequency omega_k = 2*pi*k/T.
struct FourierFrequency {
    Eigen::Index k;
    Eigen::Index t_len;

    FourierFrequency(Eigen::Index k_, Eigen::Index t_len_) : k(k_), t_len(t_len_) {
        if (t_len < 1) throw std::invalid_argument("FourierFrequency: T must be positive");
    }

    double value() const { return 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(t_len); }
};

// ---------------------------------------------------------------------------
// Quadrature and inner products (midpoint rule: averages over the grid).
// ---------------------------------------------------------------------------

/// Double integral of a kernel over [0,1]^2: the mean of all G^2 entries.
inline Complex integrate_bi(const BivariateKernel& k) { return k.values().mean(); }

/// <a,b> = integral of a * conj(b): (1/G) sum_j a_j conj(b_j).
/// (Eigen's dot conjugates its first argument, hence the explicit form.)
inline Complex inner_product(const CVector& a, const CVector& b) {
    return (a.array() * b.array().conjugate()).sum() / static_cast<double>(a.size());
}

inline Complex inner_product(const ComplexCurve& a, const ComplexCurve& b) {
    if (!(a.grid() == b.grid())) {
        throw std::invalid_argument("inner_product: grid mismatch");
    }
    return inner_product(a.values(), b.values());
}

/// Pointwise sample mean curve.
inline Vector mean_curve(const FunctionalSample& x) {
    return x.values().colwise().mean();
}

/**
 * @brief Empirical autocovariance kernel at lag k >= 0:
 *        r_k(tau,sigma) = (1/(T-k)) sum_{t=k}^{T-1}
 *                         (X_t(tau)-c(tau)) (X_{t-k}(sigma)-c(sigma)),
 *        with c the sample mean curve when `centered`, zero otherwise.
 */
inline BivariateKernel autocov_kernel(const FunctionalSample& x, Eigen::Index lag,
                                      bool centered = true) {
    const Eigen::Index t_len = x.length();
    const Eigen::Index g = x.grid_size();
    if (lag < 0 || lag > t_len - 1) {
        throw std::invalid_argument("autocov_kernel: lag out of range [0, T-1]");
    }
    Matrix xc = x.values();
    if (centered) {
        xc.rowwise() -= mean_curve(x).transpose();
    }
    const Eigen::Index n = t_len - lag;
    Matrix r = xc.bottomRows(n).transpose() * xc.topRows(n) / static_cast<double>(n);
    CMatrix rc = r.cast<Complex>();
    const bool sym = (lag == 0);
    if (sym) rc = 0.5 * (rc + CMatrix(rc.transpose()));  // kill rounding asymmetry
    return BivariateKernel(x.grid(), std::move(rc), sym, sym);
}

}  // namespace fwn
