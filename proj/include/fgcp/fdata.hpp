#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace fgcp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Trapezoid quadrature weights for a strictly increasing grid.
template <typename Derived>
Eigen::Vector<typename Derived::Scalar, Eigen::Dynamic>
trapezoid_weights(const Eigen::MatrixBase<Derived>& grid) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index m = grid.size();
    Eigen::Vector<Scalar, Eigen::Dynamic> w(m);
    if (m < 2) throw std::invalid_argument("trapezoid_weights: need at least 2 grid points");
    w.setZero();
    for (Eigen::Index j = 0; j + 1 < m; ++j) {
        const Scalar h = (grid(j + 1) - grid(j)) / Scalar(2);
        w(j) += h;
        w(j + 1) += h;
    }
    return w;
}

/// L^p distance between two curves sampled on a shared grid,
/// (integral of |x-y|^p approximated by the trapezoid rule)^(1/p).
template <typename DX, typename DY, typename DG>
typename DX::Scalar lp_distance(const Eigen::MatrixBase<DX>& x,
                                const Eigen::MatrixBase<DY>& y,
                                const Eigen::MatrixBase<DG>& grid,
                                double p) {
    using Scalar = typename DX::Scalar;
    if (x.size() != y.size() || x.size() != grid.size())
        throw std::invalid_argument("lp_distance: curves and grid must share one length");
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("lp_distance: norm order p must satisfy 1 <= p < inf");
    const auto w = trapezoid_weights(grid);
    const auto absdiff = (x.derived().array() - y.derived().array()).abs();
    Scalar acc;
    if (p == 1.0) {
        acc = (w.array() * absdiff).sum();
        return acc;
    }
    if (p == 2.0) {
        acc = (w.array() * absdiff.square()).sum();
        return std::sqrt(acc);
    }
    acc = (w.array() * absdiff.pow(p)).sum();
    return std::pow(acc, Scalar(1) / Scalar(p));
}

/// Ordered sample of n curves on a shared grid over [0,1].
struct FunctionalSample {
    Matrix curves;  // n x m, row i = curve i on the grid
    Vector grid;    // m strictly increasing points in [0,1]

    FunctionalSample() = default;
    FunctionalSample(Matrix curves_in, Vector grid_in);

    Eigen::Index n() const { return curves.rows(); }
    Eigen::Index m() const { return curves.cols(); }
};

/// Strictly positive asset prices on a shared grid.
struct PriceSample {
    Matrix prices;  // n x m, all entries > 0
    Vector grid;

    PriceSample() = default;
    PriceSample(Matrix prices_in, Vector grid_in);

    Eigen::Index n() const { return prices.rows(); }
    Eigen::Index m() const { return prices.cols(); }
};

/// Symmetric pairwise L^p distances; diagonal exactly zero.
struct DistanceMatrix {
    Matrix d;
    double p = 2.0;

    Eigen::Index n() const { return d.rows(); }
};

Vector uniform_grid(Eigen::Index m);

DistanceMatrix distance_matrix(const FunctionalSample& sample, double p, int threads = 1);

/// Cumulative intraday return curves: 100*(log P(t_j) - log P(t_1)).
FunctionalSample cidr_transform(const PriceSample& prices);

}
