#include "fgcp/fdata.hpp"

#include "fgcp/parallel.hpp"

#include <utility>

namespace fgcp {

namespace {

void validate_grid(const Vector& grid) {
    if (grid.size() < 2) throw std::invalid_argument("grid must have at least 2 points");
    if (!(grid(0) >= 0.0) || !(grid(grid.size() - 1) <= 1.0))
        throw std::invalid_argument("grid must lie within [0,1]");
    for (Eigen::Index j = 0; j + 1 < grid.size(); ++j)
        if (!(grid(j) < grid(j + 1)))
            throw std::invalid_argument("grid must be strictly increasing");
}

}  // namespace

FunctionalSample::FunctionalSample(Matrix curves_in, Vector grid_in)
    : curves(std::move(curves_in)), grid(std::move(grid_in)) {
    if (curves.rows() < 2) throw std::invalid_argument("FunctionalSample: need n >= 2 curves");
    if (curves.cols() != grid.size())
        throw std::invalid_argument("FunctionalSample: curve resolution does not match grid");
    validate_grid(grid);
    if (!curves.allFinite())
        throw std::invalid_argument("FunctionalSample: curve values must be finite");
}

PriceSample::PriceSample(Matrix prices_in, Vector grid_in)
    : prices(std::move(prices_in)), grid(std::move(grid_in)) {
    if (prices.rows() < 2) throw std::invalid_argument("PriceSample: need n >= 2 curves");
    if (prices.cols() != grid.size())
        throw std::invalid_argument("PriceSample: price resolution does not match grid");
    validate_grid(grid);
    if (!prices.allFinite() || (prices.array() <= 0.0).any())
        throw std::domain_error("PriceSample: prices must be finite and strictly positive");
}

Vector uniform_grid(Eigen::Index m) {
    if (m < 2) throw std::invalid_argument("uniform_grid: need m >= 2");
    return Vector::LinSpaced(m, 0.0, 1.0);
}

DistanceMatrix distance_matrix(const FunctionalSample& sample, double p, int threads) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("distance_matrix: norm order p must satisfy 1 <= p < inf");
    const Eigen::Index n = sample.n();
    DistanceMatrix out;
    out.p = p;
    out.d = Matrix::Zero(n, n);
    const Vector w = trapezoid_weights(sample.grid);
    // Each (i,j) entry is independent; rows are parallelizable and the
    // result is identical to the sequential order.
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t iu) {
        const auto i = static_cast<Eigen::Index>(iu);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const auto absdiff = (sample.curves.row(i) - sample.curves.row(j)).array().abs();
            double dist;
            if (p == 1.0)
                dist = (w.transpose().array() * absdiff).sum();
            else if (p == 2.0)
                dist = std::sqrt((w.transpose().array() * absdiff.square()).sum());
            else
                dist = std::pow((w.transpose().array() * absdiff.pow(p)).sum(), 1.0 / p);
            out.d(i, j) = dist;
        }
    });
    // mirror once so d(i,j) == d(j,i) exactly
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < i; ++j) out.d(i, j) = out.d(j, i);
    return out;
}

FunctionalSample cidr_transform(const PriceSample& prices) {
    const Eigen::Index n = prices.n(), m = prices.m();
    Matrix logp = prices.prices.array().log().matrix();
    Matrix r(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
        r.row(i) = 100.0 * (logp.row(i).array() - logp(i, 0)).matrix();
    return FunctionalSample(std::move(r), prices.grid);
}

}
