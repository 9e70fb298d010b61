#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fgcp/fdata.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace fgcp;

namespace {

// naive trapezoid L^p distance written independently from the library path
double naive_lp(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& grid,
                double p) {
    double acc = 0.0;
    for (int j = 0; j + 1 < grid.size(); ++j) {
        const double h = grid(j + 1) - grid(j);
        const double fa = std::pow(std::abs(x(j) - y(j)), p);
        const double fb = std::pow(std::abs(x(j + 1) - y(j + 1)), p);
        acc += 0.5 * h * (fa + fb);
    }
    return std::pow(acc, 1.0 / p);
}

}  // namespace

TEST_CASE("lp_distance: constant difference is |c| for any p and spanning grid") {
    for (int m : {2, 17, 101}) {
        const Vector grid = uniform_grid(m);
        const Vector x = Vector::Zero(m);
        for (double c : {-2.5, 0.0, 3.0}) {
            const Vector y = Vector::Constant(m, c);
            for (double p : {1.0, 2.0, 3.5}) {
                CHECK(lp_distance(x, y, grid, p) == doctest::Approx(std::abs(c)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("lp_distance: closed forms for x(t)=t against fine-grid quadrature") {
    const int m = 1001;
    const Vector grid = uniform_grid(m);
    const Vector x = grid;  // x(t) = t
    const Vector y = Vector::Zero(m);
    // integral of t^2 over [0,1] is 1/3, so the L2 distance is 1/sqrt(3)
    CHECK(std::abs(lp_distance(x, y, grid, 2.0) - 1.0 / std::sqrt(3.0)) < 1e-6);
    // integral of t over [0,1] is 1/2 (trapezoid exact for linear integrands)
    CHECK(std::abs(lp_distance(x, y, grid, 1.0) - 0.5) < 1e-6);
}

TEST_CASE("lp_distance: rejects mismatched grids and p < 1") {
    const Vector grid = uniform_grid(5);
    const Vector x = Vector::Zero(5), y = Vector::Zero(4);
    CHECK_THROWS_AS((void)lp_distance(x, y, grid, 2.0), std::invalid_argument);
    CHECK_THROWS_AS((void)lp_distance(x, x, grid, 0.5), std::invalid_argument);
}

TEST_CASE("distance_matrix: identical curves give a zero matrix") {
    Matrix curves(2, 4);
    curves << 1, 2, 3, 4, 1, 2, 3, 4;
    FunctionalSample s(curves, uniform_grid(4));
    auto dm = distance_matrix(s, 2.0);
    CHECK(dm.d.isZero(0));
}

TEST_CASE("distance_matrix: constant curves at levels 0,1,3 with p=1") {
    Matrix curves(3, 6);
    curves.row(0).setConstant(0.0);
    curves.row(1).setConstant(1.0);
    curves.row(2).setConstant(3.0);
    FunctionalSample s(curves, uniform_grid(6));
    auto dm = distance_matrix(s, 1.0);
    Matrix expect(3, 3);
    expect << 0, 1, 3, 1, 0, 2, 3, 2, 0;
    CHECK((dm.d - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("distance_matrix: matches an independent naive double loop") {
    std::mt19937_64 rng(42);
    auto s = oracle::random_sample(5, 23, rng);
    for (double p : {1.0, 2.0, 3.0}) {
        auto dm = distance_matrix(s, p);
        for (int i = 0; i < 5; ++i) {
            CHECK(dm.d(i, i) == 0.0);
            for (int j = 0; j < 5; ++j) {
                const double naive =
                    naive_lp(s.curves.row(i).transpose(), s.curves.row(j).transpose(), s.grid, p);
                if (i != j) CHECK(std::abs(dm.d(i, j) - naive) <= 1e-12);
                CHECK(dm.d(i, j) == dm.d(j, i));
            }
        }
    }
}

TEST_CASE("distance_matrix: parallel rows are bit-identical to sequential") {
    std::mt19937_64 rng(7);
    auto s = oracle::random_sample(12, 31, rng);
    auto seq = distance_matrix(s, 2.0, 1);
    auto par = distance_matrix(s, 2.0, 4);
    CHECK((seq.d.array() == par.d.array()).all());
}

TEST_CASE("lp_distance: pseudometric properties on random triples") {
    std::mt19937_64 rng(99);
    const Vector grid = uniform_grid(40);
    std::normal_distribution<double> normal;
    for (int rep = 0; rep < 50; ++rep) {
        Vector x(40), y(40), z(40);
        for (int j = 0; j < 40; ++j) {
            x(j) = normal(rng);
            y(j) = normal(rng);
            z(j) = normal(rng);
        }
        for (double p : {1.0, 2.0}) {
            const double dxy = lp_distance(x, y, grid, p);
            const double dyx = lp_distance(y, x, grid, p);
            const double dxz = lp_distance(x, z, grid, p);
            const double dzy = lp_distance(z, y, grid, p);
            CHECK(dxy >= 0.0);
            CHECK(std::abs(dxy - dyx) < 1e-12);
            CHECK(dxy <= dxz + dzy + 1e-9);
        }
    }
}

TEST_CASE("distance_matrix: relabeling permutes rows and columns") {
    std::mt19937_64 rng(5);
    auto s = oracle::random_sample(6, 15, rng);
    auto dm = distance_matrix(s, 2.0);
    std::vector<int> perm{3, 0, 5, 1, 4, 2};
    Matrix shuffled(6, 15);
    for (int i = 0; i < 6; ++i) shuffled.row(i) = s.curves.row(perm[static_cast<std::size_t>(i)]);
    auto dm2 = distance_matrix(FunctionalSample(shuffled, s.grid), 2.0);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(dm2.d(i, j) ==
                  dm.d(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]));
}

TEST_CASE("lp_distance: p=2 on a uniform grid equals the weighted Euclidean norm") {
    std::mt19937_64 rng(17);
    const int m = 25;
    const Vector grid = uniform_grid(m);
    const double dt = 1.0 / (m - 1);
    std::normal_distribution<double> normal;
    Vector x(m), y(m);
    for (int j = 0; j < m; ++j) {
        x(j) = normal(rng);
        y(j) = normal(rng);
    }
    Vector w = Vector::Constant(m, dt);
    w(0) = dt / 2;
    w(m - 1) = dt / 2;
    const double direct = std::sqrt((w.array() * (x - y).array().square()).sum());
    CHECK(lp_distance(x, y, grid, 2.0) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("cidr_transform: constant prices map to the zero curve") {
    Matrix prices = Matrix::Constant(2, 5, 100.0);
    PriceSample ps(prices, uniform_grid(5));
    auto r = cidr_transform(ps);
    CHECK(r.curves.isZero(0));
}

TEST_CASE("cidr_transform: exponential step gives exactly 1.0") {
    Matrix prices(2, 4);
    prices.setConstant(100.0 * std::exp(0.01));
    prices.col(0).setConstant(100.0);
    PriceSample ps(prices, uniform_grid(4));
    auto r = cidr_transform(ps);
    for (int i = 0; i < 2; ++i)
        for (int j = 1; j < 4; ++j) CHECK(r.curves(i, j) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cidr_transform: first column is exactly zero; nonpositive price rejected") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(10.0, 20.0);
    Matrix prices(4, 7);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 7; ++j) prices(i, j) = unif(rng);
    auto r = cidr_transform(PriceSample(prices, uniform_grid(7)));
    CHECK((r.curves.col(0).array() == 0.0).all());

    prices(2, 3) = -1.0;
    CHECK_THROWS_AS(PriceSample(prices, uniform_grid(7)), std::domain_error);
}

TEST_CASE("FunctionalSample: construction validates shape, grid and finiteness") {
    CHECK_THROWS_AS(FunctionalSample(Matrix::Zero(1, 5), uniform_grid(5)), std::invalid_argument);
    CHECK_THROWS_AS(FunctionalSample(Matrix::Zero(3, 4), uniform_grid(5)), std::invalid_argument);
    Vector bad_grid(3);
    bad_grid << 0.0, 0.5, 0.4;
    CHECK_THROWS_AS(FunctionalSample(Matrix::Zero(3, 3), bad_grid), std::invalid_argument);
    Matrix nan_curves = Matrix::Zero(2, 3);
    nan_curves(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(FunctionalSample(nan_curves, uniform_grid(3)), std::invalid_argument);
}
