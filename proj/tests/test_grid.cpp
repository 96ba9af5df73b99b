#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "nhsym/grid.hpp"
#include "nhsym/klein.hpp"
#include "support.hpp"

using namespace nhsym;

TEST_CASE("make_grid places both endpoints and a centred midpoint") {
    const Grid g3 = make_grid(3, 1.0);
    CHECK(g3.x(0) == -1.0);
    CHECK(g3.x(1) == 0.0);
    CHECK(g3.x(2) == 1.0);
    CHECK(g3.dx() == 1.0);

    const Grid g2 = make_grid(2, 1.0);
    CHECK(g2.x(0) == -1.0);
    CHECK(g2.x(1) == 1.0);
    CHECK(g2.dx() == 2.0);

    const Grid g63 = make_grid(63, 10.0);
    CHECK(g63.dx() == doctest::Approx(20.0 / 62.0).epsilon(1e-15));
    CHECK(g63.x(31) == 0.0);
    CHECK(g63.symmetric());
}

TEST_CASE("symmetric grids mirror exactly") {
    for (Index n : {2, 5, 31, 64}) {
        const Grid g = make_grid(n, 7.3);
        for (Index j = 0; j < n; ++j) CHECK(g.x(j) == -g.x(n - 1 - j));
    }
    CHECK_FALSE(Grid(5, -1.0, 2.0).symmetric());
}

TEST_CASE("grid construction rejects bad input") {
    CHECK_THROWS_AS(make_grid(1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(5, 0.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(5, -2.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(5, 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(5, 1.0, 1.0, -1.0), InvalidArgument);
}

TEST_CASE("parity matrix is the reversal permutation") {
    Matrix expected2(2, 2);
    expected2 << 0, 1, 1, 0;
    CHECK(parity_matrix(make_grid(2, 1.0)).matrix() == expected2);

    const Matrix p3 = parity_matrix(make_grid(3, 1.0)).matrix();
    for (Index j = 0; j < 3; ++j) {
        for (Index k = 0; k < 3; ++k) CHECK(p3(j, k) == cplx(j + k == 2 ? 1.0 : 0.0));
    }

    for (Index n : {4, 7, 63}) {
        const Matrix p = parity_matrix(make_grid(n, 3.0)).matrix();
        CHECK((p * p - Matrix::Identity(n, n)).norm() == 0.0);
        CHECK(p == p.adjoint());
    }
    CHECK_THROWS_AS(parity_matrix(Grid(5, -1.0, 2.0)), DomainError);
}

TEST_CASE("momentum grid and Fourier matrix") {
    CHECK(fourier_matrix(1, 0.0, 1.0)(0, 0) == cplx(1.0));

    const Grid g4 = make_grid(4, 1.5);
    const RealVector p = g4.momenta();
    const double unit = 2.0 * std::numbers::pi / (4.0 * g4.dx());
    CHECK(p[0] == doctest::Approx(-2.0 * unit));
    CHECK(p[1] == doctest::Approx(-1.0 * unit));
    CHECK(p[2] == doctest::Approx(0.0));
    CHECK(p[3] == doctest::Approx(1.0 * unit));

    for (Index n : {2, 5, 32, 63}) {
        const Grid g = make_grid(n, 4.0, 0.7);
        const Matrix f = momentum_map(g).matrix();
        CHECK((f.adjoint() * f - Matrix::Identity(n, n)).norm() < 1e-12);
    }

    // Odd n: p_k and -p_k sit in reversed slots.
    const RealVector p7 = make_grid(7, 2.0).momenta();
    for (Index k = 0; k < 7; ++k) CHECK(p7[k] == doctest::Approx(-p7[6 - k]).epsilon(1e-14));
}

TEST_CASE("Fourier entries match the direct DFT formula") {
    const Grid g = make_grid(5, 2.0, 1.3);
    const Matrix f = momentum_map(g).matrix();
    const RealVector p = g.momenta();
    for (Index k = 0; k < 5; ++k) {
        for (Index j = 0; j < 5; ++j) {
            const cplx direct = std::polar(1.0 / std::sqrt(5.0), -p[k] * g.x(j) / g.hbar());
            CHECK(std::abs(f(k, j) - direct) < 1e-13);
        }
    }
}

TEST_CASE("parity in the momentum basis is the momentum reversal") {
    for (Index n : {5, 31, 63}) {
        const Grid g = make_grid(n, 5.0);
        const Matrix pm = to_momentum(parity_matrix(g)).matrix();
        CHECK((pm - reversal_matrix(n)).norm() < 1e-12);
    }
}

TEST_CASE("basis round trip on random operators") {
    std::mt19937_64 rng(11);
    const Grid g = make_grid(31, 6.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Operator a(test::random_matrix(31, rng), g);
        const Operator back = to_position(to_momentum(a));
        CHECK(back.basis() == Basis::Position);
        worst = std::max(worst, relative_frobenius(back.matrix(), a.matrix()));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("kinetic operator") {
    for (Index n : {4, 31, 63}) {
        const Grid g = make_grid(n, 10.0);
        const Matrix h0 = kinetic_operator(g).matrix();
        CHECK((h0 - h0.adjoint()).norm() / h0.norm() < 1e-12);
        if (n % 2 == 1) {
            const Matrix p = parity_matrix(g).matrix();
            CHECK((p * h0 - h0 * p).norm() / h0.norm() < 1e-12);
            for (SymmetryCode c : kAllCodes) {
                const Matrix t = superop_apply(code_superoperator(c, g), h0);
                CHECK(relative_frobenius(t, h0) < 1e-12);
            }
        }
    }
}

TEST_CASE("harmonic oscillator ground state on the spectral grid") {
    const Grid g = make_grid(63, 10.0);
    Matrix h = kinetic_operator(g).matrix();
    for (Index j = 0; j < g.n(); ++j) h(j, j) += 0.5 * g.x(j) * g.x(j);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(es.eigenvalues()[1] == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("kinetic energy scales with hbar and mass") {
    const Grid base = make_grid(15, 3.0);
    const Grid scaled = make_grid(15, 3.0, 2.0, 4.0);
    const Matrix h1 = kinetic_operator(base).matrix();
    const Matrix h2 = kinetic_operator(scaled).matrix();
    CHECK(relative_frobenius(h2, h1) == doctest::Approx(0.0));  // hbar^2 / m = 1 in both
    const Grid heavy = make_grid(15, 3.0, 1.0, 2.0);
    CHECK(relative_frobenius(kinetic_operator(heavy).matrix(), Matrix(0.5 * h1)) < 1e-13);
}

TEST_CASE("operator tagging") {
    const Grid g = make_grid(5, 1.0);
    CHECK_THROWS_AS(Operator(Matrix::Identity(4, 4), g), InvalidArgument);
    const Operator a(Matrix::Identity(5, 5), g);
    const Operator m = Operator::model(Matrix::Identity(5, 5));
    CHECK_FALSE(m.grid().has_value());
    CHECK_FALSE(a.compatible_with(to_momentum(a)));
    CHECK(a.compatible_with(a.adjoint()));
    CHECK(std::string(to_string(Basis::Momentum)) == "momentum");
}
