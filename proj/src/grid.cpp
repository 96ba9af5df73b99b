#include "nhsym/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nhsym {

Grid::Grid(Index n, double x_min, double x_max, double hbar, double mass)
    : n_(n), x_min_(x_min), x_max_(x_max), dx_(0.0), hbar_(hbar), mass_(mass) {
    if (n < 2) {
        throw InvalidArgument("grid needs at least 2 points, got " + std::to_string(n));
    }
    if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
        throw InvalidArgument("grid bounds must be finite with x_min < x_max");
    }
    if (!(hbar > 0.0) || !(mass > 0.0)) {
        throw InvalidArgument("hbar and mass must be positive");
    }
    dx_ = (x_max - x_min) / static_cast<double>(n - 1);
}

double Grid::x(Index j) const {
    const auto m = static_cast<double>(n_ - 1);
    const auto jd = static_cast<double>(j);
    return (x_min_ * (m - jd) + x_max_ * jd) / m;
}

RealVector Grid::points() const {
    RealVector xs(n_);
    for (Index j = 0; j < n_; ++j) xs[j] = x(j);
    return xs;
}

RealVector Grid::momenta() const {
    RealVector ps(n_);
    const Index k0 = n_ / 2;
    const double unit = hbar_ * 2.0 * std::numbers::pi / (static_cast<double>(n_) * dx_);
    for (Index i = 0; i < n_; ++i) ps[i] = unit * static_cast<double>(i - k0);
    return ps;
}

Grid make_grid(Index n, double x_max, double hbar, double mass) {
    if (!(x_max > 0.0)) throw InvalidArgument("x_max must be positive");
    return Grid(n, -x_max, x_max, hbar, mass);
}

const char* to_string(Basis b) {
    return b == Basis::Position ? "position" : "momentum";
}

Operator::Operator(Matrix m, const Grid& grid, Basis basis)
    : matrix_(std::move(m)), basis_(basis), grid_(grid), hbar_(grid.hbar()) {
    if (matrix_.rows() != grid.n() || matrix_.cols() != grid.n()) {
        throw InvalidArgument("operator dimension " + std::to_string(matrix_.rows()) + "x" +
                              std::to_string(matrix_.cols()) + " does not match grid size " +
                              std::to_string(grid.n()));
    }
}

Operator Operator::model(Matrix m, double hbar) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw InvalidArgument("model operator must be a non-empty square matrix");
    }
    if (!(hbar > 0.0)) throw InvalidArgument("hbar must be positive");
    Operator op;
    op.matrix_ = std::move(m);
    op.hbar_ = hbar;
    return op;
}

Operator Operator::with_matrix(Matrix m) const {
    if (m.rows() != dim() || m.cols() != dim()) {
        throw InvalidArgument("with_matrix: dimension mismatch");
    }
    Operator op = *this;
    op.matrix_ = std::move(m);
    return op;
}

bool Operator::compatible_with(const Operator& other) const {
    return dim() == other.dim() && basis_ == other.basis_ && grid_ == other.grid_;
}

Matrix reversal_matrix(Index n) {
    Matrix p = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) p(j, n - 1 - j) = 1.0;
    return p;
}

Operator parity_matrix(const Grid& grid) {
    if (!grid.symmetric()) {
        throw DomainError("parity is undefined on an asymmetric grid");
    }
    return Operator(reversal_matrix(grid.n()), grid);
}

Matrix fourier_matrix(Index n, double x_min, double dx) {
    if (n < 1) throw InvalidArgument("fourier_matrix: n must be positive");
    Matrix f(n, n);
    if (n == 1) {
        f(0, 0) = 1.0;
        return f;
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    const Index k0 = n / 2;
    const auto nd = static_cast<double>(n);
    // Phase p_k x_j / hbar = 2 pi k (x_min/dx + j) / n. Reduce k*j mod n so
    // the argument stays small and the matrix is unitary to rounding.
    const double offset = x_min / dx;
    for (Index i = 0; i < n; ++i) {
        const Index k = i - k0;
        for (Index j = 0; j < n; ++j) {
            const Index kj = ((k * j) % n + n) % n;
            const double phase =
                2.0 * std::numbers::pi * (static_cast<double>(kj) / nd + static_cast<double>(k) * offset / nd);
            f(i, j) = std::polar(norm, -phase);
        }
    }
    return f;
}

Operator momentum_map(const Grid& grid) {
    return Operator(fourier_matrix(grid.n(), grid.x_min(), grid.dx()), grid);
}

Operator kinetic_operator(const Grid& grid) {
    const Matrix f = fourier_matrix(grid.n(), grid.x_min(), grid.dx());
    const RealVector p = grid.momenta();
    const Vector energies = (p.array().square() / (2.0 * grid.mass())).cast<cplx>();
    Matrix h0 = f.adjoint() * energies.asDiagonal() * f;
    // Enforce exact Hermiticity; the construction is Hermitian up to rounding.
    h0 = 0.5 * (h0 + h0.adjoint()).eval();
    return Operator(std::move(h0), grid);
}

Operator to_momentum(const Operator& op) {
    if (op.basis() == Basis::Momentum) return op;
    if (!op.grid()) throw InvalidArgument("model-space operators have no momentum representation");
    const Grid& g = *op.grid();
    const Matrix f = fourier_matrix(g.n(), g.x_min(), g.dx());
    return Operator(f * op.matrix() * f.adjoint(), g, Basis::Momentum);
}

Operator to_position(const Operator& op) {
    if (op.basis() == Basis::Position) return op;
    const Grid& g = *op.grid();
    const Matrix f = fourier_matrix(g.n(), g.x_min(), g.dx());
    return Operator(f.adjoint() * op.matrix() * f, g, Basis::Position);
}

}  // namespace nhsym
