#pragma once

#include <optional>

#include "nhsym/core.hpp"

namespace nhsym {

/// Uniform 1-D grid with both endpoints included.
///
/// Points are x_j = (x_min (n-1-j) + x_max j) / (n-1), which makes
/// x_j == -x_{n-1-j} bit-exact whenever x_min == -x_max.
class Grid {
public:
    Grid(Index n, double x_min, double x_max, double hbar = 1.0, double mass = 1.0);

    Index n() const noexcept { return n_; }
    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    double dx() const noexcept { return dx_; }
    double hbar() const noexcept { return hbar_; }
    double mass() const noexcept { return mass_; }

    bool symmetric() const noexcept { return x_min_ == -x_max_; }

    double x(Index j) const;
    RealVector points() const;
    /// p_k = hbar 2 pi k / (n dx), k = -floor(n/2) .. ceil(n/2)-1.
    RealVector momenta() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    Index n_;
    double x_min_;
    double x_max_;
    double dx_;
    double hbar_;
    double mass_;
};

/// Symmetric grid on [-x_max, x_max].
Grid make_grid(Index n, double x_max, double hbar = 1.0, double mass = 1.0);

enum class Basis { Position, Momentum };

const char* to_string(Basis b);

/// Dense complex matrix tagged with its representation.
///
/// Grid-backed operators have dimension grid.n(). Model-space operators
/// (e.g. two-level PT models) carry no grid; their "parity" is still the
/// index reversal and their basis is Position.
class Operator {
public:
    Operator(Matrix m, const Grid& grid, Basis basis = Basis::Position);
    static Operator model(Matrix m, double hbar = 1.0);

    const Matrix& matrix() const noexcept { return matrix_; }
    Basis basis() const noexcept { return basis_; }
    const std::optional<Grid>& grid() const noexcept { return grid_; }
    double hbar() const noexcept { return hbar_; }
    Index dim() const noexcept { return matrix_.rows(); }

    /// Same grid, basis and hbar; new entries.
    Operator with_matrix(Matrix m) const;
    Operator adjoint() const { return with_matrix(matrix_.adjoint()); }

    bool compatible_with(const Operator& other) const;

private:
    Operator() = default;

    Matrix matrix_;
    Basis basis_ = Basis::Position;
    std::optional<Grid> grid_;
    double hbar_ = 1.0;
};

/// Index reversal permutation (Pi|x> = |-x>). Throws DomainError if the
/// grid is not symmetric.
Operator parity_matrix(const Grid& grid);
Matrix reversal_matrix(Index n);

/// Unitary DFT, F_{kj} = exp(-i p_k x_j / hbar) / sqrt(n). The phase is
/// hbar-independent because p_k carries the hbar factor.
Matrix fourier_matrix(Index n, double x_min, double dx);
Operator momentum_map(const Grid& grid);

/// H0 = F^dagger diag(p^2 / 2m) F in the position basis.
Operator kinetic_operator(const Grid& grid);

Operator to_momentum(const Operator& op);
Operator to_position(const Operator& op);

}  // namespace nhsym
