#pragma once

#include <cmath>
#include <random>

#include "nhsym/core.hpp"
#include "nhsym/grid.hpp"
#include "nhsym/hamiltonian.hpp"

namespace nhsym::test {

inline Matrix random_matrix(Index n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) m(j, k) = scale * cplx(g(rng), g(rng));
    }
    return m;
}

inline Vector random_state(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(n);
    for (Index j = 0; j < n; ++j) v[j] = cplx(g(rng), g(rng));
    return v / v.norm();
}

/// Random density operator G G^dagger / Tr(G G^dagger).
inline Matrix random_density(Index n, std::mt19937_64& rng) {
    const Matrix g = random_matrix(n, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return Matrix(0.5 * (rho + rho.adjoint()));
}

inline Vector gaussian_state(const Grid& grid, double center, double width, double momentum = 0.0) {
    Vector psi(grid.n());
    for (Index j = 0; j < grid.n(); ++j) {
        const double s = (grid.x(j) - center) / width;
        psi[j] = std::exp(-0.5 * s * s) * std::polar(1.0, momentum * grid.x(j) / grid.hbar());
    }
    return psi / psi.norm();
}

inline PotentialSpec spec(PotentialKind kind, std::map<std::string, double> params = {}) {
    PotentialSpec s;
    s.kind = kind;
    s.parameters = std::move(params);
    return s;
}

/// Driven two-level model (Delta/2) sigma_z + (Omega sin(omega t)/2) sigma_x - i gamma |1><1|.
inline Matrix driven_two_level(double t, double delta, double omega, double freq, double loss) {
    const double rabi = omega * std::sin(freq * t);
    Matrix h(2, 2);
    h << 0.5 * delta, 0.5 * rabi, 0.5 * rabi, cplx(-0.5 * delta, -loss);
    return h;
}

}  // namespace nhsym::test
