#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "nhsym/core.hpp"
#include "nhsym/grid.hpp"

namespace nhsym {

enum class PotentialKind {
    RealGaussianWell,   // V(x) = -depth exp(-((x - center)/width)^2)
    ImaginaryLinear,    // V(x) = i slope x
    ComplexAbsorbing,   // V(x) = -i strength exp(-(x/width)^2)
    NonlocalSeparable,  // <x|V|y> = (coupling + i coupling_imag) u(x) conj(w(y))
    MatrixFile,         // entries read from CSV
    TwoLevelPT,         // [[i gamma, kappa], [kappa, -i gamma]]
};

std::string_view to_string(PotentialKind k);
std::optional<PotentialKind> parse_potential_kind(std::string_view s);

/// Potential description. Parameters not set fall back to per-kind
/// defaults; names the kind does not know are rejected.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::RealGaussianWell;
    std::map<std::string, double> parameters;
    std::filesystem::path path;  // MatrixFile only

    double get(const std::string& name) const;
};

/// Names and defaults accepted by a kind.
const std::map<std::string, double>& potential_defaults(PotentialKind k);

/// Throws InvalidArgument for unknown parameter names or bad values.
void validate(const PotentialSpec& spec);

/// Position-basis potential. TwoLevelPT has no grid representation and is
/// rejected here; use build_hamiltonian.
Operator build_potential(const PotentialSpec& spec, const Grid& grid);

/// H = H0 + V on the grid; TwoLevelPT returns the 2x2 model directly.
Operator build_hamiltonian(const Grid& grid, const PotentialSpec& spec);

/// CSV with n rows and 2n columns (Re, Im alternating). Throws InputError.
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

enum class LeftVectorRoute {
    AdjointEigensolve,  // eigenvectors of H^dagger paired by conjugated eigenvalue
    Inverse,            // rows of R^-1 (fallback when pairing is ambiguous)
};

std::string_view to_string(LeftVectorRoute r);

/// Right eigenvectors |phi_j> (unit norm) and left vectors |phihat_j>
/// scaled so that <phihat_j|phi_k> = delta_jk.
struct BiorthogonalSystem {
    Vector eigenvalues;
    Matrix right;  // columns phi_j
    Matrix left;   // columns phihat_j
    double eigvec_condition = 0.0;
    LeftVectorRoute route = LeftVectorRoute::AdjointEigensolve;
    /// ||left - (R^-1)^dagger||_F / ||left||_F between the two routes.
    double route_discrepancy = 0.0;
    /// Max distance between eig(H^dagger) and conj(eig(H)) as multisets.
    double adjoint_spectrum_distance = 0.0;
    bool pairing_ambiguous = false;

    double biorthonormality_residual() const;
    double eigen_residual(const Matrix& h) const;       // max_j ||H phi_j - E_j phi_j|| / ||H||
    double left_eigen_residual(const Matrix& h) const;  // max_j ||H^dagger phihat_j - E_j* phihat_j|| / (||H|| ||phihat_j||)
};

struct EigOptions {
    /// Refuse when cond(R) > 1/tol.
    double tol = 1e-8;
    /// Eigenvalue clusters closer than cluster_tol * ||H||_F are ambiguous.
    double cluster_tol = 1e-8;
    /// Throw DegeneracyError instead of falling back to inversion.
    bool strict_pairing = false;
};

BiorthogonalSystem biorthogonal_eig(const Matrix& h, const EigOptions& options = {});
BiorthogonalSystem biorthogonal_eig(const Operator& h, const EigOptions& options = {});

/// ||sum_j |phi_j> E_j <phihat_j| - H||_F / ||H||_F.
double resolution_residual(const BiorthogonalSystem& sys, const Matrix& h);
double resolution_residual(const BiorthogonalSystem& sys, const Operator& h);

}  // namespace nhsym
