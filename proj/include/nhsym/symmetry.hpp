#pragma once

#include <array>
#include <vector>

#include "nhsym/core.hpp"
#include "nhsym/grid.hpp"
#include "nhsym/hamiltonian.hpp"
#include "nhsym/klein.hpp"

namespace nhsym {

struct CodeResult {
    double residual = 0.0;
    bool holds = false;
};

struct SymmetryReport {
    /// Indexed in Roman order (I..VIII), see kAllCodes.
    std::array<CodeResult, 8> codes{};
    double tolerance = 1e-10;
    Basis basis = Basis::Position;
    /// Advisory: the held codes form a subgroup of (Z2)^3.
    bool subgroup_closed = true;

    const CodeResult& at(SymmetryCode c) const;
    std::vector<SymmetryCode> held() const;
};

/// For each code k: ||L_k(H) - H||_F / ||H||_F against tol. Works in the
/// operator's own basis. Throws DomainError on an asymmetric grid.
SymmetryReport classify(const Operator& h, double tol = 1e-10);

/// Matrix-element identity for `code`, evaluated entrywise in
/// `basis` (the operator is transformed first if needed). Relative
/// Frobenius residual. Momentum-basis codes involving -p (III..VI) need
/// odd n and throw UnsupportedError otherwise.
double matrix_condition_check(const Operator& v, SymmetryCode code, Basis basis);

enum class Relation { Commute, Pseudo };

const char* to_string(Relation r);

struct MappingReport {
    Relation relation = Relation::Commute;
    bool antilinear = false;
    double relation_residual = 0.0;
    /// ||(X - lambda_j) A phi_j|| / (||H|| ||A phi_j||), X = H or H^dagger.
    std::vector<double> residuals;
    double max_residual = 0.0;
    /// Multiset distance between eig(H) and its conjugate.
    double conjugation_distance = 0.0;
    /// The relation forces eig(H) to be closed under conjugation
    /// (linear pseudohermiticity or antilinear commutation).
    bool implies_conjugation_closure = false;
};

/// Throws PreconditionError when the relation residual exceeds tol.
MappingReport eigen_mapping_check(const Operator& h, const BiorthogonalSystem& sys, const AntilinearMap& a,
                                  Relation relation, double tol = 1e-10);

}  // namespace nhsym
