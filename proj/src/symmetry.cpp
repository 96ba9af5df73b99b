#include "nhsym/symmetry.hpp"

#include <algorithm>
#include <string>

#include "nhsym/linalg.hpp"

namespace nhsym {

namespace {

std::size_t slot(SymmetryCode c) {
    return static_cast<std::size_t>(std::find(kAllCodes.begin(), kAllCodes.end(), c) - kAllCodes.begin());
}

bool needs_momentum_reversal(SymmetryCode c) {
    return c == SymmetryCode::III || c == SymmetryCode::IV || c == SymmetryCode::V || c == SymmetryCode::VI;
}

// Entrywise symmetry transform T(V)_{jk}; r(j) = n - 1 - j.
Matrix table_transform(const Matrix& v, SymmetryCode code, Basis basis) {
    const Index n = v.rows();
    Matrix out(n, n);
    auto r = [n](Index j) { return n - 1 - j; };
    for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
            cplx value;
            if (basis == Basis::Position) {
                switch (code) {
                    case SymmetryCode::I: value = v(j, k); break;
                    case SymmetryCode::II: value = std::conj(v(k, j)); break;
                    case SymmetryCode::III: value = v(r(j), r(k)); break;
                    case SymmetryCode::IV: value = std::conj(v(r(k), r(j))); break;
                    case SymmetryCode::V: value = std::conj(v(j, k)); break;
                    case SymmetryCode::VI: value = v(k, j); break;
                    case SymmetryCode::VII: value = std::conj(v(r(j), r(k))); break;
                    case SymmetryCode::VIII: value = v(r(k), r(j)); break;
                }
            } else {
                switch (code) {
                    case SymmetryCode::I: value = v(j, k); break;
                    case SymmetryCode::II: value = std::conj(v(k, j)); break;
                    case SymmetryCode::III: value = v(r(j), r(k)); break;
                    case SymmetryCode::IV: value = std::conj(v(r(k), r(j))); break;
                    case SymmetryCode::V: value = std::conj(v(r(j), r(k))); break;
                    case SymmetryCode::VI: value = v(r(k), r(j)); break;
                    case SymmetryCode::VII: value = std::conj(v(j, k)); break;
                    case SymmetryCode::VIII: value = v(k, j); break;
                }
            }
            out(j, k) = value;
        }
    }
    return out;
}

}  // namespace

const CodeResult& SymmetryReport::at(SymmetryCode c) const { return codes[slot(c)]; }

std::vector<SymmetryCode> SymmetryReport::held() const {
    std::vector<SymmetryCode> out;
    for (std::size_t i = 0; i < 8; ++i) {
        if (codes[i].holds) out.push_back(kAllCodes[i]);
    }
    return out;
}

SymmetryReport classify(const Operator& h, double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("classify: tolerance must be positive");
    if (h.grid() && !h.grid()->symmetric()) {
        throw DomainError("symmetry classification needs a symmetric grid");
    }
    SymmetryReport report;
    report.tolerance = tol;
    report.basis = h.basis();
    for (std::size_t i = 0; i < 8; ++i) {
        const SymmetryCode c = kAllCodes[i];
        double residual = 0.0;
        if (c != SymmetryCode::I) {
            const Matrix image = superop_apply(code_superoperator(c, h), h.matrix());
            residual = relative_frobenius(image, h.matrix());
        }
        report.codes[i] = {residual, residual < tol};
    }
    for (std::size_t a = 0; a < 8; ++a) {
        for (std::size_t b = 0; b < 8; ++b) {
            if (report.codes[a].holds && report.codes[b].holds &&
                !report.at(combine(kAllCodes[a], kAllCodes[b])).holds) {
                report.subgroup_closed = false;
            }
        }
    }
    return report;
}

double matrix_condition_check(const Operator& v, SymmetryCode code, Basis basis) {
    if (v.grid() && !v.grid()->symmetric()) {
        throw DomainError("matrix-element conditions need a symmetric grid");
    }
    if (basis == Basis::Momentum && needs_momentum_reversal(code) && v.dim() % 2 == 0) {
        throw UnsupportedError("momentum-basis code " + std::string(to_string(code)) +
                               " needs odd n (Nyquist slot has no -p partner)");
    }
    const Operator in_basis = basis == Basis::Momentum ? to_momentum(v) : to_position(v);
    const Matrix& m = in_basis.matrix();
    return relative_frobenius(table_transform(m, code, basis), m);
}

const char* to_string(Relation r) { return r == Relation::Commute ? "commute" : "pseudo"; }

MappingReport eigen_mapping_check(const Operator& h, const BiorthogonalSystem& sys, const AntilinearMap& a,
                                  Relation relation, double tol) {
    const Matrix& hm = h.matrix();
    if (a.dim() != h.dim() || sys.right.rows() != h.dim()) {
        throw InvalidArgument("eigen_mapping_check: dimension mismatch");
    }
    MappingReport report;
    report.relation = relation;
    report.antilinear = a.conjugates();
    report.relation_residual =
        relation == Relation::Commute ? a.commutation_residual(hm) : a.pseudohermiticity_residual(hm);
    if (!(report.relation_residual <= tol)) {
        throw PreconditionError(std::string("relation '") + to_string(relation) + "' does not hold: residual " +
                                std::to_string(report.relation_residual) + " > " + std::to_string(tol));
    }

    // Commute: A phi_j is a right eigenvector of H with E_j (linear) or E_j* (antilinear).
    // Pseudo:  A phi_j is a right eigenvector of H^dagger with E_j (linear) or E_j* (antilinear).
    const Matrix target = relation == Relation::Commute ? hm : Matrix(hm.adjoint());
    const double scale = hm.norm();
    report.residuals.reserve(static_cast<std::size_t>(sys.eigenvalues.size()));
    for (Index j = 0; j < sys.eigenvalues.size(); ++j) {
        const cplx lambda = a.conjugates() ? std::conj(sys.eigenvalues[j]) : sys.eigenvalues[j];
        const Vector mapped = a.apply(sys.right.col(j));
        const double res = (target * mapped - lambda * mapped).norm() / (scale * mapped.norm());
        report.residuals.push_back(res);
        report.max_residual = std::max(report.max_residual, res);
    }
    report.conjugation_distance = multiset_distance(sys.eigenvalues, sys.eigenvalues.conjugate());
    report.implies_conjugation_closure = (relation == Relation::Commute) == a.conjugates();
    return report;
}

}  // namespace nhsym
