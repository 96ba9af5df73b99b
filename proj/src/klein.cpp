#include "nhsym/klein.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

namespace nhsym {

namespace {

constexpr unsigned kDaggerBit = 4;
constexpr unsigned kParityBit = 2;
constexpr unsigned kTimeBit = 1;

constexpr std::array<std::string_view, 8> kRoman{"I", "II", "III", "IV", "V", "VI", "VII", "VIII"};

std::size_t roman_index(SymmetryCode c) {
    return static_cast<std::size_t>(std::find(kAllCodes.begin(), kAllCodes.end(), c) - kAllCodes.begin());
}

Matrix maybe_conj(const Matrix& m, bool conj) { return conj ? Matrix(m.conjugate()) : m; }

}  // namespace

AntilinearMap::AntilinearMap(Matrix linear_part, bool conjugates)
    : linear_(std::move(linear_part)), conjugates_(conjugates) {
    if (linear_.rows() != linear_.cols() || linear_.rows() == 0) {
        throw InvalidArgument("antilinear map needs a non-empty square linear part");
    }
    const double unitarity =
        (linear_.adjoint() * linear_ - Matrix::Identity(linear_.rows(), linear_.cols())).norm();
    if (unitarity > 1e-10 * std::sqrt(static_cast<double>(linear_.rows()))) {
        throw InvalidArgument("linear part of an (anti)unitary map must be unitary");
    }
}

Vector AntilinearMap::apply(const Vector& v) const {
    if (v.size() != dim()) throw InvalidArgument("AntilinearMap::apply: dimension mismatch");
    return conjugates_ ? Vector(linear_ * v.conjugate()) : Vector(linear_ * v);
}

AntilinearMap AntilinearMap::compose(const AntilinearMap& other) const {
    if (other.dim() != dim()) throw InvalidArgument("AntilinearMap::compose: dimension mismatch");
    return AntilinearMap(linear_ * maybe_conj(other.linear_, conjugates_), conjugates_ != other.conjugates_);
}

AntilinearMap AntilinearMap::adjoint() const {
    return conjugates_ ? AntilinearMap(linear_.transpose(), true) : AntilinearMap(linear_.adjoint(), false);
}

double AntilinearMap::commutation_residual(const Matrix& h) const {
    if (h.rows() != dim()) throw InvalidArgument("commutation_residual: dimension mismatch");
    // A H v = L conj^c(H) conj^c(v), H A v = H L conj^c(v).
    const double scale = h.norm();
    const double diff = (linear_ * maybe_conj(h, conjugates_) - h * linear_).norm();
    return scale > 0.0 ? diff / scale : diff;
}

double AntilinearMap::pseudohermiticity_residual(const Matrix& h) const {
    if (h.rows() != dim()) throw InvalidArgument("pseudohermiticity_residual: dimension mismatch");
    const double scale = h.norm();
    const double diff = (linear_ * maybe_conj(h, conjugates_) - h.adjoint() * linear_).norm();
    return scale > 0.0 ? diff / scale : diff;
}

std::string_view to_string(KleinElement e) {
    switch (e) {
        case KleinElement::One: return "1";
        case KleinElement::Parity: return "Pi";
        case KleinElement::TimeReversal: return "Theta";
        case KleinElement::ParityTimeReversal: return "PiTheta";
    }
    return "?";
}

AntilinearMap klein_element(KleinElement e, const Grid& grid, Basis basis) {
    const Index n = grid.n();
    const bool needs_parity = e == KleinElement::Parity || e == KleinElement::ParityTimeReversal;
    if (needs_parity && !grid.symmetric()) {
        throw DomainError("parity is undefined on an asymmetric grid");
    }
    const Matrix id = Matrix::Identity(n, n);
    if (basis == Basis::Position) {
        switch (e) {
            case KleinElement::One: return {id, false};
            case KleinElement::Parity: return {reversal_matrix(n), false};
            case KleinElement::TimeReversal: return {id, true};
            case KleinElement::ParityTimeReversal: return {reversal_matrix(n), true};
        }
    }
    // Momentum basis: Pi maps p -> -p, Theta maps psi(p) -> conj(psi(-p)),
    // and Pi Theta is plain conjugation.
    const bool needs_p_reversal = e == KleinElement::Parity || e == KleinElement::TimeReversal;
    if (needs_p_reversal && n % 2 == 0) {
        throw UnsupportedError("momentum-basis reversal needs odd n (Nyquist slot has no -p partner)");
    }
    switch (e) {
        case KleinElement::One: return {id, false};
        case KleinElement::Parity: return {reversal_matrix(n), false};
        case KleinElement::TimeReversal: return {reversal_matrix(n), true};
        case KleinElement::ParityTimeReversal: return {id, true};
    }
    throw InvalidArgument("unknown Klein element");
}

AntilinearMap klein_element(KleinElement e, Index n) {
    const Matrix id = Matrix::Identity(n, n);
    switch (e) {
        case KleinElement::One: return {id, false};
        case KleinElement::Parity: return {reversal_matrix(n), false};
        case KleinElement::TimeReversal: return {id, true};
        case KleinElement::ParityTimeReversal: return {reversal_matrix(n), true};
    }
    throw InvalidArgument("unknown Klein element");
}

AntilinearMap klein_element_for(KleinElement e, const Operator& like) {
    if (like.grid()) return klein_element(e, *like.grid(), like.basis());
    return klein_element(e, like.dim());
}

std::string_view to_string(SymmetryCode c) { return kRoman[roman_index(c)]; }

std::optional<SymmetryCode> parse_code(std::string_view s) {
    for (std::size_t i = 0; i < kRoman.size(); ++i) {
        if (kRoman[i] == s) return kAllCodes[i];
    }
    return std::nullopt;
}

SymmetryCode combine(SymmetryCode a, SymmetryCode b) {
    return static_cast<SymmetryCode>(static_cast<unsigned>(a) ^ static_cast<unsigned>(b));
}

bool has_dagger(SymmetryCode c) { return (static_cast<unsigned>(c) & kDaggerBit) != 0; }

KleinElement klein_part(SymmetryCode c) {
    const auto bits = static_cast<unsigned>(c);
    const bool parity = (bits & kParityBit) != 0;
    const bool time = (bits & kTimeBit) != 0;
    if (parity && time) return KleinElement::ParityTimeReversal;
    if (parity) return KleinElement::Parity;
    if (time) return KleinElement::TimeReversal;
    return KleinElement::One;
}

bool Superoperator::antilinear() const {
    const bool sandwich_anti = sandwich && sandwich->conjugates();
    return sandwich_anti != dagger;
}

namespace {

Superoperator make_code_superop(SymmetryCode c, const std::function<AntilinearMap(KleinElement)>& element) {
    Superoperator l;
    l.dagger = has_dagger(c);
    const KleinElement k = klein_part(c);
    if (k != KleinElement::One) l.sandwich = element(k);
    return l;
}

}  // namespace

Superoperator code_superoperator(SymmetryCode c, const Operator& like) {
    Superoperator l = make_code_superop(c, [&](KleinElement k) { return klein_element_for(k, like); });
    l.basis = like.basis();
    return l;
}

Superoperator code_superoperator(SymmetryCode c, const Grid& grid, Basis basis) {
    Superoperator l = make_code_superop(c, [&](KleinElement k) { return klein_element(k, grid, basis); });
    l.basis = basis;
    return l;
}

Superoperator code_superoperator(SymmetryCode c, Index model_dim) {
    return make_code_superop(c, [&](KleinElement k) { return klein_element(k, model_dim); });
}

Matrix superop_apply(const Superoperator& l, const Matrix& b) {
    if (b.rows() != b.cols()) throw InvalidArgument("superop_apply: operand must be square");
    if (l.sandwich && l.sandwich->dim() != b.rows()) {
        throw InvalidArgument("superop_apply: superoperator and operand dimensions differ");
    }
    Matrix out = l.dagger ? Matrix(b.adjoint()) : b;
    if (l.sandwich) {
        const Matrix& lin = l.sandwich->linear_part();
        if (l.sandwich->conjugates()) {
            // A = L K: A^dagger B A = L^T conj(B) conj(L).
            out = lin.transpose() * out.conjugate() * lin.conjugate();
        } else {
            out = lin.adjoint() * out * lin;
        }
    }
    return out;
}

Operator superop_apply(const Superoperator& l, const Operator& b) {
    if (l.basis && *l.basis != b.basis()) {
        throw InvalidArgument(std::string("superop_apply: superoperator is in the ") + to_string(*l.basis) +
                              " basis, operand in the " + to_string(b.basis()));
    }
    return b.with_matrix(superop_apply(l, b.matrix()));
}

OuterProduct superop_apply(const Superoperator& l, const OuterProduct& b) {
    if (b.left.size() != b.right.size()) throw InvalidArgument("superop_apply: ragged outer product");
    if (l.sandwich && l.sandwich->dim() != b.left.size()) {
        throw InvalidArgument("superop_apply: superoperator and operand dimensions differ");
    }
    // (u v^T)^dagger = conj(v) conj(u)^T.
    OuterProduct out = l.dagger ? OuterProduct{b.right.conjugate(), b.left.conjugate()} : b;
    if (l.sandwich) {
        const Matrix& lin = l.sandwich->linear_part();
        if (l.sandwich->conjugates()) {
            // L^T conj(u v^T) conj(L) = (L^T conj u)(L^dagger conj v)^T.
            out = {lin.transpose() * out.left.conjugate(), lin.adjoint() * out.right.conjugate()};
        } else {
            // L^dagger u v^T L = (L^dagger u)(L^T v)^T.
            out = {lin.adjoint() * out.left, lin.transpose() * out.right};
        }
    }
    return out;
}

cplx hs_inner(const Matrix& f, const Matrix& g) {
    if (f.rows() != g.rows() || f.cols() != g.cols()) {
        throw InvalidArgument("hs_inner: dimension mismatch");
    }
    return (f.conjugate().array() * g.array()).sum();
}

cplx hs_inner(const Operator& f, const Operator& g) { return hs_inner(f.matrix(), g.matrix()); }

Superoperator superop_adjoint(const Superoperator& l) {
    Superoperator adj;
    adj.dagger = l.dagger;
    adj.basis = l.basis;
    if (l.sandwich) adj.sandwich = l.sandwich->adjoint();
    return adj;
}

namespace {

// ||a b^T - c d^T||_F via <<a b^T, c d^T>> = (a^dagger c)(b^dagger d).
double outer_distance(const OuterProduct& x, const OuterProduct& y) {
    const double xx = x.left.squaredNorm() * x.right.squaredNorm();
    const double yy = y.left.squaredNorm() * y.right.squaredNorm();
    const cplx xy = x.left.dot(y.left) * x.right.dot(y.right);
    return std::sqrt(std::max(0.0, xx + yy - 2.0 * xy.real()));
}

GroupReport build_group_report(Index n, const std::function<Superoperator(SymmetryCode)>& make) {
    GroupReport report;
    report.dim = n;

    std::array<Superoperator, 8> ops;
    for (std::size_t i = 0; i < 8; ++i) ops[i] = make(kAllCodes[i]);

    // Real-spanning probe set {E_jk, i E_jk}, kept in outer-product form.
    std::vector<OuterProduct> probes;
    probes.reserve(static_cast<std::size_t>(2 * n * n));
    for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
            OuterProduct e{Vector::Unit(n, j), Vector::Unit(n, k)};
            probes.push_back(e);
            e.left *= I_UNIT;
            probes.push_back(e);
        }
    }

    // worst[a][b][c] = max over probes of ||L_a L_b E - L_c E||_F.
    std::array<std::array<std::array<double, 8>, 8>, 8> worst{};
    std::array<OuterProduct, 8> images;
    for (const auto& probe : probes) {
        for (std::size_t i = 0; i < 8; ++i) images[i] = superop_apply(ops[i], probe);
        for (std::size_t b = 0; b < 8; ++b) {
            for (std::size_t a = 0; a < 8; ++a) {
                const OuterProduct composite = superop_apply(ops[a], images[b]);
                for (std::size_t c = 0; c < 8; ++c) {
                    const double d = outer_distance(composite, images[c]);
                    worst[a][b][c] = std::max(worst[a][b][c], d);
                }
            }
        }
    }

    constexpr double match_tol = 1e-12;
    report.closed = true;
    for (std::size_t a = 0; a < 8; ++a) {
        for (std::size_t b = 0; b < 8; ++b) {
            std::optional<SymmetryCode> match;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < 8; ++c) {
                if (worst[a][b][c] < match_tol && worst[a][b][c] < best) {
                    best = worst[a][b][c];
                    match = kAllCodes[c];
                }
            }
            report.table[a][b] = match;
            if (match) {
                report.max_match_residual = std::max(report.max_match_residual, best);
            } else {
                report.closed = false;
            }
        }
    }

    report.commutative = true;
    report.self_inverse = true;
    for (std::size_t a = 0; a < 8; ++a) {
        for (std::size_t b = 0; b < 8; ++b) {
            if (report.table[a][b] != report.table[b][a]) report.commutative = false;
        }
        if (report.table[a][a] != SymmetryCode::I) report.self_inverse = false;
    }

    report.identity_is_I = true;
    for (std::size_t a = 0; a < 8; ++a) {
        if (report.table[0][a] != kAllCodes[a] || report.table[a][0] != kAllCodes[a]) {
            report.identity_is_I = false;
        }
    }

    if (report.closed) {
        // Closure of {II, III, V} = {L_dagger, L_Pi, L_Theta} under the table.
        std::set<std::size_t> reached{0};
        const std::array<std::size_t, 3> generators{roman_index(SymmetryCode::II), roman_index(SymmetryCode::III),
                                                    roman_index(SymmetryCode::V)};
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t r : std::set<std::size_t>(reached)) {
                for (std::size_t g : generators) {
                    const auto prod = roman_index(*report.table[r][g]);
                    if (reached.insert(prod).second) grew = true;
                }
            }
        }
        report.generated_by_dagger_parity_time = reached.size() == 8;
    }

    report.elementary_abelian_order_8 =
        report.closed && report.commutative && report.self_inverse && report.identity_is_I;
    return report;
}

}  // namespace

GroupReport verify_group(const Grid& grid) {
    if (!grid.symmetric()) throw DomainError("group verification needs a symmetric grid");
    return build_group_report(grid.n(), [&](SymmetryCode c) { return code_superoperator(c, grid); });
}

GroupReport verify_group(Index model_dim) {
    return build_group_report(model_dim, [&](SymmetryCode c) { return code_superoperator(c, model_dim); });
}

namespace {

void require_density(const Matrix& rho, const char* name) {
    const double scale = std::max(1.0, rho.norm());
    if ((rho - rho.adjoint()).norm() > 1e-12 * scale) {
        throw InvalidArgument(std::string(name) + " is not Hermitian");
    }
    if (std::abs(rho.trace() - cplx(1.0)) > 1e-10) {
        throw InvalidArgument(std::string(name) + " does not have unit trace");
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12 * scale) {
        throw InvalidArgument(std::string(name) + " is not positive semidefinite");
    }
}

}  // namespace

double wigner_check(const Superoperator& l, const Matrix& rho1, const Matrix& rho2) {
    require_density(rho1, "rho1");
    require_density(rho2, "rho2");
    const cplx before = hs_inner(rho1, rho2);
    if (std::abs(before.imag()) > 1e-12) {
        throw PreconditionError("<<rho1, rho2>> is not real");
    }
    const cplx after = hs_inner(superop_apply(l, rho1), superop_apply(l, rho2));
    return std::abs(after - before);
}

}  // namespace nhsym
