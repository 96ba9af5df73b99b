#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "nhsym/core.hpp"
#include "nhsym/grid.hpp"

namespace nhsym {

/// Unitary or antiunitary map stored as (linear part, conjugation flag):
/// A v = L v, or A v = L conj(v) when conjugates() is set.
class AntilinearMap {
public:
    AntilinearMap(Matrix linear_part, bool conjugates);

    const Matrix& linear_part() const noexcept { return linear_; }
    bool conjugates() const noexcept { return conjugates_; }
    Index dim() const noexcept { return linear_.rows(); }

    Vector apply(const Vector& v) const;

    /// (this o other): L1 K^a L2 K^b = L1 conj^a(L2) K^(a+b).
    AntilinearMap compose(const AntilinearMap& other) const;

    /// Linear: L^dagger. Antilinear: (L K)^dagger = K L^dagger = L^T K.
    AntilinearMap adjoint() const;

    /// Operator relation residuals relative to ||H||_F.
    /// commute: ||A H - H A||, pseudo: ||A H - H^dagger A||.
    double commutation_residual(const Matrix& h) const;
    double pseudohermiticity_residual(const Matrix& h) const;

private:
    Matrix linear_;
    bool conjugates_;
};

enum class KleinElement { One, Parity, TimeReversal, ParityTimeReversal };

std::string_view to_string(KleinElement e);

/// Klein element on a grid, in the requested basis. Parity variants need a
/// symmetric grid; Parity and TimeReversal in the momentum basis need odd n.
AntilinearMap klein_element(KleinElement e, const Grid& grid, Basis basis = Basis::Position);
/// Model-space variant: parity is the index reversal of an n-level system.
AntilinearMap klein_element(KleinElement e, Index n);
/// Picks grid/basis (or model space) from the operator the map will act on.
AntilinearMap klein_element_for(KleinElement e, const Operator& like);

/// Roman-numeral codes of the eight Hamiltonian symmetries. The underlying
/// value encodes (dagger, parity, time reversal) as bits 2, 1, 0.
enum class SymmetryCode : unsigned { I = 0, V = 1, III = 2, VII = 3, II = 4, VI = 5, IV = 6, VIII = 7 };

inline constexpr std::array<SymmetryCode, 8> kAllCodes{
    SymmetryCode::I,  SymmetryCode::II, SymmetryCode::III,  SymmetryCode::IV,
    SymmetryCode::V,  SymmetryCode::VI, SymmetryCode::VII, SymmetryCode::VIII};

std::string_view to_string(SymmetryCode c);
std::optional<SymmetryCode> parse_code(std::string_view s);
/// Group product in (Z2)^3.
SymmetryCode combine(SymmetryCode a, SymmetryCode b);
bool has_dagger(SymmetryCode c);
KleinElement klein_part(SymmetryCode c);

/// L(B) = A^dagger B' A with B' = B^dagger when dagger is set. No sandwich
/// means A = 1. Never materialized as an n^2 x n^2 matrix.
struct Superoperator {
    std::optional<AntilinearMap> sandwich;
    bool dagger = false;
    /// Representation the sandwich is written in; unset means "any".
    std::optional<Basis> basis;

    bool antilinear() const;
};

Superoperator code_superoperator(SymmetryCode c, const Operator& like);
Superoperator code_superoperator(SymmetryCode c, const Grid& grid, Basis basis = Basis::Position);
Superoperator code_superoperator(SymmetryCode c, Index model_dim);

Matrix superop_apply(const Superoperator& l, const Matrix& b);
/// Throws InvalidArgument on a dimension or basis mismatch between L and B.
Operator superop_apply(const Superoperator& l, const Operator& b);

/// Rank-one operand u v^T stays rank one under every superoperator; this
/// is the O(n^2) path used for group verification.
struct OuterProduct {
    Vector left;
    Vector right;
    Matrix dense() const { return left * right.transpose(); }
};
OuterProduct superop_apply(const Superoperator& l, const OuterProduct& b);

/// Tr(F^dagger G).
cplx hs_inner(const Matrix& f, const Matrix& g);
cplx hs_inner(const Operator& f, const Operator& g);

Superoperator superop_adjoint(const Superoperator& l);

struct GroupReport {
    Index dim = 0;
    /// table[a][b] = code of L_a o L_b, or nullopt if the composite matched none.
    std::array<std::array<std::optional<SymmetryCode>, 8>, 8> table{};
    bool closed = false;
    bool commutative = false;
    bool self_inverse = false;
    bool identity_is_I = false;
    bool generated_by_dagger_parity_time = false;
    bool elementary_abelian_order_8 = false;
    double max_match_residual = 0.0;
};

/// Builds the composition table by acting on the real-spanning set
/// {E_jk, i E_jk}; antilinear superoperators are not determined by the
/// E_jk alone.
GroupReport verify_group(const Grid& grid);
GroupReport verify_group(Index model_dim);

/// | <<L rho1, L rho2>> - <<rho1, rho2>> |. rho1, rho2 must be density
/// operators (Hermitian, unit trace, PSD).
double wigner_check(const Superoperator& l, const Matrix& rho1, const Matrix& rho2);

}  // namespace nhsym
