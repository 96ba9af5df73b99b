#include <doctest.h>

#include <random>

#include "nhsym/klein.hpp"
#include "support.hpp"

using namespace nhsym;
using C = SymmetryCode;

namespace {

Matrix unit_matrix(Index n, Index j, Index k) {
    Matrix e = Matrix::Zero(n, n);
    e(j, k) = 1.0;
    return e;
}

// A^dagger B A assembled column by column from vector actions only.
Matrix sandwich_by_vectors(const AntilinearMap& a, const Matrix& b) {
    const AntilinearMap ad = a.adjoint();
    const Index n = b.rows();
    Matrix out(n, n);
    for (Index j = 0; j < n; ++j) out.col(j) = ad.apply(b * a.apply(Vector::Unit(n, j)));
    return out;
}

}  // namespace

TEST_CASE("Klein elements act on vectors as stated") {
    const Grid g = make_grid(5, 2.0);
    std::mt19937_64 rng(3);
    const Vector v = test::random_state(5, rng);
    const auto theta = klein_element(KleinElement::TimeReversal, g);
    const auto parity = klein_element(KleinElement::Parity, g);
    const auto pt = klein_element(KleinElement::ParityTimeReversal, g);
    const auto one = klein_element(KleinElement::One, g);

    CHECK((theta.apply(v) - v.conjugate()).norm() == 0.0);
    CHECK((parity.apply(parity.apply(v)) - v).norm() == 0.0);
    CHECK((theta.apply(I_UNIT * v) - (-I_UNIT) * v.conjugate()).norm() < 1e-15);
    CHECK((one.apply(v) - v).norm() == 0.0);
    CHECK((pt.apply(v) - v.conjugate().reverse()).norm() == 0.0);

    // Mutual commutation and self-inversion.
    for (const auto& a : {one, parity, theta, pt}) {
        CHECK((a.apply(a.apply(v)) - v).norm() < 1e-15);
        for (const auto& b : {one, parity, theta, pt}) {
            CHECK((a.apply(b.apply(v)) - b.apply(a.apply(v))).norm() < 1e-15);
        }
    }
    CHECK_THROWS_AS(klein_element(KleinElement::Parity, Grid(5, -1.0, 2.0)), DomainError);
    CHECK_NOTHROW(klein_element(KleinElement::TimeReversal, Grid(5, -1.0, 2.0)));
}

TEST_CASE("momentum-basis Klein elements are the conjugated position maps") {
    const Grid g = make_grid(7, 3.0);
    const Matrix f = momentum_map(g).matrix();
    std::mt19937_64 rng(5);
    const Vector v = test::random_state(7, rng);
    for (auto e : {KleinElement::One, KleinElement::Parity, KleinElement::TimeReversal,
                   KleinElement::ParityTimeReversal}) {
        const auto pos = klein_element(e, g, Basis::Position);
        const auto mom = klein_element(e, g, Basis::Momentum);
        const Vector via_position = f * pos.apply(f.adjoint() * v);
        CHECK((mom.apply(v) - via_position).norm() < 1e-12);
    }
    CHECK_THROWS_AS(klein_element(KleinElement::Parity, make_grid(6, 3.0), Basis::Momentum), UnsupportedError);
    CHECK_NOTHROW(klein_element(KleinElement::ParityTimeReversal, make_grid(6, 3.0), Basis::Momentum));
}

TEST_CASE("AntilinearMap validates unitarity and composes by flag") {
    CHECK_THROWS_AS(AntilinearMap(Matrix::Constant(2, 2, 1.0), false), InvalidArgument);
    const AntilinearMap theta(Matrix::Identity(3, 3), true);
    const AntilinearMap phase(Matrix(I_UNIT * Matrix::Identity(3, 3)), false);
    std::mt19937_64 rng(9);
    const Vector v = test::random_state(3, rng);
    const AntilinearMap composed = theta.compose(phase);
    CHECK(composed.conjugates());
    CHECK((composed.apply(v) - theta.apply(phase.apply(v))).norm() < 1e-15);
}

TEST_CASE("standard basis oracles for L_Theta and L_Theta,dagger") {
    const Index n = 2;
    const auto l_theta = code_superoperator(C::V, n);
    const auto l_theta_dag = code_superoperator(C::VI, n);
    const auto l_one = code_superoperator(C::I, n);
    for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
            for (cplx s : {cplx(1.0), I_UNIT, cplx(0.3, -2.0)}) {
                const Matrix b = s * unit_matrix(n, j, k);
                CHECK((superop_apply(l_theta, b) - b.conjugate()).norm() == 0.0);
                CHECK((superop_apply(l_theta_dag, b) - b.transpose()).norm() == 0.0);
                CHECK((superop_apply(l_one, b) - b).norm() == 0.0);
            }
        }
    }
}

TEST_CASE("antilinear sandwich equals the vector-action definition") {
    std::mt19937_64 rng(17);
    for (Index n : {2, 3, 4}) {
        const Matrix b = test::random_matrix(n, rng);
        // A generic antiunitary: random unitary linear part times conjugation.
        Eigen::HouseholderQR<Matrix> qr(test::random_matrix(n, rng));
        const Matrix u = qr.householderQ();
        for (bool conj : {false, true}) {
            const AntilinearMap a(u, conj);
            const Superoperator l{a, false, std::nullopt};
            CHECK((superop_apply(l, b) - sandwich_by_vectors(a, b)).norm() < 1e-13);
            if (conj) {
                const Matrix formula = u.transpose() * b.conjugate() * u.conjugate();
                CHECK((superop_apply(l, b) - formula).norm() < 1e-13);
            }
        }
    }
}

TEST_CASE("scalar rule with a = i separates the antilinear codes") {
    const Grid g = make_grid(5, 1.0);
    std::mt19937_64 rng(23);
    const Matrix b = test::random_matrix(5, rng);
    for (C c : kAllCodes) {
        const auto l = code_superoperator(c, g);
        const Matrix scaled = superop_apply(l, Matrix(I_UNIT * b));
        const Matrix plain = superop_apply(l, b);
        const bool linear = (scaled - I_UNIT * plain).norm() < 1e-13;
        const bool antilinear = (scaled + I_UNIT * plain).norm() < 1e-13;
        const bool expect_anti = c == C::II || c == C::IV || c == C::V || c == C::VII;
        CHECK(antilinear == expect_anti);
        CHECK(linear == !expect_anti);
        CHECK(l.antilinear() == expect_anti);
    }
}

TEST_CASE("Hilbert-Schmidt inner product") {
    CHECK(hs_inner(Matrix::Identity(3, 3), Matrix::Identity(3, 3)) == cplx(3.0));
    Matrix flip(2, 2);
    flip << 0, 1, 1, 0;
    CHECK(hs_inner(flip, Matrix::Identity(2, 2)) == cplx(0.0));
    std::mt19937_64 rng(29);
    const Matrix f = test::random_matrix(4, rng);
    const Matrix g = test::random_matrix(4, rng);
    CHECK(std::abs(hs_inner(f, f).imag()) < 1e-14);
    CHECK(hs_inner(f, f).real() > 0.0);
    CHECK(std::abs(hs_inner(f, g) - std::conj(hs_inner(g, f))) < 1e-13);
    CHECK(std::abs(hs_inner(f, g) - (f.adjoint() * g).trace()) < 1e-12);
    CHECK_THROWS_AS(hs_inner(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), InvalidArgument);
}

TEST_CASE("superoperator adjoints satisfy the defining identity and equal inverses") {
    const Grid g = make_grid(4, 1.0);
    std::mt19937_64 rng(31);
    double worst = 0.0, inverse_worst = 0.0;
    for (C c : kAllCodes) {
        const auto l = code_superoperator(c, g);
        const auto ladj = superop_adjoint(l);
        for (int trial = 0; trial < 50; ++trial) {
            const Matrix f = test::random_matrix(4, rng);
            const Matrix gm = test::random_matrix(4, rng);
            const cplx lhs = hs_inner(f, superop_apply(ladj, gm));
            const cplx rhs = hs_inner(gm, superop_apply(l, f));
            worst = std::max(worst, std::abs(lhs - (l.antilinear() ? rhs : std::conj(rhs))));
            inverse_worst = std::max(inverse_worst, (superop_apply(ladj, superop_apply(l, f)) - f).norm());
        }
    }
    CHECK(worst < 1e-12);
    CHECK(inverse_worst < 1e-12);

    // Dagger is its own adjoint; parity is self-adjoint.
    const auto dag = superop_adjoint(code_superoperator(C::II, g));
    CHECK(dag.dagger);
    CHECK_FALSE((dag.sandwich.has_value() && dag.sandwich->conjugates()));
    std::mt19937_64 rng2(37);
    const Matrix b = test::random_matrix(4, rng2);
    const auto lp = code_superoperator(C::III, g);
    CHECK((superop_apply(superop_adjoint(lp), b) - superop_apply(lp, b)).norm() < 1e-14);
}

TEST_CASE("rank-one path agrees with the dense action") {
    const Grid g = make_grid(6, 1.0);
    std::mt19937_64 rng(41);
    const OuterProduct op{test::random_state(6, rng), test::random_state(6, rng)};
    for (C c : kAllCodes) {
        const auto l = code_superoperator(c, g);
        CHECK((superop_apply(l, op).dense() - superop_apply(l, op.dense())).norm() < 1e-14);
    }
}

TEST_CASE("superop_apply checks basis and dimension") {
    const Grid g = make_grid(5, 1.0);
    const Operator pos(Matrix::Identity(5, 5), g);
    const auto lm = code_superoperator(C::III, g, Basis::Momentum);
    CHECK_THROWS_AS(superop_apply(lm, pos), InvalidArgument);
    CHECK_NOTHROW(superop_apply(lm, to_momentum(pos)));
    CHECK_THROWS_AS(superop_apply(code_superoperator(C::III, 4), Matrix(Matrix::Identity(5, 5))), InvalidArgument);
}

TEST_CASE("composition table is (Z2)^3 at n = 3") {
    const GroupReport r = verify_group(make_grid(3, 1.0));
    CHECK(r.closed);
    CHECK(r.commutative);
    CHECK(r.self_inverse);
    CHECK(r.identity_is_I);
    CHECK(r.generated_by_dagger_parity_time);
    CHECK(r.elementary_abelian_order_8);
    CHECK(r.max_match_residual < 1e-12);
    // Oracle: bit-vector XOR of (dagger, parity, time) flags.
    auto bits = [](C c) {
        const bool dag = c == C::II || c == C::IV || c == C::VI || c == C::VIII;
        const bool par = c == C::III || c == C::IV || c == C::VII || c == C::VIII;
        const bool tim = c == C::V || c == C::VI || c == C::VII || c == C::VIII;
        return (dag ? 4 : 0) | (par ? 2 : 0) | (tim ? 1 : 0);
    };
    for (std::size_t a = 0; a < 8; ++a) {
        for (std::size_t b = 0; b < 8; ++b) {
            REQUIRE(r.table[a][b].has_value());
            CHECK(bits(*r.table[a][b]) == (bits(kAllCodes[a]) ^ bits(kAllCodes[b])));
        }
    }
    // Parity o time reversal is the combined element.
    CHECK(combine(C::III, C::V) == C::VII);
    CHECK(*r.table[2][4] == C::VII);
}

TEST_CASE("direct composition agrees with the group product") {
    const Grid g = make_grid(5, 1.0);
    std::mt19937_64 rng(43);
    const Matrix b = test::random_matrix(5, rng);
    for (C x : kAllCodes) {
        for (C y : kAllCodes) {
            const Matrix twice = superop_apply(code_superoperator(x, g), superop_apply(code_superoperator(y, g), b));
            CHECK((twice - superop_apply(code_superoperator(combine(x, y), g), b)).norm() < 1e-13);
        }
    }
}

TEST_CASE("model-space group check and code parsing") {
    CHECK(verify_group(Index{2}).elementary_abelian_order_8);
    for (C c : kAllCodes) CHECK(parse_code(to_string(c)) == c);
    CHECK_FALSE(parse_code("IX").has_value());
}

TEST_CASE("Wigner-like property") {
    const Grid g = make_grid(2, 1.0);
    const Matrix mixed = 0.5 * Matrix::Identity(2, 2);
    for (C c : kAllCodes) CHECK(wigner_check(code_superoperator(c, g), mixed, mixed) < 1e-15);

    std::mt19937_64 rng(47);
    const Grid g6 = make_grid(6, 1.0);
    const Matrix r1 = test::random_density(6, rng);
    const Matrix r2 = test::random_density(6, rng);
    CHECK(wigner_check(code_superoperator(C::V, g6), r1, r2) < 1e-12);
    CHECK(wigner_check(code_superoperator(C::IV, g6), r1, r2) < 1e-12);

    Matrix bad = mixed;
    bad(0, 1) = 0.3;
    CHECK_THROWS_AS(wigner_check(code_superoperator(C::I, g), bad, mixed), InvalidArgument);
    CHECK_THROWS_AS(wigner_check(code_superoperator(C::I, g), Matrix(2.0 * mixed), mixed), InvalidArgument);
}
