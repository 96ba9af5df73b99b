#include <doctest.h>

#include <random>

#include "nhsym/symmetry.hpp"
#include "support.hpp"

using namespace nhsym;
using test::spec;
using C = SymmetryCode;

namespace {

// Entrywise symmetry residuals in the position basis, written out index by index.
double brute_force_residual(const Matrix& h, C code) {
    const Index n = h.rows();
    auto r = [n](Index j) { return n - 1 - j; };
    Matrix t(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
            switch (code) {
                case C::I: t(j, k) = h(j, k); break;
                case C::II: t(j, k) = std::conj(h(k, j)); break;
                case C::III: t(j, k) = h(r(j), r(k)); break;
                case C::IV: t(j, k) = std::conj(h(r(k), r(j))); break;
                case C::V: t(j, k) = std::conj(h(j, k)); break;
                case C::VI: t(j, k) = h(k, j); break;
                case C::VII: t(j, k) = std::conj(h(r(j), r(k))); break;
                case C::VIII: t(j, k) = h(r(k), r(j)); break;
            }
        }
    }
    return (t - h).norm() / h.norm();
}

std::vector<C> held_by_brute_force(const Matrix& h, double tol) {
    std::vector<C> out;
    for (C c : kAllCodes) {
        if (brute_force_residual(h, c) < tol) out.push_back(c);
    }
    return out;
}

}  // namespace

TEST_CASE("Hermitian even real potential holds all eight codes") {
    const SymmetryReport r = classify(build_hamiltonian(make_grid(63, 10.0), spec(PotentialKind::RealGaussianWell)));
    CHECK(r.held().size() == 8);
    CHECK(r.at(C::I).residual == 0.0);
    for (const auto& c : r.codes) CHECK(c.residual < 1e-12);
    CHECK(r.subgroup_closed);
}

TEST_CASE("classification matches the entrywise oracle at n = 5") {
    const Grid g = make_grid(5, 2.0);
    for (const auto& s : {spec(PotentialKind::ImaginaryLinear), spec(PotentialKind::ComplexAbsorbing),
                          spec(PotentialKind::RealGaussianWell, {{"center", 0.5}}),
                          spec(PotentialKind::NonlocalSeparable, {{"u_center", 1.0}, {"coupling_imag", 0.3}})}) {
        const Operator h = build_hamiltonian(g, s);
        const SymmetryReport r = classify(h);
        CHECK(r.held() == held_by_brute_force(h.matrix(), 1e-10));
        for (std::size_t k = 0; k < 8; ++k) {
            CHECK(std::abs(r.codes[k].residual - brute_force_residual(h.matrix(), kAllCodes[k])) < 1e-12);
        }
    }
}

TEST_CASE("preset code sets") {
    const Grid g = make_grid(63, 10.0);
    // A local potential is a symmetric matrix, so the transpose code VI always holds.
    CHECK(classify(build_hamiltonian(g, spec(PotentialKind::ImaginaryLinear))).held() ==
          std::vector<C>{C::I, C::IV, C::VI, C::VII});
    CHECK(classify(build_hamiltonian(g, spec(PotentialKind::ComplexAbsorbing))).held() ==
          std::vector<C>{C::I, C::III, C::VI, C::VIII});
    // u != w breaks the transpose and parity codes of the separable kernel.
    const auto nonlocal = classify(
        build_hamiltonian(g, spec(PotentialKind::NonlocalSeparable, {{"u_center", 1.0}, {"w_center", -0.5}})));
    CHECK(nonlocal.held() == std::vector<C>{C::I, C::V});
}

TEST_CASE("classification is basis independent for odd n") {
    const Grid g = make_grid(31, 8.0);
    for (const auto& s : {spec(PotentialKind::RealGaussianWell), spec(PotentialKind::ImaginaryLinear),
                          spec(PotentialKind::ComplexAbsorbing), spec(PotentialKind::NonlocalSeparable),
                          spec(PotentialKind::NonlocalSeparable, {{"u_center", 1.0}, {"coupling_imag", 0.4}}),
                          spec(PotentialKind::RealGaussianWell, {{"center", 1.0}})}) {
        const Operator h = build_hamiltonian(g, s);
        const SymmetryReport pos = classify(h);
        const SymmetryReport mom = classify(to_momentum(h));
        CHECK(mom.basis == Basis::Momentum);
        CHECK(pos.held() == mom.held());
        for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(pos.codes[k].residual - mom.codes[k].residual) < 1e-10);
    }
}

TEST_CASE("held codes always form a subgroup") {
    const Grid g = make_grid(15, 4.0);
    for (const auto& s : {spec(PotentialKind::ImaginaryLinear), spec(PotentialKind::ComplexAbsorbing),
                          spec(PotentialKind::NonlocalSeparable, {{"u_center", 0.7}})}) {
        const SymmetryReport r = classify(build_hamiltonian(g, s));
        CHECK(r.subgroup_closed);
        const auto held = r.held();
        for (C a : held) {
            for (C b : held) CHECK(std::find(held.begin(), held.end(), combine(a, b)) != held.end());
        }
    }
}

TEST_CASE("classify agrees with superoperator invariance") {
    const Grid g = make_grid(9, 3.0);
    const Operator h = build_hamiltonian(g, spec(PotentialKind::ImaginaryLinear, {{"slope", 0.4}}));
    const SymmetryReport r = classify(h);
    for (std::size_t k = 0; k < 8; ++k) {
        const Matrix t = superop_apply(code_superoperator(kAllCodes[k], g), h.matrix());
        CHECK(r.codes[k].holds == (relative_frobenius(t, h.matrix()) < 1e-10));
    }
    CHECK_THROWS_AS(classify(Operator(Matrix::Identity(5, 5), Grid(5, -1.0, 2.0))), DomainError);
}

TEST_CASE("matrix-element conditions") {
    const Grid g = make_grid(31, 6.0);
    std::mt19937_64 rng(8);
    Matrix herm = test::random_matrix(31, rng);
    herm = Matrix(herm + herm.adjoint());
    CHECK(matrix_condition_check(Operator(herm, g), C::II, Basis::Position) < 1e-15);

    const Operator vix = build_potential(spec(PotentialKind::ImaginaryLinear), g);
    CHECK(matrix_condition_check(vix, C::VII, Basis::Momentum) < 1e-12);
    CHECK(matrix_condition_check(vix, C::VII, Basis::Position) < 1e-12);

    // Position-basis entrywise check equals the operator-relation residual.
    const Operator h = build_hamiltonian(g, spec(PotentialKind::NonlocalSeparable, {{"u_center", 1.0},
                                                                                    {"coupling_imag", 0.2}}));
    const SymmetryReport r = classify(h);
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(std::abs(matrix_condition_check(h, kAllCodes[k], Basis::Position) - r.codes[k].residual) < 1e-12);
        CHECK(std::abs(matrix_condition_check(h, kAllCodes[k], Basis::Momentum) - r.codes[k].residual) < 1e-10);
    }

    const Operator even(Matrix::Identity(6, 6), make_grid(6, 1.0));
    for (C c : {C::III, C::IV, C::V, C::VI}) CHECK_THROWS_AS(matrix_condition_check(even, c, Basis::Momentum), UnsupportedError);
    for (C c : {C::I, C::II, C::VII, C::VIII}) CHECK_NOTHROW(matrix_condition_check(even, c, Basis::Momentum));
}

TEST_CASE("eigenvalue mapping") {
    SUBCASE("Hermitian even Hamiltonian commutes with parity") {
        const Grid g = make_grid(31, 8.0);
        const Operator h = build_hamiltonian(g, spec(PotentialKind::RealGaussianWell));
        const auto sys = biorthogonal_eig(h);
        const auto rep = eigen_mapping_check(h, sys, klein_element(KleinElement::Parity, g), Relation::Commute);
        CHECK(rep.max_residual < 1e-8);
        CHECK_FALSE(rep.antilinear);
    }
    SUBCASE("V = i x: parity pseudohermiticity and PT commutation") {
        const Grid g = make_grid(63, 10.0);
        const Operator h = build_hamiltonian(g, spec(PotentialKind::ImaginaryLinear, {{"slope", 0.1}}));
        const auto sys = biorthogonal_eig(h);
        const auto iv = eigen_mapping_check(h, sys, klein_element(KleinElement::Parity, g), Relation::Pseudo);
        CHECK(iv.max_residual < 1e-8);
        CHECK(iv.implies_conjugation_closure);
        const auto vii =
            eigen_mapping_check(h, sys, klein_element(KleinElement::ParityTimeReversal, g), Relation::Commute);
        CHECK(vii.antilinear);
        CHECK(vii.max_residual < 1e-8);
        CHECK(vii.conjugation_distance < 1e-8);
        CHECK_THROWS_AS(eigen_mapping_check(h, sys, klein_element(KleinElement::Parity, g), Relation::Commute),
                        PreconditionError);
    }
    SUBCASE("antilinear pseudohermiticity does not force conjugate pairs") {
        // Absorbing potential holds VI and VIII, yet every eigenvalue decays.
        const Grid g = make_grid(31, 8.0);
        const Operator h = build_hamiltonian(g, spec(PotentialKind::ComplexAbsorbing));
        const auto sys = biorthogonal_eig(h);
        const auto vi =
            eigen_mapping_check(h, sys, klein_element(KleinElement::TimeReversal, g), Relation::Pseudo);
        CHECK(vi.max_residual < 1e-8);
        CHECK_FALSE(vi.implies_conjugation_closure);
        CHECK(vi.conjugation_distance > 1e-3);
        CHECK(sys.eigenvalues.imag().maxCoeff() < 0.0);
    }
}

TEST_CASE("two-level model classification") {
    const Operator h =
        build_hamiltonian(make_grid(3, 1.0), spec(PotentialKind::TwoLevelPT, {{"gamma", 0.5}, {"kappa", 1.0}}));
    const auto r = classify(h);
    CHECK(r.at(C::IV).holds);
    CHECK(r.at(C::VII).holds);
    CHECK_FALSE(r.at(C::II).holds);
}
