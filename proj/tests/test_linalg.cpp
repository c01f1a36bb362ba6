#include "support.hpp"
#include "oracles.hpp"

#include "pmbell/model.hpp"

using namespace pmbell;
using pmbell::test::max_abs_diff;

TEST_CASE("pauli letter products carry the right phases") {
    auto xy = multiply(Pauli::X, Pauli::Y);
    CHECK(xy.letter == Pauli::Z);
    CHECK(xy.phase == Complex{0, 1});
    auto yx = multiply(Pauli::Y, Pauli::X);
    CHECK(yx.phase == Complex{0, -1});
    auto zz = multiply(Pauli::Z, Pauli::Z);
    CHECK(zz.letter == Pauli::I);
    CHECK(zz.phase == Complex{1, 0});

    // matrix-level agreement for all 16 pairs
    for (Pauli a : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z})
        for (Pauli b : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}) {
            ScaledPauli sp = multiply(a, b);
            Matrix lhs = pauli_matrix(a) * pauli_matrix(b);
            Matrix rhs = sp.phase * pauli_matrix(sp.letter);
            CHECK(max_abs_diff(lhs, rhs) < 1e-15);
        }
}

TEST_CASE("tensor_embed matches hand values on 2 qubits") {
    Matrix z1 = tensor_embed(PauliWord{"Z"}, {1}, 2);
    Matrix expected(4, 4);
    expected.setZero();
    expected.diagonal() << 1, 1, -1, -1;
    CHECK(max_abs_diff(z1, expected) < 1e-15);

    Matrix zz = tensor_embed(PauliWord{"ZZ"}, {1, 2}, 2);
    expected.diagonal() << 1, -1, -1, 1;
    CHECK(max_abs_diff(zz, expected) < 1e-15);
}

TEST_CASE("tensor_embed matches the naive 4-fold Kronecker oracle") {
    Matrix xx = tensor_embed(PauliWord{"XX"}, {1, 2}, 4);
    CHECK(max_abs_diff(xx, oracle::kron4(Pauli::X, Pauli::X, Pauli::I, Pauli::I)) < 1e-15);

    Matrix yz = tensor_embed(PauliWord{"YZ"}, {2, 4}, 4);
    CHECK(max_abs_diff(yz, oracle::kron4(Pauli::I, Pauli::Y, Pauli::I, Pauli::Z)) < 1e-15);

    // slot order is qubit order, not argument order
    Matrix zy = tensor_embed(PauliWord{"ZY"}, {4, 2}, 4);
    CHECK(max_abs_diff(zy, yz) < 1e-15);
}

TEST_CASE("tensor_embed rejects bad slots") {
    CHECK_THROWS_AS(tensor_embed(PauliWord{"X"}, {0}, 2), std::invalid_argument);
    CHECK_THROWS_AS(tensor_embed(PauliWord{"X"}, {3}, 2), std::invalid_argument);
    CHECK_THROWS_AS(tensor_embed(PauliWord{"XX"}, {1, 1}, 2), std::invalid_argument);
    CHECK_THROWS_AS(tensor_embed(PauliWord{"XX"}, {1}, 2), std::invalid_argument);
}

TEST_CASE("embedding respects Pauli word products") {
    // same-slot pairs: embed(w1) * embed(w2) = phase * embed(w1 w2), checked
    // over all pairs of the nine registered observables
    for (Obs o1 : kAllObs)
        for (Obs o2 : kAllObs) {
            PauliWord w1 = word_of(o1), w2 = word_of(o2);
            ScaledWord prod = multiply(w1, w2);
            Matrix lhs = tensor_embed(w1, {1, 2}, 4) * tensor_embed(w2, {1, 2}, 4);
            Matrix rhs = prod.phase * tensor_embed(prod.word, {1, 2}, 4);
            CHECK(max_abs_diff(lhs, rhs) < kAlgebraTol);
        }
    // disjoint slots commute and compose to the joint embedding
    for (Obs o1 : kAllObs)
        for (Obs o2 : kBobSettings) {
            Matrix a = alice_observable(o1);
            Matrix b = bob_observable(o2);
            CHECK(max_abs_diff(a * b, b * a) < kAlgebraTol);
            PauliWord joint;
            for (Pauli p : word_of(o1).letters) joint.letters.push_back(p);
            for (Pauli p : word_of(o2).letters) joint.letters.push_back(p);
            CHECK(max_abs_diff(a * b, tensor_embed(joint, {1, 2, 3, 4}, 4)) < kAlgebraTol);
        }
}

TEST_CASE("dichotomic projectors: hand values and algebra") {
    Matrix z = pauli_matrix(Pauli::Z);
    ProjectorPair pz = dichotomic_projectors(z);
    Matrix plus(2, 2), minus(2, 2);
    plus << 1, 0, 0, 0;
    minus << 0, 0, 0, 1;
    CHECK(max_abs_diff(pz.plus, plus) < 1e-15);
    CHECK(max_abs_diff(pz.minus, minus) < 1e-15);

    Matrix zz = tensor_embed(PauliWord{"ZZ"}, {1, 2}, 2);
    ProjectorPair pzz = dichotomic_projectors(zz);
    Matrix d4 = Matrix::Zero(4, 4);
    d4.diagonal() << 1, 0, 0, 1;
    CHECK(max_abs_diff(pzz.plus, d4) < 1e-15);

    Matrix yy = tensor_embed(PauliWord{"YY"}, {1, 2}, 2);
    ProjectorPair pyy = dichotomic_projectors(yy);
    CHECK(max_abs_diff(pyy.plus + pyy.minus, Matrix::Identity(4, 4)) < kAlgebraTol);
    CHECK(max_abs_diff(pyy.plus - pyy.minus, yy) < kAlgebraTol);
    CHECK(std::abs(pyy.plus.trace().real() - 2.0) < kAlgebraTol);  // rank 2

    // non-involution rejected
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = 2.0;
    CHECK_THROWS_AS(dichotomic_projectors(bad), std::invalid_argument);
}

TEST_CASE("projector algebra holds for all sixteen registered observables") {
    std::vector<Matrix> all;
    for (Obs o : kAllObs) all.push_back(alice_observable(o));
    for (Obs o : kBobSettings) all.push_back(bob_observable(o));
    for (const Matrix& obs : all) {
        CHECK(hermiticity_defect(obs) <= kAlgebraTol);
        CHECK(involution_defect(obs) <= kAlgebraTol);
        ProjectorPair pp = dichotomic_projectors(obs);
        CHECK(max_abs_diff(pp.plus + pp.minus, Matrix::Identity(16, 16)) <= kAlgebraTol);
        CHECK((pp.plus * pp.minus).cwiseAbs().maxCoeff() <= kAlgebraTol);
        CHECK(max_abs_diff(pp.plus * pp.plus, pp.plus) <= kAlgebraTol);
        CHECK(max_abs_diff(pp.minus * pp.minus, pp.minus) <= kAlgebraTol);
        CHECK(max_abs_diff(pp.plus - pp.minus, obs) <= kAlgebraTol);
    }
}

TEST_CASE("expectation: hand values") {
    Matrix rho0 = Matrix::Zero(2, 2);
    rho0(0, 0) = 1.0;  // |0><0|
    CHECK(expectation(rho0, pauli_matrix(Pauli::Z)) == doctest::Approx(1.0).epsilon(1e-12));

    Matrix mixed = Matrix::Identity(4, 4) / 4.0;
    Matrix zz = tensor_embed(PauliWord{"ZZ"}, {1, 2}, 2);
    CHECK(expectation(mixed, zz) == doctest::Approx(0.0).epsilon(1e-12));

    // singlet anticorrelation
    Vector singlet(4);
    singlet << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
    Matrix rho = singlet * singlet.adjoint();
    CHECK(expectation(rho, zz) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("luders_update: singlet collapse and unreachable branch") {
    Matrix rho0 = Matrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    ProjectorPair pz = dichotomic_projectors(pauli_matrix(Pauli::Z));
    LudersBranch keep = luders_update(rho0, pz.plus);
    CHECK(keep.reachable);
    CHECK(keep.probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs_diff(keep.post_state, rho0) < 1e-12);

    LudersBranch dead = luders_update(rho0, pz.minus);
    CHECK_FALSE(dead.reachable);
    CHECK(dead.probability <= kBranchTol);

    // measuring Z on one half of a singlet: p = 1/2, collapses to |01><01|
    Vector singlet(4);
    singlet << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
    Matrix rho = singlet * singlet.adjoint();
    Matrix z1 = tensor_embed(PauliWord{"Z"}, {1}, 2);
    LudersBranch up = luders_update(rho, dichotomic_projectors(z1).plus);
    CHECK(up.probability == doctest::Approx(0.5).epsilon(1e-12));
    Matrix expected = Matrix::Zero(4, 4);
    expected(1, 1) = 1.0;  // |0>|1>
    CHECK(max_abs_diff(up.post_state, expected) < 1e-12);
}

TEST_CASE("branch probabilities over a pair sum to 1 and reproduce expectations") {
    auto rng = test::seeded_rng();
    for (int trial = 0; trial < 100; ++trial) {
        Matrix rho = test::random_density(16, rng);
        Obs o = kAllObs[static_cast<std::size_t>(rng() % 9)];
        Matrix obs = alice_observable(o);
        ProjectorPair pp = dichotomic_projectors(obs);
        double p_plus = (pp.plus * rho * pp.plus).trace().real();
        double p_minus = (pp.minus * rho * pp.minus).trace().real();
        CHECK(p_plus + p_minus == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(expectation(rho, obs) == doctest::Approx(p_plus - p_minus).epsilon(1e-9));
    }
}

TEST_CASE("partial trace against direct index arithmetic") {
    auto rng = test::seeded_rng(42);
    Matrix rho = test::random_density(16, rng);
    CHECK(is_density_operator(rho));

    // tracing out everything leaves the trace
    Matrix alice = partial_trace(rho, 4, {1, 2});
    CHECK(alice.rows() == 4);
    CHECK(alice.trace().real() == doctest::Approx(1.0).epsilon(1e-12));

    // oracle: explicit sum for the (1,2) reduction
    Matrix direct = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int t = 0; t < 4; ++t) direct(i, j) += rho(i * 4 + t, j * 4 + t);
    CHECK(max_abs_diff(alice, direct) < 1e-12);

    // consistency: expectation of an Alice observable from the reduced state
    Matrix zz16 = alice_observable(Obs::C);
    Matrix zz4 = tensor_embed(PauliWord{"ZZ"}, {1, 2}, 2);
    CHECK(expectation(rho, zz16) == doctest::Approx(expectation(alice, zz4)).epsilon(1e-9));
}
