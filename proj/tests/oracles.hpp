#pragma once

// Independent reference implementations used only by tests. These stay on the
// most literal route available (full Kronecker products, whole-projector
// chains, direct strategy evaluation) so they cannot share a bug with the
// library's optimized paths.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "pmbell/bounds.hpp"
#include "pmbell/sequential.hpp"

namespace pmbell::oracle {

// Four-factor Kronecker build of a 16-dim operator from per-qubit letters.
inline Matrix kron4(Pauli q1, Pauli q2, Pauli q3, Pauli q4) {
    return kron(kron(pauli_matrix(q1), pauli_matrix(q2)),
                kron(pauli_matrix(q3), pauli_matrix(q4)));
}

// Joint probability of one outcome tuple from a single projector sandwich
// Tr[(P3 P2 P1 Q) rho (Q P1 P2 P3)], valid for channel-free plans because the
// three sequence projectors commute with each other and with Bob's.
inline double tuple_probability(const Matrix& rho, int sequence_index,
                                const std::array<int, 3>& alice,
                                std::optional<Obs> bob_setting = std::nullopt, int bob_outcome = 0) {
    const ContextSequence& seq = sequence_at(sequence_index);
    Matrix chain = Matrix::Identity(kStateDim, kStateDim);
    for (int k = 0; k < 3; ++k) {
        ProjectorPair pp = dichotomic_projectors(alice_observable(seq.observables[static_cast<std::size_t>(k)]));
        chain = (alice[static_cast<std::size_t>(k)] > 0 ? pp.plus : pp.minus) * chain;
    }
    if (bob_setting) {
        ProjectorPair q = dichotomic_projectors(bob_observable(*bob_setting));
        chain = chain * (bob_outcome > 0 ? q.plus : q.minus);
    }
    return (chain * rho * chain.adjoint()).trace().real();
}

// Closed-form response of the noise model, derived by hand from the engine's
// definitions (channel linearity plus singlet correlators on the phased
// state): each chi term is eta^2 times its operator product sign, a remote
// term is v * eta^(position-1) * (singlet value), with singlet values
// A,B -> -1, a,b -> -cos(phi), alpha -> cos(phi), gamma -> cos^2(phi), C -> +1.
inline double expected_chi(double eta) { return 6.0 * eta * eta; }

inline double expected_remote_term(const RemoteTerm& term, double v, double phi, double eta) {
    double c = std::cos(phi);
    double ideal = 0.0;
    switch (term.observable) {
        case Obs::A:
        case Obs::B: ideal = -1.0; break;
        case Obs::a:
        case Obs::b: ideal = -c; break;
        case Obs::alpha: ideal = c; break;
        case Obs::gamma: ideal = c * c; break;
        case Obs::C: ideal = 1.0; break;
        default: throw std::logic_error("observable has no remote term");
    }
    double attenuation = term.position == 2 ? eta : eta * eta;
    return v * attenuation * ideal;
}

inline double expected_s_absolute(double v, double phi, double eta) {
    double total = 0.0;
    for (const RemoteTerm& term : remote_term_table())
        total += std::abs(expected_remote_term(term, v, phi, eta));
    return total;
}

inline DeterministicStrategy random_strategy(std::mt19937_64& rng) {
    DeterministicStrategy s{};
    auto coin = [&rng]() { return (rng() & 1) ? +1 : -1; };
    for (auto& triple : s.alice)
        for (int& o : triple) o = coin();
    for (int& o : s.bob) o = coin();
    return s;
}

// Sum of per-sequence contributions, written independently of
// evaluate_strategy's loop structure.
inline int strategy_value_direct(const DeterministicStrategy& s, SignMode mode) {
    int total = 0;
    for (int k = 0; k < 6; ++k) {
        const ContextSequence& seq = sequence_at(k);
        total += seq.chi_sign * s.alice[static_cast<std::size_t>(k)][0] *
                 s.alice[static_cast<std::size_t>(k)][1] * s.alice[static_cast<std::size_t>(k)][2];
    }
    for (const RemoteTerm& term : remote_term_table()) {
        int a = s.alice[static_cast<std::size_t>(term.sequence_index)]
                       [static_cast<std::size_t>(term.position - 1)];
        int b = s.bob[static_cast<std::size_t>(bob_setting_index(term.observable))];
        total += mode == SignMode::Absolute ? 1 : term.fixed_sign * a * b;
    }
    return total;
}

}  // namespace pmbell::oracle
