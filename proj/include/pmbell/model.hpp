#pragma once

#include <array>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "pmbell/linalg.hpp"

namespace pmbell {

// The nine two-qubit observables of the Peres-Mermin square. Alice measures
// all nine on qubits (1,2); Bob measures the seven primed copies (all but
// beta and c) on qubits (3,4).
enum class Obs : int { A, B, C, a, b, c, alpha, beta, gamma };

inline constexpr std::array<Obs, 9> kAllObs = {Obs::A, Obs::B,     Obs::C,    Obs::a,    Obs::b,
                                               Obs::c, Obs::alpha, Obs::beta, Obs::gamma};

// Bob's settings in canonical order (used for bit indexing in sweeps).
inline constexpr std::array<Obs, 7> kBobSettings = {Obs::A, Obs::B,     Obs::C,    Obs::a,
                                                    Obs::b, Obs::alpha, Obs::gamma};

enum class Party { Alice, Bob };

struct ObservableLabel {
    Obs obs;
    Party party;
    friend bool operator==(const ObservableLabel&, const ObservableLabel&) = default;
};

std::string_view name_of(Obs o);
std::string label_name(const ObservableLabel& label);  // "A" or "A'"
PauliWord word_of(Obs o);
int bob_setting_index(Obs o);  // position in kBobSettings, throws if unprimed-only

// 16-dimensional operator: Alice labels act on qubits (1,2), Bob labels on (3,4).
Matrix build_observable(const ObservableLabel& label);
// Cached registry lookups; the tables are built once and never mutated.
const Matrix& alice_observable(Obs o);
const Matrix& bob_observable(Obs o);

inline constexpr int kTotalQubits = 4;
inline constexpr int kStateDim = 16;

// Two singlet pairs (1,3) and (2,4), expressed in tensor slot order 1,2,3,4.
// A nonzero phase puts e^{i*phase} on the |10> component of each singlet.
Vector prepared_state(double phase_error);
inline Vector build_ideal_state() { return prepared_state(0.0); }
Matrix density_of(const Vector& state);

// One ordered measurement sequence of three mutually commuting observables.
struct ContextSequence {
    std::string_view id;             // e.g. "C.A.B"
    std::array<Obs, 3> observables;  // measured in this order
    int chi_sign;                    // sign of the sequence term in the chi expression
};

const std::array<ContextSequence, 6>& context_table();
const ContextSequence& sequence_at(int index);
int sequence_index(std::string_view id);

struct ContextCheck {
    bool commuting;
    int product_sign;  // ordered operator product equals product_sign * I
};
ContextCheck verify_context_algebra(const ContextSequence& seq);

// One Alice-Bob correlation term <X X'> read inside a specific sequence at
// position 2 or 3. fixed_sign is the ideal-state quantum prediction, frozen
// as a constant and re-derived in tests.
struct RemoteTerm {
    int sequence_index;
    int position;  // 2 or 3
    Obs observable;
    int fixed_sign;
    std::string id() const;  // e.g. "AA'@C.A.B"
};

const std::array<RemoteTerm, 12>& remote_term_table();

// How the S expression aggregates its 12 terms.
enum class SignMode { Absolute, FixedSign };
std::string_view to_string(SignMode mode);
SignMode sign_mode_from(std::string_view s);

// Full registry (labels, words, sequences, remote terms, fixed signs) for
// documentation and cross-implementation diffing.
nlohmann::ordered_json registry_json();

}  // namespace pmbell
