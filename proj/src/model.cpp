#include "pmbell/model.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pmbell {

std::string_view name_of(Obs o) {
    switch (o) {
        case Obs::A: return "A";
        case Obs::B: return "B";
        case Obs::C: return "C";
        case Obs::a: return "a";
        case Obs::b: return "b";
        case Obs::c: return "c";
        case Obs::alpha: return "alpha";
        case Obs::beta: return "beta";
        case Obs::gamma: return "gamma";
    }
    throw std::logic_error("invalid observable");
}

std::string label_name(const ObservableLabel& label) {
    std::string s{name_of(label.obs)};
    if (label.party == Party::Bob) s += '\'';
    return s;
}

PauliWord word_of(Obs o) {
    // (spatial-mode letter, polarization letter)
    switch (o) {
        case Obs::A: return PauliWord{"ZI"};
        case Obs::B: return PauliWord{"IZ"};
        case Obs::C: return PauliWord{"ZZ"};
        case Obs::a: return PauliWord{"IX"};
        case Obs::b: return PauliWord{"XI"};
        case Obs::c: return PauliWord{"XX"};
        case Obs::alpha: return PauliWord{"ZX"};
        case Obs::beta: return PauliWord{"XZ"};
        case Obs::gamma: return PauliWord{"YY"};
    }
    throw std::logic_error("invalid observable");
}

int bob_setting_index(Obs o) {
    for (std::size_t k = 0; k < kBobSettings.size(); ++k)
        if (kBobSettings[k] == o) return static_cast<int>(k);
    throw std::invalid_argument("observable " + std::string(name_of(o)) + " is not a Bob setting");
}

Matrix build_observable(const ObservableLabel& label) {
    const int first = label.party == Party::Alice ? 1 : 3;
    const std::array<int, 2> slots = {first, first + 1};
    return tensor_embed(word_of(label.obs), std::span<const int>(slots.data(), 2), kTotalQubits);
}

namespace {
std::array<Matrix, 9> build_party_table(Party party) {
    std::array<Matrix, 9> table;
    for (std::size_t k = 0; k < kAllObs.size(); ++k)
        table[k] = build_observable({kAllObs[k], party});
    return table;
}
}  // namespace

const Matrix& alice_observable(Obs o) {
    static const std::array<Matrix, 9> table = build_party_table(Party::Alice);
    return table[static_cast<std::size_t>(o)];
}

const Matrix& bob_observable(Obs o) {
    static const std::array<Matrix, 9> table = build_party_table(Party::Bob);
    return table[static_cast<std::size_t>(o)];
}

Vector prepared_state(double phase_error) {
    // |psi-(phi)> on qubit pair (i,j): (|0_i 1_j> - e^{i phi} |1_i 0_j>)/sqrt(2)
    const Complex hi{1.0 / std::sqrt(2.0), 0.0};
    const Complex lo = -std::exp(Complex{0.0, phase_error}) / std::sqrt(2.0);
    auto singlet_amp = [&](int qi, int qj) -> Complex {
        if (qi == 0 && qj == 1) return hi;
        if (qi == 1 && qj == 0) return lo;
        return 0.0;
    };
    Vector psi = Vector::Zero(kStateDim);
    for (int q1 = 0; q1 < 2; ++q1)
        for (int q2 = 0; q2 < 2; ++q2)
            for (int q3 = 0; q3 < 2; ++q3)
                for (int q4 = 0; q4 < 2; ++q4)
                    psi(q1 * 8 + q2 * 4 + q3 * 2 + q4) = singlet_amp(q1, q3) * singlet_amp(q2, q4);
    return psi;
}

Matrix density_of(const Vector& state) { return state * state.adjoint(); }

const std::array<ContextSequence, 6>& context_table() {
    static const std::array<ContextSequence, 6> table = {{
        {"C.A.B", {Obs::C, Obs::A, Obs::B}, +1},
        {"c.b.a", {Obs::c, Obs::b, Obs::a}, +1},
        {"beta.gamma.alpha", {Obs::beta, Obs::gamma, Obs::alpha}, +1},
        {"alpha.A.a", {Obs::alpha, Obs::A, Obs::a}, +1},
        {"beta.b.B", {Obs::beta, Obs::b, Obs::B}, +1},
        {"c.gamma.C", {Obs::c, Obs::gamma, Obs::C}, -1},
    }};
    return table;
}

const ContextSequence& sequence_at(int index) {
    if (index < 0 || index >= 6) throw std::invalid_argument("sequence index out of range");
    return context_table()[static_cast<std::size_t>(index)];
}

int sequence_index(std::string_view id) {
    const auto& table = context_table();
    for (std::size_t k = 0; k < table.size(); ++k)
        if (table[k].id == id) return static_cast<int>(k);
    throw std::invalid_argument("unknown sequence id: " + std::string(id));
}

ContextCheck verify_context_algebra(const ContextSequence& seq) {
    std::array<Matrix, 3> ops;
    for (int k = 0; k < 3; ++k) ops[static_cast<std::size_t>(k)] = alice_observable(seq.observables[static_cast<std::size_t>(k)]);
    bool commuting = true;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double defect = (ops[static_cast<std::size_t>(i)] * ops[static_cast<std::size_t>(j)] -
                             ops[static_cast<std::size_t>(j)] * ops[static_cast<std::size_t>(i)])
                                .cwiseAbs()
                                .maxCoeff();
            if (defect > kAlgebraTol) commuting = false;
        }
    if (!commuting)
        throw std::logic_error("context " + std::string(seq.id) + " contains a non-commuting pair");
    Matrix product = ops[0] * ops[1] * ops[2];
    int sign = product(0, 0).real() >= 0.0 ? +1 : -1;
    double defect = (product - double(sign) * Matrix::Identity(kStateDim, kStateDim)).cwiseAbs().maxCoeff();
    if (defect > kAlgebraTol)
        throw std::logic_error("context " + std::string(seq.id) + " product is not +/-identity");
    return {commuting, sign};
}

const std::array<RemoteTerm, 12>& remote_term_table() {
    // fixed_sign: ideal-state value of <X X'> inside the sequence.
    // Singlet pairs anticorrelate every Pauli axis, so the sign is
    // (-1)^(number of non-identity letters in the word): -1 for A, B, a, b
    // and +1 for C, alpha, gamma. Re-derived from the exact evaluator in tests.
    static const std::array<RemoteTerm, 12> table = {{
        {0, 2, Obs::A, -1},
        {0, 3, Obs::B, -1},
        {1, 2, Obs::b, -1},
        {1, 3, Obs::a, -1},
        {2, 2, Obs::gamma, +1},
        {2, 3, Obs::alpha, +1},
        {3, 2, Obs::A, -1},
        {3, 3, Obs::a, -1},
        {4, 2, Obs::b, -1},
        {4, 3, Obs::B, -1},
        {5, 2, Obs::gamma, +1},
        {5, 3, Obs::C, +1},
    }};
    return table;
}

std::string RemoteTerm::id() const {
    std::string n{name_of(observable)};
    return n + n + "'@" + std::string(sequence_at(sequence_index).id);
}

std::string_view to_string(SignMode mode) {
    return mode == SignMode::Absolute ? "absolute" : "fixed";
}

SignMode sign_mode_from(std::string_view s) {
    if (s == "absolute") return SignMode::Absolute;
    if (s == "fixed" || s == "fixed-sign") return SignMode::FixedSign;
    throw std::invalid_argument("unknown sign mode: " + std::string(s));
}

nlohmann::ordered_json registry_json() {
    using nlohmann::ordered_json;
    ordered_json j;
    j["observables"] = ordered_json::array();
    for (Obs o : kAllObs) {
        ordered_json entry;
        entry["name"] = std::string(name_of(o));
        entry["word"] = word_of(o).str();
        entry["alice_qubits"] = {1, 2};
        bool primed = false;
        for (Obs s : kBobSettings) primed = primed || s == o;
        entry["bob_primed_copy"] = primed;
        j["observables"].push_back(entry);
    }
    j["sequences"] = ordered_json::array();
    for (const auto& seq : context_table()) {
        ordered_json entry;
        entry["id"] = std::string(seq.id);
        entry["observables"] = {std::string(name_of(seq.observables[0])),
                                std::string(name_of(seq.observables[1])),
                                std::string(name_of(seq.observables[2]))};
        entry["chi_sign"] = seq.chi_sign;
        entry["product_sign"] = verify_context_algebra(seq).product_sign;
        j["sequences"].push_back(entry);
    }
    j["remote_terms"] = ordered_json::array();
    for (const auto& term : remote_term_table()) {
        ordered_json entry;
        entry["id"] = term.id();
        entry["sequence"] = std::string(sequence_at(term.sequence_index).id);
        entry["position"] = term.position;
        entry["alice"] = std::string(name_of(term.observable));
        entry["bob"] = label_name({term.observable, Party::Bob});
        entry["fixed_sign"] = term.fixed_sign;
        j["remote_terms"].push_back(entry);
    }
    j["qubit_roles"] = {{"1", "Alice spatial mode"},
                        {"2", "Alice polarization"},
                        {"3", "Bob spatial mode"},
                        {"4", "Bob polarization"}};
    return j;
}

}  // namespace pmbell
