#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmbell {

enum class Pauli : std::uint8_t { I, X, Y, Z };

inline char to_char(Pauli p) {
    switch (p) {
        case Pauli::I: return 'I';
        case Pauli::X: return 'X';
        case Pauli::Y: return 'Y';
        case Pauli::Z: return 'Z';
    }
    throw std::logic_error("invalid Pauli letter");
}

inline Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I': return Pauli::I;
        case 'X': return Pauli::X;
        case 'Y': return Pauli::Y;
        case 'Z': return Pauli::Z;
    }
    throw std::invalid_argument(std::string("not a Pauli letter: ") + c);
}

// A tensor word of single-qubit Pauli letters, one per slot it occupies.
struct PauliWord {
    std::vector<Pauli> letters;

    PauliWord() = default;
    PauliWord(std::initializer_list<Pauli> ls) : letters(ls) {}
    explicit PauliWord(const std::string& s) {
        letters.reserve(s.size());
        for (char c : s) letters.push_back(pauli_from_char(c));
    }

    std::size_t size() const { return letters.size(); }
    bool is_identity() const {
        for (Pauli p : letters)
            if (p != Pauli::I) return false;
        return true;
    }
    std::string str() const {
        std::string s;
        s.reserve(letters.size());
        for (Pauli p : letters) s.push_back(to_char(p));
        return s;
    }
    friend bool operator==(const PauliWord&, const PauliWord&) = default;
};

struct ScaledPauli {
    std::complex<double> phase;
    Pauli letter;
};

// Single-letter product a*b = phase * letter (e.g. X*Y = i Z).
inline ScaledPauli multiply(Pauli a, Pauli b) {
    using namespace std::complex_literals;
    if (a == Pauli::I) return {1.0, b};
    if (b == Pauli::I) return {1.0, a};
    if (a == b) return {1.0, Pauli::I};
    auto third = [](Pauli x, Pauli y) {
        int m = (int(Pauli::X) + int(Pauli::Y) + int(Pauli::Z)) - int(x) - int(y);
        return Pauli(m);
    };
    // cyclic XY=iZ, YZ=iX, ZX=iY; anticyclic pick up -i
    bool cyclic = (a == Pauli::X && b == Pauli::Y) || (a == Pauli::Y && b == Pauli::Z) ||
                  (a == Pauli::Z && b == Pauli::X);
    return {cyclic ? 1.0i : -1.0i, third(a, b)};
}

struct ScaledWord {
    std::complex<double> phase;
    PauliWord word;
};

// Slotwise word product with accumulated phase.
inline ScaledWord multiply(const PauliWord& a, const PauliWord& b) {
    if (a.size() != b.size()) throw std::invalid_argument("Pauli word length mismatch");
    ScaledWord out{1.0, PauliWord{}};
    out.word.letters.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        ScaledPauli sp = multiply(a.letters[i], b.letters[i]);
        out.phase *= sp.phase;
        out.word.letters.push_back(sp.letter);
    }
    return out;
}

inline bool commutes(const PauliWord& a, const PauliWord& b) {
    ScaledWord ab = multiply(a, b);
    ScaledWord ba = multiply(b, a);
    return std::abs(ab.phase - ba.phase) < 1e-15;
}

}  // namespace pmbell
