#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

#include "pmbell/pauli.hpp"

namespace pmbell {

template <class Scalar>
using MatrixT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using Matrix = MatrixT<double>;
using Vector = VectorT<double>;
using Complex = std::complex<double>;

// Tolerance for algebraic identities (Hermiticity, involution, projector algebra).
inline constexpr double kAlgebraTol = 1e-9;
// Below this probability a measurement branch is reported unreachable.
inline constexpr double kBranchTol = 1e-12;

Matrix pauli_matrix(Pauli p);

template <class DA, class DB>
Matrix kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b.derived();
    return out;
}

// Largest entrywise deviation from Hermiticity / involution.
double hermiticity_defect(const Matrix& m);
double involution_defect(const Matrix& m);
inline bool is_hermitian(const Matrix& m, double tol = kAlgebraTol) {
    return hermiticity_defect(m) <= tol;
}
inline bool is_involution(const Matrix& m, double tol = kAlgebraTol) {
    return involution_defect(m) <= tol;
}
bool is_density_operator(const Matrix& m, double tol = kAlgebraTol);

// Operator acting as `word` on the named qubit slots (1-based) and as identity
// elsewhere; tensor factor order is qubit-index order 1 (x) 2 (x) ... (x) n.
Matrix tensor_embed(const PauliWord& word, std::span<const int> slots, int total_qubits);
Matrix tensor_embed(const PauliWord& word, std::initializer_list<int> slots, int total_qubits);

// Eigenprojectors of a +/-1-valued observable.
struct ProjectorPair {
    Matrix plus;
    Matrix minus;
};
ProjectorPair dichotomic_projectors(const Matrix& obs);

// Tr(rho * obs), checked to be real up to kAlgebraTol.
double expectation(const Matrix& rho, const Matrix& obs);

struct LudersBranch {
    double probability = 0.0;
    Matrix post_state;      // valid only when reachable
    bool reachable = false; // probability > kBranchTol
};
// Projective update rho -> P rho P / Tr(P rho P).
LudersBranch luders_update(const Matrix& rho, const Matrix& projector);

// Partial trace keeping the listed qubits (1-based, in their original order).
Matrix partial_trace(const Matrix& rho, int total_qubits, std::span<const int> keep);
Matrix partial_trace(const Matrix& rho, int total_qubits, std::initializer_list<int> keep);

}  // namespace pmbell
