#include "pmbell/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>
#include <vector>

namespace pmbell {

Matrix pauli_matrix(Pauli p) {
    Matrix m(2, 2);
    const Complex i{0.0, 1.0};
    switch (p) {
        case Pauli::I: m << 1, 0, 0, 1; break;
        case Pauli::X: m << 0, 1, 1, 0; break;
        case Pauli::Y: m << 0, -i, i, 0; break;
        case Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double involution_defect(const Matrix& m) {
    Matrix sq = m * m;
    return (sq - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

bool is_density_operator(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    if (hermiticity_defect(m) > tol) return false;
    if (std::abs(m.trace() - Complex{1.0, 0.0}) > tol) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -tol;
}

Matrix tensor_embed(const PauliWord& word, std::span<const int> slots, int total_qubits) {
    if (word.size() != slots.size())
        throw std::invalid_argument("tensor_embed: word length does not match slot count");
    std::vector<Pauli> per_qubit(static_cast<std::size_t>(total_qubits), Pauli::I);
    std::vector<bool> used(static_cast<std::size_t>(total_qubits), false);
    for (std::size_t k = 0; k < slots.size(); ++k) {
        int s = slots[k];
        if (s < 1 || s > total_qubits)
            throw std::invalid_argument("tensor_embed: slot " + std::to_string(s) +
                                        " out of range 1.." + std::to_string(total_qubits));
        if (used[static_cast<std::size_t>(s - 1)])
            throw std::invalid_argument("tensor_embed: duplicate slot " + std::to_string(s));
        used[static_cast<std::size_t>(s - 1)] = true;
        per_qubit[static_cast<std::size_t>(s - 1)] = word.letters[k];
    }
    Matrix out = Matrix::Identity(1, 1);
    for (int q = 0; q < total_qubits; ++q) out = kron(out, pauli_matrix(per_qubit[static_cast<std::size_t>(q)]));
    return out;
}

Matrix tensor_embed(const PauliWord& word, std::initializer_list<int> slots, int total_qubits) {
    return tensor_embed(word, std::span<const int>(slots.begin(), slots.size()), total_qubits);
}

ProjectorPair dichotomic_projectors(const Matrix& obs) {
    if (hermiticity_defect(obs) > kAlgebraTol)
        throw std::invalid_argument("dichotomic_projectors: observable is not Hermitian");
    if (involution_defect(obs) > kAlgebraTol)
        throw std::invalid_argument("dichotomic_projectors: observable squared is not identity");
    Matrix id = Matrix::Identity(obs.rows(), obs.cols());
    return {(id + obs) / 2.0, (id - obs) / 2.0};
}

double expectation(const Matrix& rho, const Matrix& obs) {
    if (rho.rows() != obs.rows() || rho.cols() != obs.cols())
        throw std::invalid_argument("expectation: dimension mismatch");
    Complex tr = (rho * obs).trace();
    if (std::abs(tr.imag()) > kAlgebraTol)
        throw std::runtime_error("expectation: imaginary residue above tolerance (non-Hermitian input?)");
    return tr.real();
}

LudersBranch luders_update(const Matrix& rho, const Matrix& projector) {
    Matrix updated = projector * rho * projector;
    double p = updated.trace().real();
    LudersBranch branch;
    branch.probability = std::max(p, 0.0);
    if (p > kBranchTol) {
        branch.post_state = updated / p;
        branch.reachable = true;
    }
    return branch;
}

Matrix partial_trace(const Matrix& rho, int total_qubits, std::span<const int> keep) {
    const int dim = 1 << total_qubits;
    if (rho.rows() != dim || rho.cols() != dim)
        throw std::invalid_argument("partial_trace: state dimension does not match qubit count");
    std::vector<int> keep_bits;  // bit position from the left (qubit 1 = most significant)
    for (int q : keep) {
        if (q < 1 || q > total_qubits) throw std::invalid_argument("partial_trace: qubit out of range");
        keep_bits.push_back(total_qubits - q);
    }
    std::vector<int> trace_bits;
    for (int q = 1; q <= total_qubits; ++q) {
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) trace_bits.push_back(total_qubits - q);
    }
    const int kd = 1 << keep_bits.size();
    const int td = 1 << trace_bits.size();
    auto compose = [](const std::vector<int>& bits, int idx) {
        int out = 0;
        for (std::size_t k = 0; k < bits.size(); ++k)
            if ((idx >> (bits.size() - 1 - k)) & 1) out |= 1 << bits[k];
        return out;
    };
    Matrix out = Matrix::Zero(kd, kd);
    for (int i = 0; i < kd; ++i)
        for (int j = 0; j < kd; ++j) {
            Complex sum = 0;
            for (int t = 0; t < td; ++t) {
                int row = compose(keep_bits, i) | compose(trace_bits, t);
                int col = compose(keep_bits, j) | compose(trace_bits, t);
                sum += rho(row, col);
            }
            out(i, j) = sum;
        }
    return out;
}

Matrix partial_trace(const Matrix& rho, int total_qubits, std::initializer_list<int> keep) {
    return partial_trace(rho, total_qubits, std::span<const int>(keep.begin(), keep.size()));
}

}  // namespace pmbell
