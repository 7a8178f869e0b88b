#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "qlens/basis.hpp"
#include "qlens/circuit.hpp"

namespace qlens {

using Complex = std::complex<double>;

// Row-major dense complex matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static DenseMatrix identity(std::size_t dim) {
        DenseMatrix m(dim, dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    DenseMatrix operator+(const DenseMatrix& o) const {
        DenseMatrix out = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
        return out;
    }

    DenseMatrix operator*(Complex s) const {
        DenseMatrix out = *this;
        for (auto& v : out.data_) v *= s;
        return out;
    }

    DenseMatrix operator*(const DenseMatrix& o) const {
        DenseMatrix out(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Complex a = (*this)(i, k);
                if (a == Complex{}) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
            }
        return out;
    }

    std::vector<Complex> apply(const std::vector<Complex>& v) const {
        std::vector<Complex> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    DenseMatrix adjoint() const {
        DenseMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

namespace single_qubit {

inline DenseMatrix make(Complex a, Complex b, Complex c, Complex d) {
    DenseMatrix m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

inline DenseMatrix identity() { return make(1, 0, 0, 1); }
inline DenseMatrix hadamard() {
    const double s = 1.0 / std::numbers::sqrt2;
    return make(s, s, s, -s);
}
inline DenseMatrix pauli_x() { return make(0, 1, 1, 0); }
inline DenseMatrix pauli_y() { return make(0, Complex(0, -1), Complex(0, 1), 0); }
inline DenseMatrix pauli_z() { return make(1, 0, 0, -1); }
inline DenseMatrix proj0() { return make(1, 0, 0, 0); }
inline DenseMatrix proj1() { return make(0, 0, 0, 1); }
inline DenseMatrix phase(double theta) { return make(1, 0, 0, std::polar(1.0, theta)); }

} // namespace single_qubit

// Kronecker product over all n qubits, qubit 0 leftmost (most significant).
// `factors` pairs a qubit with its 2x2 operator; every other qubit gets I.
inline DenseMatrix embed(std::size_t num_qubits,
                         std::initializer_list<std::pair<std::size_t, DenseMatrix>> factors) {
    DenseMatrix out = DenseMatrix::identity(1);
    for (std::size_t q = 0; q < num_qubits; ++q) {
        DenseMatrix factor = single_qubit::identity();
        for (const auto& [qubit, op] : factors)
            if (qubit == q) factor = op;
        out = kron(out, factor);
    }
    return out;
}

inline void check_operands(const Gate& gate, std::size_t num_qubits) {
    for (auto q : gate.operands())
        if (q >= num_qubits)
            throw BoundsError("gate operand " + std::to_string(q) + " out of range for " +
                              std::to_string(num_qubits) + " qubits");
}

// Full-system unitary for `gate`, built as a sum of Kronecker products.
//   CNOT = P0(c) + P1(c)·X(t)
//   CP   = P0(c) + P1(c)·Phase(t)
//   SWAP = (I + XX + YY + ZZ) / 2
inline DenseMatrix gate_matrix(const Gate& gate, std::size_t num_qubits) {
    check_operands(gate, num_qubits);
    namespace sq = single_qubit;
    const auto ops = gate.operands();
    switch (gate.kind()) {
    case GateKind::H: return embed(num_qubits, {{ops[0], sq::hadamard()}});
    case GateKind::X: return embed(num_qubits, {{ops[0], sq::pauli_x()}});
    case GateKind::CNOT:
        return embed(num_qubits, {{ops[0], sq::proj0()}}) +
               embed(num_qubits, {{ops[0], sq::proj1()}, {ops[1], sq::pauli_x()}});
    case GateKind::CP:
        return embed(num_qubits, {{ops[0], sq::proj0()}}) +
               embed(num_qubits, {{ops[0], sq::proj1()}, {ops[1], sq::phase(gate.theta())}});
    case GateKind::SWAP:
        return (embed(num_qubits, {}) +
                embed(num_qubits, {{ops[0], sq::pauli_x()}, {ops[1], sq::pauli_x()}}) +
                embed(num_qubits, {{ops[0], sq::pauli_y()}, {ops[1], sq::pauli_y()}}) +
                embed(num_qubits, {{ops[0], sq::pauli_z()}, {ops[1], sq::pauli_z()}})) *
               Complex(0.5);
    }
    throw SchemaError("unknown gate kind");
}

struct ColumnEntry {
    std::size_t row;
    Complex value;
};

// Nonzero entries of column `input` of the gate's unitary: where a single
// basis state goes and with which coefficient. At most two entries.
inline std::vector<ColumnEntry> gate_column(const Gate& gate, std::size_t num_qubits,
                                            std::size_t input) {
    check_operands(gate, num_qubits);
    const auto ops = gate.operands();
    const auto mask = [&](std::size_t i) { return qubit_mask(num_qubits, ops[i]); };
    switch (gate.kind()) {
    case GateKind::H: {
        const double s = 1.0 / std::numbers::sqrt2;
        const std::size_t m = mask(0);
        const bool one = (input & m) != 0;
        return {{input & ~m, s}, {input | m, one ? -s : s}};
    }
    case GateKind::X: return {{input ^ mask(0), 1.0}};
    case GateKind::CNOT:
        return {{(input & mask(0)) ? (input ^ mask(1)) : input, 1.0}};
    case GateKind::SWAP: {
        const bool a = (input & mask(0)) != 0;
        const bool b = (input & mask(1)) != 0;
        return {{a == b ? input : (input ^ mask(0) ^ mask(1)), 1.0}};
    }
    case GateKind::CP: {
        const bool both = (input & mask(0)) && (input & mask(1));
        return {{input, both ? std::polar(1.0, gate.theta()) : Complex(1.0)}};
    }
    }
    throw SchemaError("unknown gate kind");
}

} // namespace qlens
