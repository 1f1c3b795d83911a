// otp.hpp
// Quantum one-time pad: Pauli pad keys, the encryption unitary
// U_r = X^{r1}Z^{s1} x ... x X^{rn}Z^{sn}, per-qubit decryption, and the
// exact uniform-key average (Pauli twirl).

#pragma once

#include "qzk/qmath.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qzk::otp {

using qmath::DensityMatrix;
using qmath::Matrix;
using qmath::QubitSet;
using qmath::StateVector;
using qmath::UnitaryMatrix;

// 2n-bit pad key (r1, s1, ..., rn, sn).
class PadKey {
public:
    PadKey(int n, std::vector<int> bits) : n_(n), bits_(std::move(bits)) {
        if (static_cast<int>(bits_.size()) != 2 * n_) {
            throw std::invalid_argument("pad key must have exactly 2n bits");
        }
        for (int b : bits_) {
            if (b != 0 && b != 1) throw std::invalid_argument("pad key bits must be 0/1");
        }
    }

    // Key from the little-endian integer encoding (qubit 1 uses bits 0,1).
    static PadKey from_index(int n, std::uint64_t index) {
        std::vector<int> bits(static_cast<std::size_t>(2 * n));
        for (int i = 0; i < 2 * n; ++i) {
            bits[static_cast<std::size_t>(i)] = static_cast<int>((index >> i) & 1u);
        }
        return PadKey(n, std::move(bits));
    }

    static PadKey random(int n, qmath::SeededRng& rng) {
        std::vector<int> bits(static_cast<std::size_t>(2 * n));
        for (auto& b : bits) b = rng.bit();
        return PadKey(n, std::move(bits));
    }

    int qubits() const { return n_; }
    int r(int qubit) const { return bits_[static_cast<std::size_t>(2 * (qubit - 1))]; }
    int s(int qubit) const { return bits_[static_cast<std::size_t>(2 * (qubit - 1) + 1)]; }
    const std::vector<int>& bits() const { return bits_; }

    PadKey xored(const PadKey& other) const {
        if (other.n_ != n_) throw std::invalid_argument("pad key length mismatch");
        std::vector<int> bits(bits_.size());
        for (std::size_t i = 0; i < bits_.size(); ++i) bits[i] = bits_[i] ^ other.bits_[i];
        return PadKey(n_, std::move(bits));
    }

private:
    int n_;
    std::vector<int> bits_;
};

// Single-qubit X^r Z^s.
inline UnitaryMatrix pauli_xz(int r, int s) {
    UnitaryMatrix u = UnitaryMatrix::identity(1);
    if (s) u = qmath::pauli_z() * u;
    if (r) u = qmath::pauli_x() * u;
    return u;
}

inline UnitaryMatrix pad_unitary(const PadKey& key) {
    UnitaryMatrix u = pauli_xz(key.r(1), key.s(1));
    for (int q = 2; q <= key.qubits(); ++q) {
        u = qmath::tensor(u, pauli_xz(key.r(q), key.s(q)));
    }
    return u;
}

inline StateVector encrypt(const StateVector& psi, const PadKey& key) {
    if (psi.qubits() != key.qubits()) {
        throw std::invalid_argument("encrypt: qubit count mismatch");
    }
    return qmath::apply_unitary(psi, pad_unitary(key),
                                QubitSet::range(1, psi.qubits()));
}

inline StateVector decrypt(const StateVector& psi, const PadKey& key) {
    if (psi.qubits() != key.qubits()) {
        throw std::invalid_argument("decrypt: qubit count mismatch");
    }
    return StateVector(psi.qubits(),
                       pad_unitary(key).matrix().adjoint() * psi.amplitudes());
}

// Apply (X^r Z^s)^dagger on each target qubit, one (r, s) pair per target.
inline DensityMatrix decrypt_qubits(const DensityMatrix& rho,
                                    const std::vector<std::pair<int, int>>& key_bits,
                                    const QubitSet& targets) {
    if (static_cast<int>(key_bits.size()) != targets.size()) {
        throw std::invalid_argument("decrypt_qubits: one (r,s) pair per target required");
    }
    DensityMatrix out = rho;
    for (int i = 0; i < targets.size(); ++i) {
        const auto [r, s] = key_bits[static_cast<std::size_t>(i)];
        out = qmath::apply_unitary(out, pauli_xz(r, s).adjoint(),
                                   QubitSet{targets[i]});
    }
    return out;
}

// Exact uniform average over all 4^n pad keys: (1/4^n) sum_r U_r rho U_r^dag.
inline DensityMatrix average_encryption(const DensityMatrix& rho) {
    const int n = rho.qubits();
    const std::uint64_t keys = std::uint64_t{1} << (2 * n);
    Matrix acc = Matrix::Zero(rho.dim(), rho.dim());
    for (std::uint64_t idx = 0; idx < keys; ++idx) {
        const Matrix u = pad_unitary(PadKey::from_index(n, idx)).matrix();
        acc += u * rho.matrix() * u.adjoint();
    }
    return DensityMatrix(n, acc / static_cast<double>(keys));
}

// Average over pad keys on `unknown` qubits only (revealed qubits untouched).
// By the Pauli twirl this replaces each unknown qubit by I/2 and decouples it.
inline DensityMatrix partial_average_encryption(const DensityMatrix& rho,
                                                const QubitSet& unknown) {
    unknown.check_in_range(rho.qubits());
    if (unknown.empty()) return rho;
    const std::uint64_t keys = std::uint64_t{1} << (2 * unknown.size());
    Matrix acc = Matrix::Zero(rho.dim(), rho.dim());
    for (std::uint64_t idx = 0; idx < keys; ++idx) {
        DensityMatrix padded = rho;
        for (int i = 0; i < unknown.size(); ++i) {
            const int r = static_cast<int>((idx >> (2 * i)) & 1u);
            const int s = static_cast<int>((idx >> (2 * i + 1)) & 1u);
            padded = qmath::apply_unitary(padded, pauli_xz(r, s), QubitSet{unknown[i]});
        }
        acc += padded.matrix();
    }
    return DensityMatrix(rho.qubits(), acc / static_cast<double>(keys));
}

}  // namespace qzk::otp
