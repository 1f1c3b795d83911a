#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qzk/otp.hpp"

#include <cmath>

using namespace qzk;
using qmath::Complex;
using qmath::DensityMatrix;
using qmath::Matrix;
using qmath::QubitSet;
using qmath::SeededRng;
using qmath::StateVector;
using qmath::Vector;

namespace {

StateVector random_state(int n, SeededRng& rng) {
    Vector v(Eigen::Index{1} << n);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) = Complex(rng.real() - 0.5, rng.real() - 0.5);
    }
    v.normalize();
    return StateVector(n, std::move(v));
}

}  // namespace

TEST_CASE("pad key encoding and validation") {
    CHECK_THROWS(otp::PadKey(2, {0, 1, 1}));     // wrong length
    CHECK_THROWS(otp::PadKey(1, {0, 2}));        // non-bit
    const auto key = otp::PadKey::from_index(2, 0b0110);
    CHECK(key.r(1) == 0);
    CHECK(key.s(1) == 1);
    CHECK(key.r(2) == 1);
    CHECK(key.s(2) == 0);
    const auto self = key.xored(key);
    for (int b : self.bits()) CHECK(b == 0);
}

TEST_CASE("pad unitary matches the explicit Pauli tensor") {
    for (std::uint64_t idx = 0; idx < 16; ++idx) {
        const auto key = otp::PadKey::from_index(2, idx);
        Matrix ref = oracles::tensor(oracles::pauli(key.r(1), key.s(1)),
                                     oracles::pauli(key.r(2), key.s(2)));
        CHECK((otp::pad_unitary(key).matrix() - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("encrypt / decrypt round-trip") {
    SeededRng rng(21);
    for (int n = 1; n <= 3; ++n) {
        const auto psi = random_state(n, rng);
        const auto key = otp::PadKey::random(n, rng);
        const auto back = otp::decrypt(otp::encrypt(psi, key), key);
        CHECK((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-9);
    }
    const auto psi = random_state(2, rng);
    CHECK_THROWS(otp::encrypt(psi, otp::PadKey::random(1, rng)));
}

TEST_CASE("X and Z act as expected on basis and phase") {
    // X^1 Z^0 |0> = |1>; X^0 Z^1 |1> = -|1>.
    const auto x = otp::pauli_xz(1, 0).matrix();
    CHECK(std::abs(x(1, 0) - Complex(1.0)) < 1e-12);
    const auto z = otp::pauli_xz(0, 1).matrix();
    CHECK(std::abs(z(1, 1) - Complex(-1.0)) < 1e-12);
    // Order: X after Z, so XZ|1> = X(-|1>) = -|0>.
    const auto xz = otp::pauli_xz(1, 1).matrix();
    CHECK(std::abs(xz(0, 1) - Complex(-1.0)) < 1e-12);
}

TEST_CASE("uniform key average is maximally mixed (perfect encryption)") {
    SeededRng rng(22);
    for (int n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 3; ++trial) {
            const auto rho = DensityMatrix::pure(random_state(n, rng));
            const auto avg = otp::average_encryption(rho);
            CHECK(qmath::trace_distance(avg, DensityMatrix::maximally_mixed(n)) <
                  1e-9);
            // Against the from-scratch oracle as well.
            CHECK((avg.matrix() - oracles::pad_average(rho.matrix(), n))
                      .cwiseAbs()
                      .maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("partial average decouples exactly the padded qubits") {
    SeededRng rng(23);
    const auto rho = DensityMatrix::pure(random_state(2, rng));
    const auto avg = otp::partial_average_encryption(rho, QubitSet{2});
    // Result must be (reduced state on qubit 1) (x) I/2.
    const auto expected = qmath::tensor(qmath::partial_trace(rho, QubitSet{1}),
                                        DensityMatrix::maximally_mixed(1));
    CHECK(qmath::trace_distance(avg, expected) < 1e-12);
    // Averaging nothing is the identity map; averaging everything mixes.
    CHECK(qmath::trace_distance(otp::partial_average_encryption(rho, QubitSet{}),
                                rho) < 1e-12);
    CHECK(qmath::trace_distance(
              otp::partial_average_encryption(rho, QubitSet{1, 2}),
              DensityMatrix::maximally_mixed(2)) < 1e-9);
}

TEST_CASE("decrypt_qubits inverts per-qubit pads on targets only") {
    SeededRng rng(24);
    const auto psi = random_state(3, rng);
    const auto key = otp::PadKey::random(3, rng);
    const auto beta = DensityMatrix::pure(otp::encrypt(psi, key));
    // Decrypt qubits 1 and 3 only.
    const auto partial = otp::decrypt_qubits(
        beta, {{key.r(1), key.s(1)}, {key.r(3), key.s(3)}}, QubitSet{1, 3});
    // Then qubit 2: full recovery.
    const auto full =
        otp::decrypt_qubits(partial, {{key.r(2), key.s(2)}}, QubitSet{2});
    CHECK(qmath::trace_distance(full, DensityMatrix::pure(psi)) < 1e-9);
    CHECK_THROWS(otp::decrypt_qubits(beta, {{0, 0}}, QubitSet{1, 2}));
}
