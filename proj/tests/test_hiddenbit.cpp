#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qzk/hiddenbit.hpp"

#include <array>
#include <cmath>
#include <map>

using namespace qzk;
using qmath::Complex;
using qmath::DensityMatrix;
using qmath::Matrix;
using qmath::QubitSet;
using qmath::SeededRng;

TEST_CASE("share preparation matches the coin table") {
    const double s = 1.0 / std::sqrt(2.0);
    // b=0, s_b=1, c=0: |1> (x) |0^x> = (|10> + |11>)/sqrt(2).
    const auto psi = hiddenbit::share_prep_state({0, 1, 0});
    CHECK(std::abs(psi(2) - Complex(s)) < 1e-12);
    CHECK(std::abs(psi(3) - Complex(s)) < 1e-12);
    // b=1, s_b=0, c=1: |1^x> (x) |0> = (|00> - |10>)/sqrt(2).
    const auto phi = hiddenbit::share_prep_state({1, 0, 1});
    CHECK(std::abs(phi(0) - Complex(s)) < 1e-12);
    CHECK(std::abs(phi(2) - Complex(-s)) < 1e-12);

    // The preparation unitary acts on |00> as the state constructor.
    for (int b = 0; b < 2; ++b) {
        for (int sb = 0; sb < 2; ++sb) {
            for (int c = 0; c < 2; ++c) {
                const hiddenbit::CoinTriple t{b, sb, c};
                const auto via_unitary = qmath::apply_unitary(
                    qmath::StateVector::basis(2, 0),
                    hiddenbit::share_prep_unitary(t), QubitSet{1, 2});
                CHECK((via_unitary.amplitudes() -
                       hiddenbit::share_prep_state(t).amplitudes())
                          .cwiseAbs()
                          .maxCoeff() < 1e-12);
            }
        }
    }
}

TEST_CASE("measuring the shares: held share deterministic, other uniform") {
    for (int b = 0; b < 2; ++b) {
        for (int sb = 0; sb < 2; ++sb) {
            for (int c = 0; c < 2; ++c) {
                const auto rho = DensityMatrix::pure(
                    hiddenbit::share_prep_state({b, sb, c}));
                const auto dist =
                    qmath::measurement_distribution(rho, QubitSet{1, 2});
                for (const auto& [bits, p] : dist) {
                    const int s0 = static_cast<int>((bits >> 1) & 1u);
                    const int s1 = static_cast<int>(bits & 1u);
                    const int held = b == 0 ? s0 : s1;
                    if (held == sb) {
                        CHECK(p == doctest::Approx(0.5).epsilon(1e-12));
                    } else {
                        CHECK(p == doctest::Approx(0.0).epsilon(1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("reveal verification") {
    CHECK(hiddenbit::verify_reveal({0, 1, 0}, {1, 0}));
    CHECK_FALSE(hiddenbit::verify_reveal({0, 1, 0}, {0, 0}));
    CHECK(hiddenbit::verify_reveal({1, 0, 1}, {1, 0}));

    const std::vector<hiddenbit::CoinTriple> coins{{0, 1, 0}, {1, 0, 1}};
    const std::vector<hiddenbit::SharePair> good{{1, 0}, {1, 0}};  // XOR 1 both
    CHECK(hiddenbit::verify_hidden_bit_reveal(coins, 1, good));
    CHECK_FALSE(hiddenbit::verify_hidden_bit_reveal(coins, 0, good));
    const std::vector<hiddenbit::SharePair> mixed{{1, 0}, {0, 0}};  // XORs differ
    CHECK_FALSE(hiddenbit::verify_hidden_bit_reveal(coins, 1, mixed));
}

TEST_CASE("prover learns nothing about b: conditional states are I/4") {
    for (int b = 0; b < 2; ++b) {
        const auto rho = hiddenbit::prover_conditional_state(b);
        const double dev =
            (rho.matrix() - Matrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff();
        CHECK(dev <= 1e-12);
    }
}

TEST_CASE("binding attack value is exactly 2^-k") {
    CHECK(hiddenbit::binding_attack_value(1) == 0.5);
    CHECK(hiddenbit::binding_attack_value(2) == 0.25);
    CHECK(hiddenbit::binding_attack_value(3) == 0.125);
    CHECK_THROWS(hiddenbit::binding_attack_value(0));
    CHECK_THROWS(hiddenbit::binding_attack_value(9));
    // Independent game oracle: uniform flip positions give the same value.
    for (int k = 1; k <= 3; ++k) {
        CHECK(oracles::lying_pass_probability(k) ==
              hiddenbit::binding_attack_value(k));
    }
}

TEST_CASE("hiding audit is exactly zero") {
    for (int k = 1; k <= 3; ++k) {
        CHECK(hiddenbit::hiding_audit(k) == 0.0);
    }
}

TEST_CASE("commitment: hiding exact, opening the flipped bit caught") {
    // Distribution of commit(c, r) over uniform r, by integer counts.
    for (int c = 0; c < 2; ++c) {
        std::array<int, 2> counts{0, 0};
        for (int r = 0; r < 2; ++r) {
            ++counts[static_cast<std::size_t>(hiddenbit::commit(c, r))];
        }
        CHECK(counts[0] == counts[1]);  // statistical distance 0
    }
    CHECK(hiddenbit::open_commitment(hiddenbit::commit(1, 0), 0) == 1);
    CHECK(hiddenbit::open_commitment(hiddenbit::commit(1, 1), 1) == 1);
    // Opening c-bar requires claiming r-bar: caught w.p. exactly 1 - 2^-k.
    for (int k = 1; k <= 3; ++k) {
        const double caught = 1.0 - oracles::lying_pass_probability(k);
        CHECK(caught == 1.0 - 1.0 / static_cast<double>(1 << k));
    }
}

TEST_CASE("honest hidden bits have consistent shares") {
    SeededRng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const auto hb = hiddenbit::make_hidden_bit(3, rng);
        REQUIRE(hb.shares.size() == 3);
        for (std::size_t j = 0; j < hb.shares.size(); ++j) {
            CHECK(hb.shares[j].xor_value() == hb.r);
            CHECK(hiddenbit::verify_reveal(hb.coins[j], hb.shares[j]));
        }
        CHECK(hiddenbit::verify_hidden_bit_reveal(hb.coins, hb.r, hb.shares));
    }
}

TEST_CASE("lying reveal flips exactly one share per pair") {
    SeededRng rng(32);
    for (int trial = 0; trial < 50; ++trial) {
        const auto hb = hiddenbit::make_hidden_bit(2, rng);
        const auto lied = hiddenbit::lying_reveal(hb, rng);
        for (std::size_t j = 0; j < lied.size(); ++j) {
            CHECK(lied[j].xor_value() == (hb.r ^ 1));
            const int flips = (lied[j].s0 ^ hb.shares[j].s0) +
                              (lied[j].s1 ^ hb.shares[j].s1);
            CHECK(flips == 1);
        }
        // The lie never passes as the true value.
        CHECK_FALSE(hiddenbit::verify_hidden_bit_reveal(hb.coins, hb.r, lied));
    }
}
