// hiddenbit.hpp
// Hidden bits from verifier coins: share preparation, prover measurement,
// reveal verification, k-fold amplification, and exact binding/hiding
// analysis by exhaustive enumeration over coins and measurement branches.

#pragma once

#include "qzk/qmath.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace qzk::hiddenbit {

using qmath::DensityMatrix;
using qmath::QubitSet;
using qmath::SeededRng;
using qmath::StateVector;

inline constexpr int kMaxExhaustiveK = 3;

// Verifier-side coins for one share pair: b selects which share he holds,
// s_b is its value, c is the Hadamard-basis value of the other share.
struct CoinTriple {
    int b = 0;
    int s_b = 0;
    int c = 0;
};

struct SharePair {
    int s0 = 0;
    int s1 = 0;

    int xor_value() const { return s0 ^ s1; }
    int at(int position) const { return position == 0 ? s0 : s1; }
};

// One hidden bit with security parameter k: k independent coin/share pairs,
// every pair's XOR equal to r.
struct HiddenBit {
    int k = 1;
    int r = 0;
    std::vector<CoinTriple> coins;   // verifier side, one per pair
    std::vector<SharePair> shares;   // prover side, one per pair
};

// |c^x> = (|0> + (-1)^c |1>) / sqrt(2)
inline StateVector hadamard_basis_state(int c) {
    qmath::Vector v(2);
    const double s = 1.0 / std::sqrt(2.0);
    v << s, (c ? -s : s);
    return StateVector(1, std::move(v));
}

// The two-qubit state U_{b,s_b,c} |00>: for b=0 it is |s_b> (x) |c^x>,
// for b=1 it is |c^x> (x) |s_b>.
inline StateVector share_prep_state(const CoinTriple& t) {
    const StateVector held = StateVector::basis(1, static_cast<std::uint64_t>(t.s_b));
    const StateVector other = hadamard_basis_state(t.c);
    return t.b == 0 ? qmath::tensor(held, other) : qmath::tensor(other, held);
}

// Full 2-qubit unitary whose action on |00> is share_prep_state(t).
// b=0: X^{s_b} (x) H X^c ;  b=1: H X^c (x) X^{s_b}.
inline qmath::UnitaryMatrix share_prep_unitary(const CoinTriple& t) {
    qmath::UnitaryMatrix held = t.s_b ? qmath::pauli_x() : qmath::UnitaryMatrix::identity(1);
    qmath::UnitaryMatrix other = qmath::hadamard();
    if (t.c) other = other * qmath::pauli_x();
    return t.b == 0 ? qmath::tensor(held, other) : qmath::tensor(other, held);
}

// Computational-basis measurement of both share qubits; outcome of qubit 1
// is s0, outcome of qubit 2 is s1.
inline SharePair prover_measure_shares(const StateVector& state, SeededRng& rng) {
    if (state.qubits() != 2) {
        throw std::invalid_argument("prover_measure_shares: expected a 2-qubit state");
    }
    const auto result = qmath::measure_computational(DensityMatrix::pure(state),
                                                     QubitSet{1, 2}, rng);
    return {static_cast<int>((result.bits >> 1) & 1u),
            static_cast<int>(result.bits & 1u)};
}

// Accept iff the revealed share at position b matches the verifier's s_b.
inline bool verify_reveal(const CoinTriple& t, const SharePair& revealed) {
    return revealed.at(t.b) == t.s_b;
}

// Reveal check for a full hidden bit: every pair must verify and carry the
// claimed value as its XOR.
inline bool verify_hidden_bit_reveal(const std::vector<CoinTriple>& coins,
                                     int claimed_r,
                                     const std::vector<SharePair>& revealed) {
    if (coins.size() != revealed.size()) return false;
    for (std::size_t i = 0; i < coins.size(); ++i) {
        if (revealed[i].xor_value() != claimed_r) return false;
        if (!verify_reveal(coins[i], revealed[i])) return false;
    }
    return true;
}

// Prover's 2-qubit state conditioned on the verifier's coin b, mixed over
// uniform (s_b, c). Both conditionals equal I/4.
inline DensityMatrix prover_conditional_state(int b) {
    std::vector<std::pair<double, DensityMatrix>> parts;
    for (int s = 0; s < 2; ++s) {
        for (int c = 0; c < 2; ++c) {
            parts.emplace_back(0.25, DensityMatrix::pure(share_prep_state({b, s, c})));
        }
    }
    return qmath::mixture(parts);
}

namespace detail {

inline void check_exhaustive_k(int k) {
    if (k < 1 || k > kMaxExhaustiveK) {
        throw std::invalid_argument("k outside the exhaustive regime (1..3)");
    }
}

}  // namespace detail

// Maximum passing probability over all deterministic reveal strategies of a
// prover who must claim the flipped bit: per pair, exactly one share is
// flipped, and the strategy may depend on all measured shares. Computed by
// exact integer enumeration over coins and strategy branches.
//
// The prover's post-measurement state is classical (prover_conditional_state
// is I/4), so deterministic strategies attain the maximum.
inline double binding_attack_value(int k) {
    detail::check_exhaustive_k(k);

    // Atom: hidden bit r, per pair (b, s_b, c); the prover's measured pair
    // has s_b at position b and s_b ^ r at the other position.
    // view key: measured shares of all pairs; per view, pick the flip
    // pattern (which position to flip in each pair) maximizing passes.
    const int pairs_space = 1 << (3 * k);  // (b, s_b, c) per pair
    std::map<std::uint64_t, std::map<std::uint64_t, std::int64_t>> pass_counts;
    std::int64_t total_atoms = 0;

    for (int r = 0; r < 2; ++r) {
        for (int coins = 0; coins < pairs_space; ++coins) {
            std::uint64_t view = 0;
            std::vector<int> b_bits(static_cast<std::size_t>(k));
            for (int j = 0; j < k; ++j) {
                const int b = (coins >> (3 * j)) & 1;
                const int sb = (coins >> (3 * j + 1)) & 1;
                b_bits[static_cast<std::size_t>(j)] = b;
                const int s0 = (b == 0) ? sb : (sb ^ r);
                const int s1 = (b == 0) ? (sb ^ r) : sb;
                view |= static_cast<std::uint64_t>(s0 | (s1 << 1)) << (2 * j);
            }
            ++total_atoms;
            for (std::uint64_t flip = 0; flip < (std::uint64_t{1} << k); ++flip) {
                // Flipping position p of pair j passes iff p != b_j.
                bool pass = true;
                for (int j = 0; j < k; ++j) {
                    const int p = static_cast<int>((flip >> j) & 1u);
                    if (p == b_bits[static_cast<std::size_t>(j)]) {
                        pass = false;
                        break;
                    }
                }
                if (pass) ++pass_counts[view][flip];
            }
        }
    }

    std::int64_t best_total = 0;
    for (const auto& [view, by_flip] : pass_counts) {
        std::int64_t best = 0;
        for (const auto& [flip, count] : by_flip) best = std::max(best, count);
        best_total += best;
    }
    return static_cast<double>(best_total) / static_cast<double>(total_atoms);
}

// Exact statistical distance between the distribution of r conditioned on
// the verifier's coins and the uniform bit, maximized over coin strings.
// Enumerates all coins and prover measurement branches with integer counts.
inline double hiding_audit(int k) {
    detail::check_exhaustive_k(k);

    // Per pair: coins (b, s_b, c) and measurement branch u for the
    // Hadamard-basis qubit; pair XOR is s_b ^ u. Atoms where the pairs
    // disagree on the XOR do not form a hidden bit and are conditioned out.
    const int pairs_space = 1 << (4 * k);  // (b, s_b, c, u) per pair
    std::map<std::uint64_t, std::array<std::int64_t, 2>> counts;

    for (int atoms = 0; atoms < pairs_space; ++atoms) {
        std::uint64_t coin_key = 0;
        int r = -1;
        bool consistent = true;
        for (int j = 0; j < k; ++j) {
            const int b = (atoms >> (4 * j)) & 1;
            const int sb = (atoms >> (4 * j + 1)) & 1;
            const int c = (atoms >> (4 * j + 2)) & 1;
            const int u = (atoms >> (4 * j + 3)) & 1;
            const int pair_r = sb ^ u;
            if (r == -1) {
                r = pair_r;
            } else if (pair_r != r) {
                consistent = false;
                break;
            }
            coin_key |= static_cast<std::uint64_t>(b | (sb << 1) | (c << 2)) << (3 * j);
        }
        if (!consistent) continue;
        ++counts[coin_key][static_cast<std::size_t>(r)];
    }

    double max_distance = 0.0;
    for (const auto& [key, ns] : counts) {
        const double total = static_cast<double>(ns[0] + ns[1]);
        const double p0 = static_cast<double>(ns[0]) / total;
        max_distance = std::max(max_distance, std::abs(p0 - 0.5));
    }
    return max_distance;
}

// --- Bit commitment from a hidden bit ------------------------------------

inline int commit(int c, int r) { return c ^ r; }
inline int open_commitment(int commitment, int r) { return commitment ^ r; }

// --- Honest generation ----------------------------------------------------

// Sample one hidden bit with security parameter k. Coins are uniform; the
// non-held share of each pair is the exact conditional s_b ^ r.
inline HiddenBit make_hidden_bit(int k, SeededRng& rng) {
    HiddenBit hb;
    hb.k = k;
    hb.r = rng.bit();
    for (int j = 0; j < k; ++j) {
        CoinTriple t{rng.bit(), rng.bit(), rng.bit()};
        const int other = t.s_b ^ hb.r;
        hb.coins.push_back(t);
        hb.shares.push_back(t.b == 0 ? SharePair{t.s_b, other}
                                     : SharePair{other, t.s_b});
    }
    return hb;
}

inline std::vector<HiddenBit> make_hidden_bits(int m, int k, SeededRng& rng) {
    std::vector<HiddenBit> out;
    out.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) out.push_back(make_hidden_bit(k, rng));
    return out;
}

// Lying reveal: claim r-bar by flipping exactly one share in every pair;
// the flipped position of each pair is chosen uniformly.
inline std::vector<SharePair> lying_reveal(const HiddenBit& hb, SeededRng& rng) {
    std::vector<SharePair> out;
    for (const auto& pair : hb.shares) {
        SharePair lied = pair;
        if (rng.bit() == 0) {
            lied.s0 ^= 1;
        } else {
            lied.s1 ^= 1;
        }
        out.push_back(lied);
    }
    return out;
}

}  // namespace qzk::hiddenbit
