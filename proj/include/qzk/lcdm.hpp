// lcdm.hpp
// Local Consistency of Density Matrices: the hidden-bit protocol that sends
// a one-time-padded witness, reveals the pad bits of a challenged qubit
// pair, and checks the decoded pair states against the instance matrices.
// Includes honest / fixed-state / reveal-lying provers, K parallel
// repetitions with a desk-scale accepting procedure, and the exact real and
// simulated verifier views.

#pragma once

#include "qzk/engine.hpp"
#include "qzk/hiddenbit.hpp"
#include "qzk/otp.hpp"
#include "qzk/qmath.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qzk::lcdm {

using qmath::DensityMatrix;
using qmath::QubitSet;
using qmath::SeededRng;
using qmath::StateVector;

struct LCDMInstance {
    int n = 0;  // witness qubits
    int t = 1;  // promise-gap precision: no instances are > 1/t away
    std::vector<std::pair<int, int>> pairs;               // 1-based, distinct
    std::map<std::pair<int, int>, DensityMatrix> matrices;  // 4x4 targets
};

inline void validate_instance(const LCDMInstance& inst) {
    if (inst.n < 2 || inst.n > 4) {
        throw std::invalid_argument("instance size must have 2..4 qubits");
    }
    if (inst.t < 1) throw std::invalid_argument("precision t must be positive");
    if (inst.pairs.empty()) throw std::invalid_argument("instance has no pairs");
    for (const auto& pr : inst.pairs) {
        const auto [i, j] = pr;
        if (i < 1 || j < 1 || i > inst.n || j > inst.n || i == j) {
            throw std::invalid_argument("pair indices out of range");
        }
        const auto it = inst.matrices.find(pr);
        if (it == inst.matrices.end() || it->second.qubits() != 2) {
            throw std::invalid_argument("missing or malformed target matrix");
        }
    }
}

using Witness = StateVector;

namespace detail {

inline qmath::UnitaryMatrix swap_gate() {
    qmath::Matrix m = qmath::Matrix::Zero(4, 4);
    m(0, 0) = 1.0;
    m(1, 2) = 1.0;
    m(2, 1) = 1.0;
    m(3, 3) = 1.0;
    return qmath::UnitaryMatrix(2, m);
}

}  // namespace detail

// Reduced state on the ordered pair (i, j); qubit order in the result
// matches the pair order even when i > j.
inline DensityMatrix reduced_pair(const DensityMatrix& rho, int i, int j) {
    DensityMatrix red =
        qmath::partial_trace(rho, QubitSet{std::min(i, j), std::max(i, j)});
    if (i > j) red = qmath::apply_unitary(red, detail::swap_gate(), QubitSet{1, 2});
    return red;
}

// Per-pair trace distances between the witness's reduced matrices and the
// instance targets. Yes instances give 0 everywhere; no instances exceed 1/t
// on some pair for every witness.
inline std::map<std::pair<int, int>, double> check_instance(const LCDMInstance& inst,
                                                            const Witness& w) {
    validate_instance(inst);
    if (w.qubits() != inst.n) throw std::invalid_argument("witness size mismatch");
    std::map<std::pair<int, int>, double> out;
    const DensityMatrix rho = DensityMatrix::pure(w);
    for (const auto& pr : inst.pairs) {
        out[pr] = qmath::trace_distance(reduced_pair(rho, pr.first, pr.second),
                                        inst.matrices.at(pr));
    }
    return out;
}

// The prover's first message: the padded witness.
inline StateVector prover_message(const Witness& w, const otp::PadKey& pad) {
    return otp::encrypt(w, pad);
}

// --- Repetitions and the accepting procedure ----------------------------------

struct RepetitionRecord {
    std::optional<otp::PadKey> pad;     // full key fragment of this repetition
    std::pair<int, int> challenge{0, 0};
    std::array<int, 4> revealed{};      // r_x, s_x, r_y, s_y as claimed
    bool reveal_ok = true;
    std::optional<DensityMatrix> z;     // decoded 2-qubit state, if reveal_ok
};

// Desk-scale replacement for the accepting procedure A: group repetitions
// by challenge pair, average each group's z, accept iff every nonempty
// group's average is within 1/(2t) of the target (empty groups pass
// vacuously). Any reveal failure rejects the whole run.
inline bool accept_procedure(const std::vector<RepetitionRecord>& records,
                             const LCDMInstance& inst) {
    validate_instance(inst);
    std::map<std::pair<int, int>, std::vector<DensityMatrix>> groups;
    for (const auto& rec : records) {
        if (!rec.reveal_ok || !rec.z) return false;
        groups[rec.challenge].push_back(*rec.z);
    }
    const double threshold = 1.0 / (2.0 * static_cast<double>(inst.t));
    for (const auto& [pair, zs] : groups) {
        std::vector<std::pair<double, DensityMatrix>> parts;
        const double w = 1.0 / static_cast<double>(zs.size());
        for (const auto& z : zs) parts.emplace_back(w, z);
        if (qmath::trace_distance(qmath::mixture(parts), inst.matrices.at(pair)) >
            threshold) {
            return false;
        }
    }
    return true;
}

// --- Prover strategies and protocol execution ---------------------------------

enum class ProverKind { honest, fixed_state, reveal_lying };

struct ProverStrategy {
    ProverKind kind = ProverKind::honest;
    std::optional<StateVector> state;  // fixed_state: what is sent instead
    int lie_bits = 1;                  // reveal_lying: lied revealed key bits (1..4)
};

enum class Mode { exact, mc };

struct LcdmResult {
    double acceptance = 0.0;
    double lower = 0.0;  // 95% Clopper-Pearson bounds in mc mode
    double upper = 1.0;
    bool exact = false;
    // P(one repetition's reveal check fails), for reveal-lying provers.
    double per_repetition_rejection = 0.0;
    std::vector<RepetitionRecord> sample_records;  // one sampled run
};

// Exact probability that lying about one hidden bit passes all its reveal
// checks: one share flipped per pair (uniform position), caught whenever
// the flipped position is the verifier's. Enumerated, equals 2^{-k}.
inline double lying_pass_probability(int k_hb) {
    hiddenbit::detail::check_exhaustive_k(k_hb);
    long long pass = 0;
    const long long total = 1LL << (2 * k_hb);
    for (long long atoms = 0; atoms < total; ++atoms) {
        bool ok = true;
        for (int j = 0; j < k_hb; ++j) {
            const int b = static_cast<int>((atoms >> (2 * j)) & 1);
            const int flip = static_cast<int>((atoms >> (2 * j + 1)) & 1);
            if (flip == b) {
                ok = false;
                break;
            }
        }
        if (ok) ++pass;
    }
    return static_cast<double>(pass) / static_cast<double>(total);
}

namespace detail {

// Pad key from 2n hidden bits, in (r1, s1, ..., rn, sn) order.
inline otp::PadKey pad_from_hidden_bits(const std::vector<hiddenbit::HiddenBit>& hbs,
                                        int n) {
    std::vector<int> bits;
    for (int i = 0; i < 2 * n; ++i) bits.push_back(hbs[static_cast<std::size_t>(i)].r);
    return otp::PadKey(n, std::move(bits));
}

// Decoded pair state when the claimed key differs from the true key by the
// flip pattern delta (dr_x, ds_x, dr_y, ds_y); phases cancel under
// conjugation, so only the XOR difference matters.
inline DensityMatrix corrupted_z(const DensityMatrix& z,
                                 const std::array<int, 4>& delta) {
    DensityMatrix out = z;
    out = qmath::apply_unitary(out, otp::pauli_xz(delta[0], delta[1]), QubitSet{1});
    out = qmath::apply_unitary(out, otp::pauli_xz(delta[2], delta[3]), QubitSet{2});
    return out;
}

inline std::array<int, 4> lie_delta(int lie_bits) {
    if (lie_bits < 1 || lie_bits > 4) {
        throw std::invalid_argument("lie_bits must be in 1..4");
    }
    std::array<int, 4> delta{};
    for (int i = 0; i < lie_bits; ++i) delta[static_cast<std::size_t>(i)] = 1;
    return delta;
}

// One fully sampled run, used in mc mode and for sample records.
inline std::vector<RepetitionRecord> sample_run(const LCDMInstance& inst,
                                                const StateVector& sent,
                                                const ProverStrategy& strat, int K,
                                                int k_hb, SeededRng& rng) {
    std::vector<RepetitionRecord> records;
    for (int rep = 0; rep < K; ++rep) {
        const auto hbs = hiddenbit::make_hidden_bits(2 * inst.n, k_hb, rng);
        const otp::PadKey pad = pad_from_hidden_bits(hbs, inst.n);
        const DensityMatrix beta = DensityMatrix::pure(otp::encrypt(sent, pad));

        const auto challenge =
            inst.pairs[static_cast<std::size_t>(rng.below(inst.pairs.size()))];
        const auto [x, y] = challenge;
        // Hidden-bit indices of (r_x, s_x, r_y, s_y).
        const std::array<int, 4> idx = {2 * (x - 1), 2 * (x - 1) + 1,
                                        2 * (y - 1), 2 * (y - 1) + 1};
        const std::array<int, 4> delta = strat.kind == ProverKind::reveal_lying
                                             ? lie_delta(strat.lie_bits)
                                             : std::array<int, 4>{};

        RepetitionRecord rec;
        rec.pad = pad;
        rec.challenge = challenge;
        for (int b = 0; b < 4; ++b) {
            const auto& hb = hbs[static_cast<std::size_t>(idx[static_cast<std::size_t>(b)])];
            const int claimed = hb.r ^ delta[static_cast<std::size_t>(b)];
            rec.revealed[static_cast<std::size_t>(b)] = claimed;
            const auto shares = delta[static_cast<std::size_t>(b)]
                                    ? hiddenbit::lying_reveal(hb, rng)
                                    : hb.shares;
            if (!hiddenbit::verify_hidden_bit_reveal(hb.coins, claimed, shares)) {
                rec.reveal_ok = false;
            }
        }
        if (rec.reveal_ok) {
            const DensityMatrix decoded = otp::decrypt_qubits(
                beta,
                {{rec.revealed[0], rec.revealed[1]}, {rec.revealed[2], rec.revealed[3]}},
                QubitSet{x, y});
            rec.z = reduced_pair(decoded, x, y);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace detail

// Execute the K-fold protocol. In exact mode the acceptance probability is
// computed by enumerating challenge tuples (the honest decode cancels the
// pad exactly, so each repetition's z depends only on its challenge), with
// the reveal-lying pass probability factored in per repetition. In mc mode
// full runs are sampled and bounded by Clopper-Pearson intervals.
inline LcdmResult run_lcdm(const LCDMInstance& inst, const Witness& witness,
                           const ProverStrategy& strat, int K, int k_hb,
                           SeededRng& rng, Mode mode, std::uint64_t trials = 2000) {
    validate_instance(inst);
    if (K < 1 || K > 16) throw std::invalid_argument("K must be in 1..16");
    hiddenbit::detail::check_exhaustive_k(k_hb);
    const StateVector& sent = strat.kind == ProverKind::fixed_state
                                  ? strat.state.value()
                                  : witness;
    if (sent.qubits() != inst.n) {
        throw std::invalid_argument("prover state size mismatch");
    }

    LcdmResult result;
    const double p_lie_pass =
        strat.kind == ProverKind::reveal_lying
            ? std::pow(lying_pass_probability(k_hb),
                       static_cast<double>(strat.lie_bits))
            : 1.0;
    result.per_repetition_rejection =
        strat.kind == ProverKind::reveal_lying ? 1.0 - p_lie_pass : 0.0;

    if (mode == Mode::exact) {
        // z per challenge: the decode cancels the pad; lying shifts the
        // claimed key by a fixed flip pattern.
        const DensityMatrix rho = DensityMatrix::pure(sent);
        std::map<std::pair<int, int>, DensityMatrix> z_of;
        for (const auto& pr : inst.pairs) {
            DensityMatrix z = reduced_pair(rho, pr.first, pr.second);
            if (strat.kind == ProverKind::reveal_lying) {
                z = detail::corrupted_z(z, detail::lie_delta(strat.lie_bits));
            }
            z_of.emplace(pr, std::move(z));
        }

        const std::size_t L = inst.pairs.size();
        double tuple_total = 1.0;
        std::uint64_t tuples = 1;
        for (int i = 0; i < K; ++i) {
            tuples *= L;
            tuple_total *= static_cast<double>(L);
        }
        if (tuples > (std::uint64_t{1} << 24)) {
            throw std::invalid_argument("exact mode: challenge space too large");
        }

        std::uint64_t accepted = 0;
        std::vector<RepetitionRecord> recs(static_cast<std::size_t>(K));
        for (std::uint64_t tup = 0; tup < tuples; ++tup) {
            std::uint64_t rest = tup;
            for (int i = 0; i < K; ++i) {
                const auto& pr = inst.pairs[static_cast<std::size_t>(rest % L)];
                rest /= L;
                recs[static_cast<std::size_t>(i)].challenge = pr;
                recs[static_cast<std::size_t>(i)].reveal_ok = true;
                recs[static_cast<std::size_t>(i)].z = z_of.at(pr);
            }
            if (accept_procedure(recs, inst)) ++accepted;
        }
        result.acceptance = std::pow(p_lie_pass, K) *
                            static_cast<double>(accepted) / tuple_total;
        result.lower = result.upper = result.acceptance;
        result.exact = true;
    } else {
        std::uint64_t successes = 0;
        for (std::uint64_t trial = 0; trial < trials; ++trial) {
            SeededRng trial_rng = rng.fork();
            const auto records =
                detail::sample_run(inst, sent, strat, K, k_hb, trial_rng);
            if (accept_procedure(records, inst)) ++successes;
        }
        result.acceptance =
            static_cast<double>(successes) / static_cast<double>(trials);
        const auto [lo, hi] = engine::clopper_pearson(successes, trials);
        result.lower = lo;
        result.upper = hi;
        result.exact = false;
    }
    result.sample_records = detail::sample_run(inst, sent, strat, K, k_hb, rng);
    return result;
}

// --- Verifier views and their simulators ---------------------------------------

struct Views {
    DensityMatrix rho1;       // state after the prover's message, pad averaged
    engine::CqState rho2;     // (challenge, revealed key bits) -> decoded state
};

namespace detail {

inline std::string view_key(const std::pair<int, int>& pr,
                            const std::array<int, 4>& bits) {
    std::ostringstream os;
    os << "l:" << pr.first << ',' << pr.second << "|keys:";
    for (int b : bits) os << b;
    return os.str();
}

// The (rho2 / sigma2) pipeline: pad the pair with the revealed bits, twirl
// the unrevealed qubits exactly, decode the pair, and keep everything.
inline engine::CqState second_view(const LCDMInstance& inst,
                                   const DensityMatrix& base) {
    engine::CqState view;
    const double weight = 1.0 / (static_cast<double>(inst.pairs.size()) * 16.0);
    for (const auto& pr : inst.pairs) {
        const auto [x, y] = pr;
        std::vector<int> others;
        for (int q = 1; q <= inst.n; ++q) {
            if (q != x && q != y) others.push_back(q);
        }
        for (int bits = 0; bits < 16; ++bits) {
            const std::array<int, 4> key = {bits & 1, (bits >> 1) & 1,
                                            (bits >> 2) & 1, (bits >> 3) & 1};
            DensityMatrix padded = base;
            padded = qmath::apply_unitary(padded, otp::pauli_xz(key[0], key[1]),
                                          QubitSet{x});
            padded = qmath::apply_unitary(padded, otp::pauli_xz(key[2], key[3]),
                                          QubitSet{y});
            if (!others.empty()) {
                padded = otp::partial_average_encryption(padded, QubitSet(others));
            }
            const DensityMatrix decoded = otp::decrypt_qubits(
                padded, {{key[0], key[1]}, {key[2], key[3]}}, QubitSet{x, y});
            view.add(view_key(pr, key), weight, decoded.matrix());
        }
    }
    return view;
}

}  // namespace detail

// Exact per-repetition verifier views of the honest run.
inline Views real_views(const LCDMInstance& inst, const Witness& w) {
    validate_instance(inst);
    if (w.qubits() != inst.n) throw std::invalid_argument("witness size mismatch");
    const DensityMatrix rho = DensityMatrix::pure(w);
    return {otp::average_encryption(rho), detail::second_view(inst, rho)};
}

// The target state alpha_l used by the simulator: M at the pair, totally
// mixed elsewhere. Built by direct index embedding.
inline DensityMatrix alpha_state(const LCDMInstance& inst,
                                 const std::pair<int, int>& pr) {
    const auto [i, j] = pr;
    const auto& m = inst.matrices.at(pr);
    const int n = inst.n;
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    const double rest_norm = static_cast<double>(std::size_t{1} << (n - 2));
    qmath::Matrix out = qmath::Matrix::Zero(dim, dim);
    for (std::uint64_t r = 0; r < static_cast<std::uint64_t>(dim); ++r) {
        for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(dim); ++c) {
            bool rest_equal = true;
            for (int q = 1; q <= n && rest_equal; ++q) {
                if (q == i || q == j) continue;
                rest_equal = qmath::detail::qubit_bit(r, q, n) ==
                             qmath::detail::qubit_bit(c, q, n);
            }
            if (!rest_equal) continue;
            const auto mr = static_cast<Eigen::Index>(
                2 * qmath::detail::qubit_bit(r, i, n) + qmath::detail::qubit_bit(r, j, n));
            const auto mc = static_cast<Eigen::Index>(
                2 * qmath::detail::qubit_bit(c, i, n) + qmath::detail::qubit_bit(c, j, n));
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                m(mr, mc) / rest_norm;
        }
    }
    return DensityMatrix(n, std::move(out));
}

// Simulated views: sigma1 is totally mixed; sigma2 runs the identical
// pad/twirl/decode pipeline on alpha_l per challenge instead of the witness.
inline Views simulate_views(const LCDMInstance& inst) {
    validate_instance(inst);
    engine::CqState sigma2;
    const double inv_pairs = 1.0 / static_cast<double>(inst.pairs.size());
    for (const auto& pr : inst.pairs) {
        LCDMInstance one = inst;
        one.pairs = {pr};
        const engine::CqState part = detail::second_view(one, alpha_state(inst, pr));
        for (const auto& [key, block] : part.blocks()) {
            // part's blocks carry weight 1/16; rescale to 1/(|L|*16).
            sigma2.add(key, inv_pairs, block);
        }
    }
    return {DensityMatrix::maximally_mixed(inst.n), sigma2};
}

struct ViewDistances {
    double first = 0.0;   // trace_distance(sigma1, rho1)
    double second = 0.0;  // cq trace distance(sigma2, rho2)
};

inline ViewDistances view_distances(const Views& real, const Views& sim) {
    return {qmath::trace_distance(real.rho1, sim.rho1),
            engine::cq_trace_distance(real.rho2, sim.rho2)};
}

}  // namespace qzk::lcdm
