// compiler.hpp
// Compiles a classical hidden-bit protocol (commit / challenge / reveal
// schedule) into a coin-model quantum protocol: phase 1 turns verifier
// coins into hidden bits via share states, phase 2 replays the classical
// messages with coin-controlled unitaries and classical transport through
// the two-qubit message register. Also builds the compiled simulator.
//
// For security parameter k > 1 the k share pairs of one hidden bit have
// independent XORs; the prover's commit message therefore carries alignment
// offsets d_{i,j} = r_{i,0} xor r_{i,j} (j >= 1), and the reveal check
// requires pair j's XOR to equal claimed_r xor d_{i,j}. Lying about the
// hidden bit then forces a flip in every pair.

#pragma once

#include "qzk/engine.hpp"
#include "qzk/hiddenbit.hpp"
#include "qzk/qmath.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qzk::compiler {

using engine::Actor;
using engine::ControlledStep;
using engine::GateOp;
using engine::MeasureStep;
using engine::ProtocolStep;
using engine::RegisterLayout;
using qmath::QubitSet;

// --- Exact classical distributions -----------------------------------------

// Finitely supported distribution with integer weights over a common
// denominator; used wherever the analyses must produce exact rationals.
struct ClassicalDist {
    std::map<std::string, long long> weights;
    long long den = 1;

    void add(const std::string& key, long long num) { weights[key] += num; }
};

inline double statistical_distance(const ClassicalDist& a, const ClassicalDist& b) {
    __int128 sum = 0;
    std::set<std::string> keys;
    for (const auto& [k, v] : a.weights) keys.insert(k);
    for (const auto& [k, v] : b.weights) keys.insert(k);
    for (const auto& key : keys) {
        const auto ita = a.weights.find(key);
        const auto itb = b.weights.find(key);
        const __int128 wa = ita == a.weights.end() ? 0 : ita->second;
        const __int128 wb = itb == b.weights.end() ? 0 : itb->second;
        const __int128 diff = wa * b.den - wb * a.den;
        sum += diff < 0 ? -diff : diff;
    }
    return 0.5 * static_cast<double>(sum) /
           (static_cast<double>(a.den) * static_cast<double>(b.den));
}

// --- The classical hidden-bit protocol --------------------------------------

// One-round commit / challenge / reveal protocol where the prover starts
// with m hidden bits of security parameter k: he commits to m plaintext
// bits as a_i = c_i xor r_i, the verifier challenges from his coins, and
// the prover opens the challenged hidden bits.
struct ClassicalHBProtocol {
    int m = 0;
    int k = 1;
    int coin_count = 0;  // verifier challenge coins

    // Honest prover plaintext distribution (integer weights / honest_den).
    std::vector<std::pair<long long, std::vector<int>>> honest_plaintexts;
    long long honest_den = 1;

    std::function<int(const std::vector<int>& coins)> challenge;
    std::function<std::vector<int>(int challenge)> reveal_set;  // 0-based bit indices
    // opened: plaintext values of reveal_set(challenge), in schedule order
    std::function<bool(int challenge, const std::vector<int>& opened)> accept;
};

inline void check_protocol(const ClassicalHBProtocol& p) {
    if (p.m <= 0 || p.k < 1) throw std::invalid_argument("malformed protocol: m, k");
    if (!p.challenge || !p.reveal_set || !p.accept) {
        throw std::invalid_argument("malformed protocol: missing schedule functions");
    }
    std::vector<int> coins(static_cast<std::size_t>(p.coin_count), 0);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << p.coin_count); ++v) {
        for (int i = 0; i < p.coin_count; ++i) {
            coins[static_cast<std::size_t>(i)] = static_cast<int>((v >> i) & 1u);
        }
        for (int idx : p.reveal_set(p.challenge(coins))) {
            if (idx < 0 || idx >= p.m) {
                throw std::invalid_argument("reveal schedule references invalid hidden bit");
            }
        }
    }
    for (const auto& [w, plain] : p.honest_plaintexts) {
        if (static_cast<int>(plain.size()) != p.m) {
            throw std::invalid_argument("honest plaintext has wrong length");
        }
    }
}

// Compiled prover behavior for executable runs. Lying about a hidden bit
// claims r-bar: one share (s0) is flipped in every pair, offsets stay honest.
struct ProverBehavior {
    std::vector<int> plaintext;  // m committed bits
    std::set<int> lie_on;
};

// --- Compilation -------------------------------------------------------------

struct CompiledProtocol {
    ClassicalHBProtocol source;
    RegisterLayout layout;
    std::vector<ProtocolStep> steps;
    int coin_budget = 0;
    // Indices into the run history at which the verifier's view is audited
    // (after commits, after the challenge, after reveals, final).
    std::vector<std::size_t> audit_rounds;
    // Visible record labels present at each audit round, in creation order.
    std::vector<std::vector<std::string>> audit_labels;
};

namespace detail {

inline std::string share_label(int i, int j) {
    return "sh_" + std::to_string(i) + "_" + std::to_string(j);
}
inline std::string reveal_label(int i, int j) {
    return "rv_" + std::to_string(i) + "_" + std::to_string(j);
}
inline std::string commit_label(int i) { return "a_" + std::to_string(i); }
inline std::string offset_label(int i, int j) {
    return "d_" + std::to_string(i) + "_" + std::to_string(j);
}
inline std::string challenge_label(int t) { return "ch_" + std::to_string(t); }

// Honest share pair for coins (b, s_b) and pair XOR x.
inline hiddenbit::SharePair shares_from(int b, int sb, int x) {
    const int other = sb ^ x;
    return b == 0 ? hiddenbit::SharePair{sb, other} : hiddenbit::SharePair{other, sb};
}

}  // namespace detail

// Build the executable coin-model protocol. The message register is two
// qubits, reused: every classical message is written into M with X gates,
// measured by the receiver and reset. Every verifier step uses coins only
// as controls and so passes coin_control_check.
inline CompiledProtocol compile(const ClassicalHBProtocol& p,
                                const ProverBehavior& behavior) {
    check_protocol(p);
    if (static_cast<int>(behavior.plaintext.size()) != p.m) {
        throw std::invalid_argument("prover behavior plaintext has wrong length");
    }

    CompiledProtocol cp;
    cp.source = p;
    const int hb_coins = 3 * p.m * p.k;
    cp.coin_budget = hb_coins + p.coin_count;
    cp.layout = RegisterLayout{1, cp.coin_budget, 2, 0, 0};

    const int m1 = cp.layout.m_first();
    const int m2 = m1 + 1;
    const int accept_slot = 1;
    const int proto_coin_first = hb_coins + 1;  // 1-based coin index

    auto reset_two = [m1, m2](const engine::ClassicalContext&, std::uint64_t bits) {
        std::vector<GateOp> ops;
        if ((bits >> 1) & 1u) ops.push_back({qmath::pauli_x(), QubitSet{m1}});
        if (bits & 1u) ops.push_back({qmath::pauli_x(), QubitSet{m2}});
        return ops;
    };
    auto reset_one = [m1](const engine::ClassicalContext&, std::uint64_t bits) {
        std::vector<GateOp> ops;
        if (bits & 1u) ops.push_back({qmath::pauli_x(), QubitSet{m1}});
        return ops;
    };

    // Prover sends one classical bit through M1; the verifier records it.
    auto send_bit_to_verifier =
        [&cp, m1, reset_one](std::vector<std::string> sources,
                             std::function<int(const engine::ClassicalContext&)> bit,
                             const std::string& label) {
            cp.steps.push_back(ControlledStep{
                Actor::prover,
                {},
                std::move(sources),
                QubitSet{m1},
                [bit, m1](const engine::ClassicalContext& ctx) {
                    std::vector<GateOp> ops;
                    if (bit(ctx)) ops.push_back({qmath::pauli_x(), QubitSet{m1}});
                    return ops;
                }});
            cp.steps.push_back(
                MeasureStep{Actor::verifier, QubitSet{m1}, label, false, reset_one});
        };

    std::vector<std::string> visible;

    // Phase 1: create the share states and let the prover measure them.
    for (int i = 0; i < p.m; ++i) {
        for (int j = 0; j < p.k; ++j) {
            const int base = 3 * (i * p.k + j);  // 1-based coin indices base+1..base+3
            cp.steps.push_back(ControlledStep{
                Actor::verifier,
                {base + 1, base + 2, base + 3},
                {},
                QubitSet{m1, m2},
                [base, m1, m2](const engine::ClassicalContext& ctx) {
                    const hiddenbit::CoinTriple t{ctx.coin(base + 1),
                                                  ctx.coin(base + 2),
                                                  ctx.coin(base + 3)};
                    return std::vector<GateOp>{
                        {hiddenbit::share_prep_unitary(t), QubitSet{m1, m2}}};
                }});
            cp.steps.push_back(MeasureStep{Actor::prover, QubitSet{m1, m2},
                                           detail::share_label(i, j), false,
                                           reset_two});
        }
    }

    // Phase 2a: commitment message a_i = c_i xor r_{i,0}, plus the
    // alignment offsets d_{i,j} for j >= 1.
    for (int i = 0; i < p.m; ++i) {
        const std::string sh0 = detail::share_label(i, 0);
        const int plain_bit = behavior.plaintext[static_cast<std::size_t>(i)];
        send_bit_to_verifier(
            {sh0},
            [sh0, plain_bit](const engine::ClassicalContext& ctx) {
                const auto& sh = ctx.record(sh0);
                return plain_bit ^ sh[0] ^ sh[1];
            },
            detail::commit_label(i));
        visible.push_back(detail::commit_label(i));
        for (int j = 1; j < p.k; ++j) {
            const std::string shj = detail::share_label(i, j);
            send_bit_to_verifier(
                {sh0, shj},
                [sh0, shj](const engine::ClassicalContext& ctx) {
                    const auto& a = ctx.record(sh0);
                    const auto& b = ctx.record(shj);
                    return a[0] ^ a[1] ^ b[0] ^ b[1];
                },
                detail::offset_label(i, j));
            visible.push_back(detail::offset_label(i, j));
        }
    }
    cp.audit_rounds.push_back(cp.steps.size());
    cp.audit_labels.push_back(visible);

    // Phase 2b: challenge message, computed from the original coins.
    for (int t = 0; t < p.coin_count; ++t) {
        const int coin_idx = proto_coin_first + t;
        cp.steps.push_back(ControlledStep{
            Actor::verifier,
            {coin_idx},
            {},
            QubitSet{m1},
            [coin_idx, m1](const engine::ClassicalContext& ctx) {
                std::vector<GateOp> ops;
                if (ctx.coin(coin_idx)) ops.push_back({qmath::pauli_x(), QubitSet{m1}});
                return ops;
            }});
        cp.steps.push_back(MeasureStep{Actor::prover, QubitSet{m1},
                                       detail::challenge_label(t), true, reset_one});
        visible.push_back(detail::challenge_label(t));
    }
    cp.audit_rounds.push_back(cp.steps.size());
    cp.audit_labels.push_back(visible);

    auto challenge_from_records = [p](const engine::ClassicalContext& ctx) {
        std::vector<int> coins;
        for (int t = 0; t < p.coin_count; ++t) {
            coins.push_back(ctx.record_bit(detail::challenge_label(t), 0));
        }
        return p.challenge(coins);
    };

    // Phase 2c: reveal message. Unchallenged bits are sent as 00.
    for (int i = 0; i < p.m; ++i) {
        for (int j = 0; j < p.k; ++j) {
            const std::string sh = detail::share_label(i, j);
            std::vector<std::string> sources{sh};
            for (int t = 0; t < p.coin_count; ++t) {
                sources.push_back(detail::challenge_label(t));
            }
            const bool lie = behavior.lie_on.count(i) > 0;
            cp.steps.push_back(ControlledStep{
                Actor::prover,
                {},
                std::move(sources),
                QubitSet{m1, m2},
                [sh, i, lie, m1, m2, challenge_from_records,
                 p](const engine::ClassicalContext& ctx) {
                    std::vector<GateOp> ops;
                    const int ch = challenge_from_records(ctx);
                    const auto revealed = p.reveal_set(ch);
                    if (std::find(revealed.begin(), revealed.end(), i) ==
                        revealed.end()) {
                        return ops;
                    }
                    auto bits = ctx.record(sh);
                    if (lie) bits[0] ^= 1;
                    if (bits[0]) ops.push_back({qmath::pauli_x(), QubitSet{m1}});
                    if (bits[1]) ops.push_back({qmath::pauli_x(), QubitSet{m2}});
                    return ops;
                }});
            cp.steps.push_back(MeasureStep{Actor::verifier, QubitSet{m1, m2},
                                           detail::reveal_label(i, j), false,
                                           reset_two});
            visible.push_back(detail::reveal_label(i, j));
        }
    }
    cp.audit_rounds.push_back(cp.steps.size());
    cp.audit_labels.push_back(visible);

    // Final verifier decision: reveal checks plus the classical predicate.
    {
        std::vector<int> coin_controls;
        for (int c = 1; c <= cp.coin_budget; ++c) coin_controls.push_back(c);
        std::vector<std::string> sources;
        for (int i = 0; i < p.m; ++i) {
            sources.push_back(detail::commit_label(i));
            for (int j = 1; j < p.k; ++j) sources.push_back(detail::offset_label(i, j));
            for (int j = 0; j < p.k; ++j) sources.push_back(detail::reveal_label(i, j));
        }
        cp.steps.push_back(ControlledStep{
            Actor::verifier,
            std::move(coin_controls),
            std::move(sources),
            QubitSet{accept_slot},
            [p, proto_coin_first, accept_slot](const engine::ClassicalContext& ctx) {
                std::vector<int> coins;
                for (int t = 0; t < p.coin_count; ++t) {
                    coins.push_back(ctx.coin(proto_coin_first + t));
                }
                const int ch = p.challenge(coins);
                bool ok = true;
                std::vector<int> opened;
                for (int i : p.reveal_set(ch)) {
                    const auto& rv0 = ctx.record(detail::reveal_label(i, 0));
                    const int claimed_r = rv0[0] ^ rv0[1];
                    for (int j = 0; j < p.k && ok; ++j) {
                        const int base = 3 * (i * p.k + j);
                        const hiddenbit::CoinTriple t{ctx.coin(base + 1),
                                                      ctx.coin(base + 2),
                                                      ctx.coin(base + 3)};
                        const auto& rv = ctx.record(detail::reveal_label(i, j));
                        const hiddenbit::SharePair pair{rv[0], rv[1]};
                        const int offset =
                            j == 0 ? 0 : ctx.record_bit(detail::offset_label(i, j), 0);
                        if (pair.xor_value() != (claimed_r ^ offset)) ok = false;
                        if (!hiddenbit::verify_reveal(t, pair)) ok = false;
                    }
                    if (!ok) break;
                    opened.push_back(ctx.record_bit(detail::commit_label(i), 0) ^
                                     claimed_r);
                }
                std::vector<GateOp> ops;
                if (ok && p.accept(ch, opened)) {
                    ops.push_back({qmath::pauli_x(), QubitSet{accept_slot}});
                }
                return ops;
            }});
    }
    cp.audit_rounds.push_back(cp.steps.size());
    cp.audit_labels.push_back(visible);

    return cp;
}

// All verifier steps of a compiled protocol must use coins only as controls.
inline bool compiled_coin_control_ok(const CompiledProtocol& cp) {
    for (const auto& step : cp.steps) {
        if (!engine::coin_control_check(step, cp.layout)) return false;
    }
    return true;
}

// --- Compiled simulator -------------------------------------------------------

// Classical simulator: exact distribution of opened plaintext values
// conditioned on the challenge-coin value.
struct ClassicalSimulator {
    // coin value -> list of (weight numerator, plaintext of each revealed bit)
    std::function<std::vector<std::pair<long long, std::vector<int>>>(int coin_value)>
        opened_plaintexts;
    long long den = 1;
};

// Round-indexed simulator for a compiled protocol small enough to run
// through the engine. Flips all the verifier coins, reconstructs the share
// pairs of every revealed bit from the simulated (b, s_b, c) and r, and
// reproduces the view's classical key format exactly.
//
// Per hidden bit the simulator enumerates k free bits: for a revealed bit
// the hidden value r and the k-1 offsets, for an unrevealed bit the
// commitment and the k-1 offsets. Both match the real view's per-bit
// marginal bijectively.
inline engine::Simulator compile_simulator(const ClassicalSimulator& sim,
                                           const CompiledProtocol& cp) {
    const ClassicalHBProtocol p = cp.source;
    const int hb_coins = 3 * p.m * p.k;

    return [sim, cp, p, hb_coins](std::size_t round) {
        std::size_t stage = 0;
        while (stage < cp.audit_rounds.size() && cp.audit_rounds[stage] != round) {
            ++stage;
        }
        if (stage == cp.audit_rounds.size()) {
            throw std::invalid_argument("simulator queried at a non-audit round");
        }
        const auto& labels = cp.audit_labels[stage];
        const bool final_stage = stage + 1 == cp.audit_rounds.size();

        engine::CqState out;
        const std::uint64_t hb_space = std::uint64_t{1} << hb_coins;
        const std::uint64_t proto_space = std::uint64_t{1} << p.coin_count;
        const int free_bits = p.m * p.k;  // one per (bit, pair)
        const std::uint64_t free_space = std::uint64_t{1} << free_bits;

        for (std::uint64_t pv = 0; pv < proto_space; ++pv) {
            std::vector<int> proto_coins;
            for (int t = 0; t < p.coin_count; ++t) {
                proto_coins.push_back(static_cast<int>((pv >> t) & 1u));
            }
            const int ch = p.challenge(proto_coins);
            const auto revealed_idx = p.reveal_set(ch);
            const auto is_revealed = [&revealed_idx](int i) {
                return std::find(revealed_idx.begin(), revealed_idx.end(), i) !=
                       revealed_idx.end();
            };
            for (const auto& [wnum, opened_plain] : sim.opened_plaintexts(ch)) {
                std::map<int, int> plain_of;
                for (std::size_t q = 0; q < revealed_idx.size(); ++q) {
                    plain_of[revealed_idx[q]] = opened_plain[q];
                }
                for (std::uint64_t hv = 0; hv < hb_space; ++hv) {
                    std::vector<int> coins;
                    for (int i = 0; i < hb_coins; ++i) {
                        coins.push_back(static_cast<int>((hv >> i) & 1u));
                    }
                    for (std::uint64_t fv = 0; fv < free_space; ++fv) {
                        std::map<std::string, std::vector<int>> records;
                        for (int i = 0; i < p.m; ++i) {
                            const int f0 = static_cast<int>((fv >> (i * p.k)) & 1u);
                            if (is_revealed(i)) {
                                const int r = f0;
                                records[detail::commit_label(i)] = {plain_of[i] ^ r};
                                for (int j = 0; j < p.k; ++j) {
                                    const int fj = static_cast<int>(
                                        (fv >> (i * p.k + j)) & 1u);
                                    const int pair_xor = j == 0 ? r : r ^ fj;
                                    if (j > 0) {
                                        records[detail::offset_label(i, j)] = {fj};
                                    }
                                    const int base = 3 * (i * p.k + j);
                                    const auto sp = detail::shares_from(
                                        coins[static_cast<std::size_t>(base)],
                                        coins[static_cast<std::size_t>(base + 1)],
                                        pair_xor);
                                    records[detail::reveal_label(i, j)] = {sp.s0,
                                                                           sp.s1};
                                }
                            } else {
                                records[detail::commit_label(i)] = {f0};
                                for (int j = 1; j < p.k; ++j) {
                                    records[detail::offset_label(i, j)] = {
                                        static_cast<int>((fv >> (i * p.k + j)) & 1u)};
                                }
                                for (int j = 0; j < p.k; ++j) {
                                    records[detail::reveal_label(i, j)] = {0, 0};
                                }
                            }
                        }
                        for (int t = 0; t < p.coin_count; ++t) {
                            records[detail::challenge_label(t)] = {
                                proto_coins[static_cast<std::size_t>(t)]};
                        }
                        const bool accept =
                            final_stage && p.accept(ch, opened_plain);

                        std::ostringstream key;
                        key << "c:";
                        for (int bit : coins) key << bit;
                        for (int bit : proto_coins) key << bit;
                        for (const auto& label : labels) {
                            key << '|' << label << ':';
                            for (int bit : records.at(label)) key << bit;
                        }
                        const std::uint64_t basis = accept ? 4u : 0u;  // qubit 1 of 3
                        const double weight =
                            static_cast<double>(wnum) /
                            (static_cast<double>(sim.den) *
                             static_cast<double>(proto_space) *
                             static_cast<double>(hb_space) *
                             static_cast<double>(free_space));
                        out.add(key.str(), weight,
                                qmath::DensityMatrix::basis(3, basis).matrix());
                    }
                }
            }
        }
        return out;
    };
}

// --- Exact acceptance and factored ZK audit ----------------------------------

namespace detail {

// Exact challenge distribution: value -> number of coin strings mapping to it.
inline std::map<int, long long> challenge_counts(const ClassicalHBProtocol& p) {
    std::map<int, long long> counts;
    std::vector<int> coins(static_cast<std::size_t>(p.coin_count), 0);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << p.coin_count); ++v) {
        for (int t = 0; t < p.coin_count; ++t) {
            coins[static_cast<std::size_t>(t)] = static_cast<int>((v >> t) & 1u);
        }
        ++counts[p.challenge(coins)];
    }
    return counts;
}

}  // namespace detail

// Exact honest acceptance of the classical protocol. Honest reveals verify
// with probability 1, so acceptance is the predicate averaged over the coin
// string and the honest plaintext distribution.
inline double honest_acceptance_exact(const ClassicalHBProtocol& p) {
    check_protocol(p);
    long long num = 0;
    long long plain_total = 0;
    const auto ch_counts = detail::challenge_counts(p);
    for (const auto& [ch, ch_count] : ch_counts) {
        const auto revealed = p.reveal_set(ch);
        for (const auto& [w, plain] : p.honest_plaintexts) {
            std::vector<int> opened;
            for (int i : revealed) opened.push_back(plain[static_cast<std::size_t>(i)]);
            if (p.accept(ch, opened)) num += ch_count * w;
        }
    }
    for (const auto& [w, plain] : p.honest_plaintexts) plain_total += w;
    const long long den = (1LL << p.coin_count) * plain_total;
    return static_cast<double>(num) / static_cast<double>(den);
}

// Factored exact ZK audit for protocols whose compiled branch expansion is
// too large to run directly. Conditioned on the challenge-coin value, both
// the real compiled view and the compiled simulator's output factor into
// independent per-hidden-bit components (coins, commitment, offsets and, at
// the reveal round, the revealed shares) mixed over the opened-plaintext
// distribution. By the hybrid argument the per-round trace distance is
// bounded by
//   sum_ch P(ch) [ d(opened plaintexts) + sum_bits max_c d(bit factor | c) ],
// and every term is computed exactly with integer weights.
struct FactoredAuditReport {
    double commit_bound = 0.0;
    double challenge_bound = 0.0;
    double reveal_bound = 0.0;
    double max_bound = 0.0;
    bool pass = false;
};

namespace detail {

// Real per-bit view factor given the bit's plaintext value: enumerate the
// pair coins (b, s_b, c) and the prover's measurement branch u per pair.
inline ClassicalDist real_bit_factor(int k, int plain, bool revealed,
                                     bool reveal_round) {
    ClassicalDist dist;
    dist.den = 1LL << (4 * k);
    for (std::uint64_t atoms = 0; atoms < (std::uint64_t{1} << (4 * k)); ++atoms) {
        std::ostringstream coins, rv;
        std::vector<int> xs;
        for (int j = 0; j < k; ++j) {
            const int b = static_cast<int>((atoms >> (4 * j)) & 1u);
            const int sb = static_cast<int>((atoms >> (4 * j + 1)) & 1u);
            const int cc = static_cast<int>((atoms >> (4 * j + 2)) & 1u);
            const int u = static_cast<int>((atoms >> (4 * j + 3)) & 1u);
            coins << b << sb << cc;
            const int s0 = b == 0 ? sb : u;
            const int s1 = b == 0 ? u : sb;
            xs.push_back(s0 ^ s1);
            rv << (revealed && reveal_round ? std::to_string(s0) + std::to_string(s1)
                                            : std::string("00"));
        }
        std::ostringstream key;
        key << coins.str() << "|a" << (plain ^ xs[0]) << "|d";
        for (int j = 1; j < k; ++j) key << (xs[0] ^ xs[static_cast<std::size_t>(j)]);
        if (reveal_round) key << "|rv" << rv.str();
        dist.add(key.str(), 1);
    }
    return dist;
}

// Simulated per-bit view factor: coins flipped fresh; for a revealed bit
// the hidden value and offsets are enumerated and the shares reconstructed,
// for an unrevealed bit the commitment and offsets are uniform.
inline ClassicalDist sim_bit_factor(int k, int plain, bool revealed,
                                    bool reveal_round) {
    ClassicalDist dist;
    dist.den = 1LL << (4 * k);
    for (std::uint64_t coins = 0; coins < (std::uint64_t{1} << (3 * k)); ++coins) {
        for (std::uint64_t free = 0; free < (std::uint64_t{1} << k); ++free) {
            std::ostringstream coin_str, rv;
            const int f0 = static_cast<int>(free & 1u);
            int a = 0;
            std::vector<int> ds;
            for (int j = 0; j < k; ++j) {
                const int b = static_cast<int>((coins >> (3 * j)) & 1u);
                const int sb = static_cast<int>((coins >> (3 * j + 1)) & 1u);
                const int cc = static_cast<int>((coins >> (3 * j + 2)) & 1u);
                coin_str << b << sb << cc;
                const int fj = static_cast<int>((free >> j) & 1u);
                if (revealed) {
                    const int x = j == 0 ? f0 : f0 ^ fj;
                    const auto sp = shares_from(b, sb, x);
                    rv << (reveal_round ? std::to_string(sp.s0) + std::to_string(sp.s1)
                                        : std::string("00"));
                    if (j > 0) ds.push_back(fj);
                } else {
                    rv << "00";
                    if (j > 0) ds.push_back(fj);
                }
            }
            a = revealed ? (plain ^ f0) : f0;
            std::ostringstream key;
            key << coin_str.str() << "|a" << a << "|d";
            for (int d : ds) key << d;
            if (reveal_round) key << "|rv" << rv.str();
            dist.add(key.str(), 1);
        }
    }
    return dist;
}

inline ClassicalDist real_opened_dist(const ClassicalHBProtocol& p, int ch) {
    ClassicalDist dist;
    dist.den = 0;
    const auto revealed = p.reveal_set(ch);
    for (const auto& [w, plain] : p.honest_plaintexts) {
        std::ostringstream key;
        for (int i : revealed) key << plain[static_cast<std::size_t>(i)];
        dist.add(key.str(), w);
        dist.den += w;
    }
    return dist;
}

inline ClassicalDist sim_opened_dist(const ClassicalSimulator& sim, int ch) {
    ClassicalDist dist;
    dist.den = sim.den;
    for (const auto& [w, plain] : sim.opened_plaintexts(ch)) {
        std::ostringstream key;
        for (int bit : plain) key << bit;
        dist.add(key.str(), w);
    }
    return dist;
}

}  // namespace detail

inline FactoredAuditReport factored_zk_audit(const ClassicalHBProtocol& p,
                                             const ClassicalSimulator& sim,
                                             double tolerance) {
    check_protocol(p);
    if (p.honest_plaintexts.empty()) {
        throw std::invalid_argument("factored_zk_audit: audits need a yes instance");
    }
    const auto ch_counts = detail::challenge_counts(p);
    const double coin_space = static_cast<double>(std::uint64_t{1} << p.coin_count);

    FactoredAuditReport report;
    for (const bool reveal_round : {false, true}) {
        double bound = 0.0;
        for (const auto& [ch, count] : ch_counts) {
            const double pch = static_cast<double>(count) / coin_space;
            double per_ch = statistical_distance(detail::real_opened_dist(p, ch),
                                                 detail::sim_opened_dist(sim, ch));
            const auto revealed = p.reveal_set(ch);
            for (int i = 0; i < p.m; ++i) {
                const bool is_rev = std::find(revealed.begin(), revealed.end(), i) !=
                                    revealed.end();
                double worst = 0.0;
                for (int c = 0; c < 2; ++c) {
                    worst = std::max(
                        worst, statistical_distance(
                                   detail::real_bit_factor(p.k, c, is_rev, reveal_round),
                                   detail::sim_bit_factor(p.k, c, is_rev, reveal_round)));
                }
                per_ch += worst;
            }
            bound += pch * per_ch;
        }
        if (reveal_round) {
            report.reveal_bound = bound;
        } else {
            report.commit_bound = bound;
            // The challenge message is a deterministic function of coins
            // already present in the view key, so it adds no distance.
            report.challenge_bound = bound;
        }
    }
    report.max_bound = std::max(report.commit_bound, report.reveal_bound);
    report.pass = report.max_bound <= tolerance;
    return report;
}

// Honest compile without a custom behavior: first honest plaintext, no lies.
inline CompiledProtocol compile(const ClassicalHBProtocol& p) {
    if (p.honest_plaintexts.empty()) {
        throw std::invalid_argument("compile: no honest plaintext to run");
    }
    return compile(p, ProverBehavior{p.honest_plaintexts.front().second, {}});
}

}  // namespace qzk::compiler
