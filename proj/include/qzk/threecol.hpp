// threecol.hpp
// Graph 3-coloring as a hidden-bit protocol: the prover commits to a random
// color permutation of a valid coloring (2 bits per vertex), the verifier
// challenges an edge from his coins, the prover opens the endpoint colors
// and the verifier accepts iff they are valid and distinct. Includes exact
// enumeration of the best cheating prover and the soundness case split.

#pragma once

#include "qzk/compiler.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qzk::compiler {

inline constexpr int kMaxDemoVertices = 6;

struct Graph {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges;  // 0-based endpoints
};

inline void validate_graph(const Graph& g) {
    if (g.vertices < 1 || g.vertices > kMaxDemoVertices) {
        throw std::invalid_argument("graph must have 1..6 vertices");
    }
    if (g.edges.empty()) throw std::invalid_argument("graph must have an edge");
    for (const auto& [u, v] : g.edges) {
        if (u < 0 || v < 0 || u >= g.vertices || v >= g.vertices || u == v) {
            throw std::invalid_argument("edge endpoints out of range");
        }
    }
}

// Lexicographically first proper 3-coloring, if one exists.
inline std::optional<std::vector<int>> find_three_coloring(const Graph& g) {
    validate_graph(g);
    std::vector<int> colors(static_cast<std::size_t>(g.vertices), 0);
    std::uint64_t total = 1;
    for (int v = 0; v < g.vertices; ++v) total *= 3;
    for (std::uint64_t a = 0; a < total; ++a) {
        std::uint64_t rest = a;
        for (int v = g.vertices - 1; v >= 0; --v) {
            colors[static_cast<std::size_t>(v)] = static_cast<int>(rest % 3);
            rest /= 3;
        }
        bool proper = true;
        for (const auto& [u, v] : g.edges) {
            if (colors[static_cast<std::size_t>(u)] ==
                colors[static_cast<std::size_t>(v)]) {
                proper = false;
                break;
            }
        }
        if (proper) return colors;
    }
    return std::nullopt;
}

namespace detail {

inline const std::array<std::array<int, 3>, 6>& color_permutations() {
    static const std::array<std::array<int, 3>, 6> perms = {{{0, 1, 2},
                                                             {0, 2, 1},
                                                             {1, 0, 2},
                                                             {1, 2, 0},
                                                             {2, 0, 1},
                                                             {2, 1, 0}}};
    return perms;
}

inline int ceil_log2(int x) {
    int bits = 0;
    while ((1 << bits) < x) ++bits;
    return std::max(bits, 1);
}

// Plaintext encoding: hidden bits 2v (low) and 2v+1 (high) hold vertex v's
// color; value 3 is forbidden and rejected.
inline std::vector<int> encode_colors(const std::vector<int>& colors) {
    std::vector<int> bits;
    for (int c : colors) {
        bits.push_back(c & 1);
        bits.push_back((c >> 1) & 1);
    }
    return bits;
}

}  // namespace detail

// One-round 3-coloring protocol over hidden-bit commitments. The challenge
// is the coin value reduced mod |E| (possibly non-uniform over edges); the
// honest plaintext distribution is the uniform color permutation of the
// lexicographically first proper coloring, when one exists.
inline ClassicalHBProtocol three_coloring_hb_protocol(const Graph& g, int k) {
    validate_graph(g);
    ClassicalHBProtocol p;
    p.m = 2 * g.vertices;
    p.k = k;
    p.coin_count = detail::ceil_log2(static_cast<int>(g.edges.size()));
    const int edge_count = static_cast<int>(g.edges.size());

    if (const auto coloring = find_three_coloring(g)) {
        for (const auto& perm : detail::color_permutations()) {
            std::vector<int> permuted;
            for (int c : *coloring) permuted.push_back(perm[static_cast<std::size_t>(c)]);
            p.honest_plaintexts.emplace_back(1, detail::encode_colors(permuted));
        }
        p.honest_den = 6;
    }

    p.challenge = [edge_count](const std::vector<int>& coins) {
        int value = 0;
        for (std::size_t i = 0; i < coins.size(); ++i) value |= coins[i] << i;
        return value % edge_count;
    };
    const auto edges = g.edges;
    p.reveal_set = [edges](int ch) {
        const auto [u, v] = edges[static_cast<std::size_t>(ch)];
        return std::vector<int>{2 * u, 2 * u + 1, 2 * v, 2 * v + 1};
    };
    p.accept = [](int, const std::vector<int>& opened) {
        const int cu = opened.at(0) | (opened.at(1) << 1);
        const int cv = opened.at(2) | (opened.at(3) << 1);
        return cu < 3 && cv < 3 && cu != cv;
    };
    return p;
}

// Classical simulator: given the challenged edge, the opened endpoint
// colors of a uniformly permuted proper coloring are a uniformly random
// ordered pair of distinct colors.
inline ClassicalSimulator three_coloring_simulator(const Graph& g) {
    validate_graph(g);
    ClassicalSimulator sim;
    sim.den = 6;
    sim.opened_plaintexts = [](int) {
        std::vector<std::pair<long long, std::vector<int>>> out;
        for (int cu = 0; cu < 3; ++cu) {
            for (int cv = 0; cv < 3; ++cv) {
                if (cu == cv) continue;
                out.emplace_back(1, std::vector<int>{cu & 1, (cu >> 1) & 1,
                                                     cv & 1, (cv >> 1) & 1});
            }
        }
        return out;
    };
    return sim;
}

// --- Soundness: exact best-cheat enumeration ---------------------------------

// Acceptance of the best cheating prover, split into the two proof cases:
// challenges answered with honest reveals (bounded by the classical
// soundness of the committed assignment) and challenges answered by lying
// about hidden bits (each lied bit passes with probability 2^{-k}).
// Everything is an exact dyadic rational; doubles are exact here.
struct SoundnessCaseReport {
    int k = 1;
    std::vector<int> best_assignment;    // committed color per vertex (0..3)
    double best_acceptance = 0.0;        // max over assignments and strategies
    double honest_case_mass = 0.0;       // case 1, for the maximizing assignment
    double lying_case_mass = 0.0;        // case 2, for the maximizing assignment
    double max_lying_mass = 0.0;         // case 2 maximized over all assignments
    double binding_slack = 0.0;          // 2^{-k}
    bool lying_within_bound = false;     // max_lying_mass <= 2^{-k}, exact
};

inline SoundnessCaseReport soundness_case_report(const Graph& g, int k) {
    validate_graph(g);
    hiddenbit::detail::check_exhaustive_k(k);
    const auto p = three_coloring_hb_protocol(g, k);
    const auto ch_counts = detail::challenge_counts(p);
    // Weights are integers over den = 2^{coin_count + 4k} (at most 4 lied
    // bits per challenge, each worth a factor 2^{-k}).
    const long long den = 1LL << (p.coin_count + 4 * k);
    const long long unit = 1LL << (4 * k);

    SoundnessCaseReport report;
    report.k = k;
    report.binding_slack = 1.0 / static_cast<double>(1LL << k);

    long long best_total = -1;
    long long max_lying = 0;
    std::uint64_t assignments = 1;
    for (int v = 0; v < g.vertices; ++v) assignments *= 4;

    for (std::uint64_t a = 0; a < assignments; ++a) {
        std::vector<int> colors;
        for (int v = 0; v < g.vertices; ++v) {
            colors.push_back(static_cast<int>((a >> (2 * v)) & 3u));
        }
        long long honest_num = 0;
        long long lying_num = 0;
        for (const auto& [ch, count] : ch_counts) {
            const auto [u, v] = g.edges[static_cast<std::size_t>(ch)];
            const int cu = colors[static_cast<std::size_t>(u)];
            const int cv = colors[static_cast<std::size_t>(v)];
            // Best target: valid distinct pair minimizing flipped bits.
            int min_flips = 5;
            for (int tu = 0; tu < 3; ++tu) {
                for (int tv = 0; tv < 3; ++tv) {
                    if (tu == tv) continue;
                    const int flips = __builtin_popcount(
                        static_cast<unsigned>(cu ^ tu)) +
                        __builtin_popcount(static_cast<unsigned>(cv ^ tv));
                    min_flips = std::min(min_flips, flips);
                }
            }
            // P(all lies pass) = 2^{-k * min_flips}.
            const long long pass_num = unit >> (k * min_flips);
            if (min_flips == 0) {
                honest_num += count * unit;
            } else {
                lying_num += count * pass_num;
            }
        }
        max_lying = std::max(max_lying, lying_num);
        if (honest_num + lying_num > best_total) {
            best_total = honest_num + lying_num;
            report.best_assignment = colors;
            report.honest_case_mass =
                static_cast<double>(honest_num) / static_cast<double>(den);
            report.lying_case_mass =
                static_cast<double>(lying_num) / static_cast<double>(den);
        }
    }
    report.best_acceptance = static_cast<double>(best_total) / static_cast<double>(den);
    report.max_lying_mass = static_cast<double>(max_lying) / static_cast<double>(den);
    // Exact dyadic comparison: max_lying / den <= 2^{-k}.
    report.lying_within_bound = max_lying * (1LL << k) <= den;
    return report;
}

}  // namespace qzk::compiler
