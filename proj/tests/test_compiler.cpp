#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qzk/compiler.hpp"
#include "qzk/threecol.hpp"

#include <cmath>

using namespace qzk;
using compiler::ClassicalHBProtocol;
using compiler::ClassicalSimulator;
using compiler::Graph;
using compiler::ProverBehavior;

namespace {

// Prover reveals his single hidden bit; verifier accepts iff it verifies.
ClassicalHBProtocol trivial_protocol(int k, int m = 1) {
    ClassicalHBProtocol p;
    p.m = m;
    p.k = k;
    p.coin_count = 0;
    p.honest_plaintexts = {{1, std::vector<int>(static_cast<std::size_t>(m), 0)}};
    p.honest_den = 1;
    p.challenge = [](const std::vector<int>&) { return 0; };
    p.reveal_set = [](int) { return std::vector<int>{0}; };
    p.accept = [](int, const std::vector<int>&) { return true; };
    return p;
}

ClassicalSimulator trivial_simulator() {
    ClassicalSimulator sim;
    sim.den = 1;
    sim.opened_plaintexts = [](int) {
        return std::vector<std::pair<long long, std::vector<int>>>{{1, {0}}};
    };
    return sim;
}

const Graph kTriangle{3, {{0, 1}, {1, 2}, {0, 2}}};
const Graph kK4{4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

}  // namespace

TEST_CASE("protocol validation") {
    auto p = trivial_protocol(1);
    p.reveal_set = [](int) { return std::vector<int>{7}; };
    CHECK_THROWS(compiler::check_protocol(p));
    auto q = trivial_protocol(1);
    q.honest_plaintexts = {{1, {0, 1}}};  // wrong length
    CHECK_THROWS(compiler::check_protocol(q));
    CHECK_THROWS(compiler::compile(trivial_protocol(1), ProverBehavior{{0, 0}, {}}));
}

TEST_CASE("statistical distance on exact rational distributions") {
    compiler::ClassicalDist a, b;
    a.den = 2;
    a.add("x", 1);
    a.add("y", 1);
    b.den = 4;
    b.add("x", 2);
    b.add("y", 1);
    b.add("z", 1);
    CHECK(compiler::statistical_distance(a, a) == 0.0);
    CHECK(compiler::statistical_distance(a, b) == 0.25);
}

TEST_CASE("trivial reveal protocol: honest acceptance 1, lying 2^-k") {
    for (int k : {1, 2, 3}) {
        const auto p = trivial_protocol(k);
        const auto honest = compiler::compile(p);
        CHECK(honest.coin_budget == 3 * k);
        CHECK(compiler::compiled_coin_control_ok(honest));
        const auto acc = engine::estimate_acceptance_exact(honest.steps, honest.layout);
        CHECK(acc.probability == doctest::Approx(1.0).epsilon(1e-12));

        const auto lying = compiler::compile(p, ProverBehavior{{0}, {0}});
        const auto acc2 = engine::estimate_acceptance_exact(lying.steps, lying.layout);
        const double expected = 1.0 / static_cast<double>(1 << k);
        CHECK(acc2.probability == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("compiled simulator: audit distance 0 on the trivial protocol") {
    for (int k : {1, 2}) {
        const auto p = trivial_protocol(k);
        const auto cp = compiler::compile(p);
        const auto hist = engine::run_branches(cp.steps, cp.layout);
        const auto sim = compiler::compile_simulator(trivial_simulator(), cp);
        const auto report = engine::zk_audit(hist, cp.audit_rounds, sim, 1e-9);
        CHECK(report.pass);
        CHECK(report.max_distance <= 1e-12);
    }
}

TEST_CASE("unrevealed hidden bits stay uniform in the audit") {
    // Two hidden bits, only bit 0 is ever revealed.
    const auto p = trivial_protocol(1, 2);
    const auto cp = compiler::compile(p);
    const auto hist = engine::run_branches(cp.steps, cp.layout);
    const auto sim = compiler::compile_simulator(trivial_simulator(), cp);
    const auto report = engine::zk_audit(hist, cp.audit_rounds, sim, 1e-9);
    CHECK(report.pass);
    CHECK(report.max_distance <= 1e-12);
}

TEST_CASE("compiled transcripts reproduce the classical challenge distribution") {
    // One coin, challenge = the coin, reveal nothing extra: check the public
    // challenge record is uniform.
    ClassicalHBProtocol p = trivial_protocol(1);
    p.coin_count = 1;
    p.challenge = [](const std::vector<int>& coins) { return coins[0]; };
    const auto cp = compiler::compile(p);
    const auto hist = engine::run_branches(cp.steps, cp.layout);
    double ch_one = 0.0;
    for (const auto& branch : hist.rounds.back()) {
        for (const auto& rec : branch.records) {
            if (rec.label == "ch_0" && rec.bits[0] == 1) ch_one += branch.weight;
        }
    }
    CHECK(ch_one == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("three-coloring protocol construction") {
    CHECK(find_three_coloring(kTriangle).has_value());
    CHECK_FALSE(find_three_coloring(kK4).has_value());
    CHECK_THROWS(compiler::validate_graph(Graph{7, {{0, 1}}}));
    CHECK_THROWS(compiler::validate_graph(Graph{3, {{0, 3}}}));

    const auto p = compiler::three_coloring_hb_protocol(kTriangle, 1);
    CHECK(p.m == 6);
    CHECK(p.honest_plaintexts.size() == 6);
    // Color 3 is auto-rejected; equal colors rejected.
    CHECK_FALSE(p.accept(0, {1, 1, 1, 1}));  // both color 3
    CHECK_FALSE(p.accept(0, {1, 0, 1, 0}));  // equal colors
    CHECK(p.accept(0, {1, 0, 0, 1}));        // colors 1 and 2
}

TEST_CASE("triangle demo: completeness 1, audit 0, coin control") {
    const auto p = compiler::three_coloring_hb_protocol(kTriangle, 1);
    CHECK(compiler::honest_acceptance_exact(p) == 1.0);
    const auto audit = compiler::factored_zk_audit(
        p, compiler::three_coloring_simulator(kTriangle), 1e-9);
    CHECK(audit.pass);
    CHECK(audit.commit_bound <= 1e-12);
    CHECK(audit.challenge_bound <= 1e-12);
    CHECK(audit.reveal_bound <= 1e-12);
    const auto cp = compiler::compile(p);
    CHECK(compiler::compiled_coin_control_ok(cp));
    CHECK(cp.coin_budget == 3 * 6 * 1 + p.coin_count);
}

TEST_CASE("triangle demo audit also holds at k=2") {
    const auto p = compiler::three_coloring_hb_protocol(kTriangle, 2);
    const auto audit = compiler::factored_zk_audit(
        p, compiler::three_coloring_simulator(kTriangle), 1e-9);
    CHECK(audit.pass);
}

TEST_CASE("K4 soundness case split, exact values") {
    // Challenge = coin value mod 6 over 8 coin strings: edges 0 and 1 have
    // weight 2/8, the rest 1/8. The best assignment is proper except on one
    // lightest edge, where the cheat needs a single lied bit.
    const auto r1 = compiler::soundness_case_report(kK4, 1);
    CHECK(r1.best_acceptance == 0.9375);  // 7/8 + (1/8)(1/2)
    CHECK(r1.honest_case_mass == 0.875);
    CHECK(r1.lying_case_mass == 0.0625);
    CHECK(r1.max_lying_mass <= 0.5);
    CHECK(r1.lying_within_bound);

    const auto r2 = compiler::soundness_case_report(kK4, 2);
    CHECK(r2.best_acceptance == 0.90625);  // 7/8 + (1/8)(1/4)
    CHECK(r2.max_lying_mass <= 0.25);
    CHECK(r2.lying_within_bound);

    const auto r3 = compiler::soundness_case_report(kK4, 3);
    CHECK(r3.best_acceptance == 0.890625);  // 7/8 + (1/8)(1/8)
    CHECK(r3.lying_within_bound);
}

TEST_CASE("all-lying strategy on the trivial protocol, k=2") {
    // Lying on every challenge passes with probability at most 2^-2.
    const auto p = trivial_protocol(2);
    const auto lying = compiler::compile(p, ProverBehavior{{0}, {0}});
    const auto acc = engine::estimate_acceptance_exact(lying.steps, lying.layout);
    CHECK(acc.probability <= 0.25 + 1e-12);
}
