// qzk: command-line front end for the hidden-bit / coin-model simulations.
//
// Subcommands:
//   hiddenbits   -- exhaustive hiding/binding audits of the share construction
//   compile-demo -- 3-coloring demo: completeness, soundness split, ZK audit
//   lcdm         -- LCDM protocol: acceptance, view-simulation distances
//   purify       -- Stinespring dilation of a Kraus channel, recovery check
//
// Reports go to stdout; --json writes a machine-readable report that is
// byte-identical across runs with the same seed and flags (wall time is
// printed only to stdout). Exit code 0 iff every check passes.

#include "qzk/io.hpp"
#include "qzk/lcdm.hpp"
#include "qzk/threecol.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using qzk::io::Check;
using qzk::io::RunReport;

constexpr int kUsageError = 2;

void emit(const RunReport& report, const std::string& json_path,
          double wall_ms) {
    for (const auto& c : report.checks) {
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": "
                  << c.value << (c.at_most ? " <= " : " >= ") << c.threshold
                  << "\n";
    }
    std::cout << (report.pass() ? "all checks passed" : "CHECKS FAILED")
              << "  (wall " << wall_ms << " ms)\n";
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) throw qzk::io::IoError("cannot write " + json_path);
        out << report.to_json().dump(2) << "\n";
    }
}

RunReport run_hiddenbits(int k) {
    RunReport report;
    report.command = "hiddenbits";

    const double binding = qzk::hiddenbit::binding_attack_value(k);
    const double expected = 1.0 / static_cast<double>(1 << k);
    report.checks.push_back(qzk::io::check_at_most(
        "hiding_audit(k=" + std::to_string(k) + ")",
        qzk::hiddenbit::hiding_audit(k), 0.0));
    report.checks.push_back(qzk::io::check_at_most(
        "binding_attack_value_error(k=" + std::to_string(k) + ")",
        std::abs(binding - expected), 0.0));
    for (int b = 0; b < 2; ++b) {
        const auto rho = qzk::hiddenbit::prover_conditional_state(b);
        const double dev =
            (rho.matrix() - qzk::qmath::Matrix::Identity(4, 4) / 4.0)
                .cwiseAbs()
                .maxCoeff();
        report.checks.push_back(qzk::io::check_at_most(
            "prover_state_b" + std::to_string(b) + "_vs_I4", dev, 1e-12));
    }
    return report;
}

RunReport run_compile_demo(const std::string& graph_path, int k,
                           std::uint64_t seed, const std::string& expect) {
    RunReport report;
    report.command = "compile-demo " + graph_path;
    report.seed = seed;

    const auto g = qzk::io::parse_graph(qzk::io::load_json_file(graph_path));
    const auto coloring = qzk::compiler::find_three_coloring(g);
    const auto p = qzk::compiler::three_coloring_hb_protocol(g, k);
    const double slack = 1.0 / static_cast<double>(1 << k);

    if (expect == "yes" && !coloring) {
        report.checks.push_back(
            qzk::io::check_at_most("expected_yes_but_not_3_colorable", 1.0, 0.0));
        return report;
    }

    if (coloring) {
        report.checks.push_back(qzk::io::check_at_least(
            "completeness", qzk::compiler::honest_acceptance_exact(p), 1.0));
        const auto audit = qzk::compiler::factored_zk_audit(
            p, qzk::compiler::three_coloring_simulator(g), 1e-9);
        report.checks.push_back(
            qzk::io::check_at_most("zk_audit_max_round_distance",
                                   std::max(audit.commit_bound, audit.reveal_bound),
                                   1e-9));
        const auto cp = qzk::compiler::compile(p);
        report.checks.push_back(qzk::io::check_at_least(
            "coin_control_check",
            qzk::compiler::compiled_coin_control_ok(cp) ? 1.0 : 0.0, 1.0));
    }

    const auto sound = qzk::compiler::soundness_case_report(g, k);
    report.checks.push_back(qzk::io::check_at_most(
        "lying_case_mass_max", sound.max_lying_mass, slack));
    if (!coloring) {
        // Best cheat loses at least the lightest edge, up to binding slack.
        long long min_count = 1LL << p.coin_count;
        for (const auto& [ch, count] :
             qzk::compiler::detail::challenge_counts(p)) {
            min_count = std::min(min_count, count);
        }
        const double min_edge = static_cast<double>(min_count) /
                                static_cast<double>(1LL << p.coin_count);
        report.checks.push_back(qzk::io::check_at_most(
            "best_cheat_acceptance", sound.best_acceptance,
            1.0 - min_edge * (1.0 - slack)));
    }
    return report;
}

RunReport run_lcdm(const std::string& inst_path, int K, int k_hb,
                   std::uint64_t seed, const std::string& mode,
                   std::uint64_t trials, const qzk::io::json& raw) {
    RunReport report;
    report.command = "lcdm " + inst_path;
    report.seed = seed;

    const auto inst = qzk::io::parse_instance(raw);
    const auto run_mode =
        mode == "exact" ? qzk::lcdm::Mode::exact : qzk::lcdm::Mode::mc;
    qzk::qmath::SeededRng rng(seed);

    std::optional<qzk::qmath::StateVector> witness;
    if (raw.contains("witness")) {
        const auto& wj = raw.at("witness");
        qzk::qmath::Vector v(static_cast<Eigen::Index>(wj.size()));
        for (std::size_t i = 0; i < wj.size(); ++i) {
            v(static_cast<Eigen::Index>(i)) = qzk::io::parse_complex(wj[i]);
        }
        witness.emplace(inst.n, std::move(v));
    }

    if (witness) {
        double max_pair = 0.0;
        for (const auto& [pr, d] : qzk::lcdm::check_instance(inst, *witness)) {
            max_pair = std::max(max_pair, d);
        }
        report.checks.push_back(
            qzk::io::check_at_most("witness_pair_distance_max", max_pair, 1e-9));

        const auto res = qzk::lcdm::run_lcdm(inst, *witness, {}, K, k_hb, rng,
                                             run_mode, trials);
        if (res.exact) {
            report.checks.push_back(
                qzk::io::check_at_least("honest_acceptance", res.acceptance, 1.0));
        } else {
            report.checks.push_back(qzk::io::check_at_least(
                "honest_acceptance_lower_bound", res.lower, 0.9));
        }

        const auto d = qzk::lcdm::view_distances(
            qzk::lcdm::real_views(inst, *witness), qzk::lcdm::simulate_views(inst));
        report.checks.push_back(
            qzk::io::check_at_most("view_distance_round1", d.first, 1e-12));
        report.checks.push_back(
            qzk::io::check_at_most("view_distance_round2", d.second, 1e-9));

        qzk::lcdm::ProverStrategy lie{qzk::lcdm::ProverKind::reveal_lying,
                                      std::nullopt, 1};
        const auto lied =
            qzk::lcdm::run_lcdm(inst, *witness, lie, 1, k_hb, rng,
                                qzk::lcdm::Mode::exact, trials);
        const double expected =
            1.0 - 1.0 / static_cast<double>(1 << k_hb);
        report.checks.push_back(qzk::io::check_at_most(
            "reveal_lying_rejection_error",
            std::abs(lied.per_repetition_rejection - expected), 0.0));
    } else {
        // No witness: treat as a no instance and bound fixed-state provers.
        double worst = 0.0;
        std::vector<qzk::qmath::StateVector> provers;
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << inst.n); ++b) {
            provers.push_back(qzk::qmath::StateVector::basis(inst.n, b));
        }
        for (int s = 0; s < 4; ++s) {
            qzk::qmath::Vector v(Eigen::Index{1} << inst.n);
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                v(i) = qzk::qmath::Complex(rng.real() - 0.5, rng.real() - 0.5);
            }
            v.normalize();
            provers.emplace_back(inst.n, std::move(v));
        }
        for (const auto& state : provers) {
            qzk::lcdm::ProverStrategy strat{qzk::lcdm::ProverKind::fixed_state,
                                            state, 1};
            const auto res = qzk::lcdm::run_lcdm(inst, state, strat, K, k_hb, rng,
                                                 run_mode, trials);
            worst = std::max(worst, res.acceptance);
        }
        report.checks.push_back(qzk::io::check_at_most(
            "fixed_state_acceptance_max", worst, 0.05));
    }
    return report;
}

RunReport run_purify(const std::string& channel_path) {
    RunReport report;
    report.command = "purify " + channel_path;

    const auto ch = qzk::io::parse_channel(qzk::io::load_json_file(channel_path));
    const auto dilation = qzk::engine::purify_channel(ch.kraus);
    qzk::qmath::SeededRng rng(0);
    report.checks.push_back(qzk::io::check_at_most(
        "max_recovery_distance",
        qzk::engine::check_purification(ch.kraus, dilation, 8, rng), 1e-9));
    return report;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hidden-bit / coin-model zero-knowledge simulations"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    int k = 1;
    int K = 8;
    std::string mode = "exact";
    std::uint64_t trials = 2000;
    std::string json_path;
    std::string file_arg;
    std::string expect;
    bool exhaustive = false;

    auto* hb = app.add_subcommand("hiddenbits", "hiding/binding audits");
    hb->add_option("--k", k, "security parameter (1..3)");
    hb->add_flag("--exhaustive", exhaustive, "exhaustive enumeration (always on)");
    hb->add_option("--seed", seed, "rng seed");
    hb->add_option("--json", json_path, "write JSON report");

    auto* cd = app.add_subcommand("compile-demo", "3-coloring compiler demo");
    cd->add_option("graph", file_arg, "graph JSON file")->required();
    cd->add_option("--k", k, "security parameter (1..3)");
    cd->add_option("--seed", seed, "rng seed");
    cd->add_option("--expect", expect, "yes|no instance expectation");
    cd->add_option("--json", json_path, "write JSON report");

    auto* lc = app.add_subcommand("lcdm", "LCDM protocol run and view audit");
    lc->add_option("instance", file_arg, "instance JSON file")->required();
    lc->add_option("--K", K, "parallel repetitions");
    lc->add_option("--k", k, "hidden-bit security parameter (1..3)");
    lc->add_option("--seed", seed, "rng seed");
    lc->add_option("--mode", mode, "exact|mc")
        ->check(CLI::IsMember({"exact", "mc"}));
    lc->add_option("--trials", trials, "mc trials");
    lc->add_option("--json", json_path, "write JSON report");

    auto* pu = app.add_subcommand("purify", "channel purification check");
    pu->add_option("channel", file_arg, "channel JSON file")->required();
    pu->add_option("--json", json_path, "write JSON report");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto start = std::chrono::steady_clock::now();
        RunReport report;
        if (hb->parsed()) {
            report = run_hiddenbits(k);
        } else if (cd->parsed()) {
            report = run_compile_demo(file_arg, k, seed, expect);
        } else if (lc->parsed()) {
            report = run_lcdm(file_arg, K, k, seed, mode, trials,
                              qzk::io::load_json_file(file_arg));
        } else {
            report = run_purify(file_arg);
        }
        report.seed = seed;
        const double wall_ms =
            std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - start)
                .count();
        emit(report, json_path, wall_ms);
        return report.pass() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    }
}
