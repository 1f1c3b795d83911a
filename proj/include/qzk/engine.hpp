// engine.hpp
// Interactive-protocol execution over registers V (x) M (x) P ((x) W) with
// classical verifier coins, branch-exact execution, round-by-round view
// extraction, zero-knowledge audits against a simulator, acceptance
// estimation and Stinespring channel purification.
//
// Coins are modeled as classical per-branch data (a classical-quantum
// state, block-diagonal over coin values); the quantum registers are dense
// density matrices. Global slot indices are 1-based in the order
// [V workspace][V coins][M][P][W]; coin slots never enter the quantum state.

#pragma once

#include "qzk/qmath.hpp"

#include <boost/math/distributions/beta.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qzk::engine {

using qmath::DensityMatrix;
using qmath::Matrix;
using qmath::QubitSet;
using qmath::SeededRng;
using qmath::UnitaryMatrix;

enum class Actor { verifier, prover };

struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Register sizes; slots are assigned contiguously in declaration order.
struct RegisterLayout {
    int v_workspace = 0;
    int v_coins = 0;
    int m = 0;
    int p = 0;
    int w = 0;

    int total_slots() const { return v_workspace + v_coins + m + p + w; }
    int quantum_qubits() const { return total_slots() - v_coins; }

    int coin_first() const { return v_workspace + 1; }
    int coin_last() const { return v_workspace + v_coins; }
    int m_first() const { return v_workspace + v_coins + 1; }
    int m_last() const { return v_workspace + v_coins + m; }
    int p_first() const { return m_last() + 1; }
    int p_last() const { return m_last() + p; }
    int w_first() const { return p_last() + 1; }
    int w_last() const { return p_last() + w; }

    bool is_coin_slot(int g) const { return g >= coin_first() && g <= coin_last(); }

    // Quantum index (1-based, over the compacted non-coin slots).
    int quantum_index(int g) const {
        if (g < 1 || g > total_slots() || is_coin_slot(g)) {
            throw ProtocolError("slot " + std::to_string(g) +
                                " is not a quantum qubit");
        }
        return g <= v_workspace ? g : g - v_coins;
    }

    QubitSet quantum_targets(const QubitSet& global) const {
        std::vector<int> qs;
        for (int g : global.indices()) qs.push_back(quantum_index(g));
        return QubitSet(qs);
    }

    // Quantum indices of the verifier's view (workspace + M + W).
    QubitSet view_quantum_qubits() const {
        std::vector<int> qs;
        for (int g = 1; g <= v_workspace; ++g) qs.push_back(quantum_index(g));
        for (int g = m_first(); g <= m_last(); ++g) qs.push_back(quantum_index(g));
        for (int g = w_first(); g <= w_last(); ++g) qs.push_back(quantum_index(g));
        return QubitSet(qs);
    }

    bool verifier_may_touch(int g) const {
        return (g >= 1 && g <= v_workspace) || (g >= m_first() && g <= m_last()) ||
               (g >= w_first() && g <= w_last());
    }
    bool prover_may_touch(int g) const {
        return (g >= m_first() && g <= m_last()) || (g >= p_first() && g <= p_last());
    }
};

struct Record {
    std::string label;
    Actor owner = Actor::prover;
    bool is_public = false;
    std::vector<int> bits;
};

struct Branch {
    double weight = 1.0;
    std::vector<int> coins;  // one bit per coin slot
    std::vector<Record> records;
    DensityMatrix state;     // over the quantum qubits
};

// Read-only classical data visible to one actor inside a branch.
class ClassicalContext {
public:
    ClassicalContext(const Branch& branch, Actor actor)
        : branch_(branch), actor_(actor) {}

    // 1-based coin index within the coin register; verifier only.
    int coin(int index) const {
        if (actor_ != Actor::verifier) {
            throw ProtocolError("prover steps cannot read verifier coins");
        }
        return branch_.coins.at(static_cast<std::size_t>(index - 1));
    }

    const std::vector<int>& record(const std::string& label) const {
        for (const auto& rec : branch_.records) {
            if (rec.label != label) continue;
            if (!rec.is_public && rec.owner != actor_) {
                throw ProtocolError("record '" + label + "' is private to the other party");
            }
            return rec.bits;
        }
        throw ProtocolError("no record named '" + label + "'");
    }

    int record_bit(const std::string& label, int index) const {
        return record(label).at(static_cast<std::size_t>(index));
    }

private:
    const Branch& branch_;
    Actor actor_;
};

// A concrete gate application inside a branch (global slot indices).
struct GateOp {
    UnitaryMatrix u;
    QubitSet targets;
};

// Plain unitary on the actor's accessible quantum slots.
struct UnitaryStep {
    Actor actor;
    UnitaryMatrix u;
    QubitSet targets;  // global indices
};

// Classically controlled unitaries: the gate list is a function of coins
// (verifier only) and of records visible to the actor. The quantum targets
// produced by `gates` must stay within `declared_targets`.
struct ControlledStep {
    Actor actor;
    std::vector<int> coin_controls;           // 1-based coin indices
    std::vector<std::string> record_sources;  // labels read by `gates`
    QubitSet declared_targets;                // global indices
    std::function<std::vector<GateOp>(const ClassicalContext&)> gates;
};

// Computational-basis measurement with branch splitting; outcome bits are
// stored as a record and may drive follow-up gates.
struct MeasureStep {
    Actor actor;
    QubitSet targets;  // global indices
    std::string record_label;
    bool public_record = false;
    std::function<std::vector<GateOp>(const ClassicalContext&, std::uint64_t)> post;
};

using ProtocolStep = std::variant<UnitaryStep, ControlledStep, MeasureStep>;

// --- Structural validation ------------------------------------------------

// Pass iff the step never acts non-classically on the coin register:
// quantum targets avoid coin slots and coin usage is declared as controls.
inline bool coin_control_check(const ProtocolStep& step, const RegisterLayout& layout) {
    const auto targets_ok = [&](const QubitSet& targets) {
        for (int g : targets.indices()) {
            if (layout.is_coin_slot(g)) return false;
        }
        return true;
    };
    if (const auto* u = std::get_if<UnitaryStep>(&step)) {
        return targets_ok(u->targets);
    }
    if (const auto* c = std::get_if<ControlledStep>(&step)) {
        for (int idx : c->coin_controls) {
            if (idx < 1 || idx > layout.v_coins) return false;
        }
        return targets_ok(c->declared_targets);
    }
    const auto& m = std::get<MeasureStep>(step);
    return targets_ok(m.targets);
}

namespace detail {

inline void check_actor_targets(Actor actor, const QubitSet& targets,
                                const RegisterLayout& layout) {
    for (int g : targets.indices()) {
        if (layout.is_coin_slot(g)) {
            throw ProtocolError("step applies a quantum operation to a coin slot");
        }
        const bool ok = actor == Actor::verifier ? layout.verifier_may_touch(g)
                                                 : layout.prover_may_touch(g);
        if (!ok) {
            throw ProtocolError("step touches a register outside its actor's reach");
        }
    }
}

}  // namespace detail

// Reject structurally invalid protocols before any state evolution.
inline void validate_protocol(const std::vector<ProtocolStep>& steps,
                              const RegisterLayout& layout) {
    for (const auto& step : steps) {
        if (const auto* u = std::get_if<UnitaryStep>(&step)) {
            detail::check_actor_targets(u->actor, u->targets, layout);
        } else if (const auto* c = std::get_if<ControlledStep>(&step)) {
            detail::check_actor_targets(c->actor, c->declared_targets, layout);
            if (c->actor != Actor::verifier && !c->coin_controls.empty()) {
                throw ProtocolError("prover steps cannot be coin-controlled");
            }
            for (int idx : c->coin_controls) {
                if (idx < 1 || idx > layout.v_coins) {
                    throw ProtocolError("coin control index out of range");
                }
            }
        } else {
            const auto& m = std::get<MeasureStep>(step);
            detail::check_actor_targets(m.actor, m.targets, layout);
        }
    }
}

// --- Execution --------------------------------------------------------------

struct RunOptions {
    std::size_t branch_cap = std::size_t{1} << 16;
    double prune_below = 0.0;  // drop branches with weight below this
};

using BranchFamily = std::vector<Branch>;

// Branch families after every step; index 0 is the initial family.
struct RoundHistory {
    RegisterLayout layout;
    std::vector<BranchFamily> rounds;
};

namespace detail {

inline DensityMatrix apply_ops(const DensityMatrix& state,
                               const std::vector<GateOp>& ops,
                               const RegisterLayout& layout, Actor actor,
                               const QubitSet* declared) {
    DensityMatrix out = state;
    for (const auto& op : ops) {
        check_actor_targets(actor, op.targets, layout);
        if (declared != nullptr) {
            for (int g : op.targets.indices()) {
                if (!declared->contains(g)) {
                    throw ProtocolError("controlled step touched an undeclared target");
                }
            }
        }
        out = qmath::apply_unitary(out, op.u, layout.quantum_targets(op.targets));
    }
    return out;
}

inline DensityMatrix zero_state(int n) { return DensityMatrix::basis(n, 0); }

}  // namespace detail

// Exact branch-expanded execution. The quantum registers start in `initial`
// (defaults to |0...0>) and the coins in the uniform classical mixture.
inline RoundHistory run_branches(const std::vector<ProtocolStep>& steps,
                                 const RegisterLayout& layout,
                                 std::optional<DensityMatrix> initial = std::nullopt,
                                 const RunOptions& options = {}) {
    validate_protocol(steps, layout);
    const int nq = layout.quantum_qubits();
    DensityMatrix start = initial ? *initial : detail::zero_state(nq);
    if (start.qubits() != nq) {
        throw ProtocolError("initial state has wrong qubit count");
    }

    const std::uint64_t coin_values = std::uint64_t{1} << layout.v_coins;
    if (coin_values > options.branch_cap) {
        throw ProtocolError("coin expansion exceeds the branch cap");
    }

    BranchFamily branches;
    branches.reserve(coin_values);
    for (std::uint64_t v = 0; v < coin_values; ++v) {
        Branch b{1.0 / static_cast<double>(coin_values), {}, {}, start};
        for (int i = 0; i < layout.v_coins; ++i) {
            b.coins.push_back(static_cast<int>((v >> i) & 1u));
        }
        branches.push_back(std::move(b));
    }

    RoundHistory history{layout, {branches}};
    for (const auto& step : steps) {
        BranchFamily next;
        for (const auto& branch : branches) {
            if (const auto* u = std::get_if<UnitaryStep>(&step)) {
                Branch nb = branch;
                nb.state = qmath::apply_unitary(branch.state, u->u,
                                                layout.quantum_targets(u->targets));
                next.push_back(std::move(nb));
            } else if (const auto* c = std::get_if<ControlledStep>(&step)) {
                ClassicalContext ctx(branch, c->actor);
                Branch nb = branch;
                nb.state = detail::apply_ops(branch.state, c->gates(ctx), layout,
                                             c->actor, &c->declared_targets);
                next.push_back(std::move(nb));
            } else {
                const auto& ms = std::get<MeasureStep>(step);
                const auto qt = layout.quantum_targets(ms.targets);
                for (const auto& [bits, prob] :
                     qmath::measurement_distribution(branch.state, qt)) {
                    if (prob <= qmath::kTolerance) continue;
                    Branch nb = branch;
                    nb.weight = branch.weight * prob;
                    if (nb.weight < options.prune_below) continue;
                    nb.state = qmath::project_outcome(branch.state, qt, bits).post_state;
                    std::vector<int> outcome_bits;
                    for (int i = 0; i < ms.targets.size(); ++i) {
                        outcome_bits.push_back(static_cast<int>(
                            (bits >> (ms.targets.size() - 1 - i)) & 1u));
                    }
                    nb.records.push_back(
                        Record{ms.record_label, ms.actor, ms.public_record,
                               std::move(outcome_bits)});
                    if (ms.post) {
                        ClassicalContext ctx(nb, ms.actor);
                        nb.state = detail::apply_ops(nb.state, ms.post(ctx, bits),
                                                     layout, ms.actor, nullptr);
                    }
                    next.push_back(std::move(nb));
                }
            }
            if (next.size() > options.branch_cap) {
                throw ProtocolError("branch count exceeds the branch cap");
            }
        }
        branches = std::move(next);
        history.rounds.push_back(branches);
    }
    return history;
}

// Single sampled trajectory: coins drawn uniformly, measurements sampled
// from the Born rule. Global states are recorded after every step.
struct ProtocolRun {
    RegisterLayout layout;
    std::vector<DensityMatrix> states;  // beta_0 ... beta_end, quantum part
    std::vector<int> coins;
    std::vector<Record> records;
    bool accept = false;
};

inline ProtocolRun run_protocol(const std::vector<ProtocolStep>& steps,
                                const RegisterLayout& layout,
                                std::optional<DensityMatrix> initial,
                                SeededRng& rng) {
    validate_protocol(steps, layout);
    const int nq = layout.quantum_qubits();
    Branch branch{1.0, {}, {}, initial ? *initial : detail::zero_state(nq)};
    for (int i = 0; i < layout.v_coins; ++i) branch.coins.push_back(rng.bit());

    ProtocolRun run{layout, {branch.state}, branch.coins, {}, false};
    for (const auto& step : steps) {
        if (const auto* u = std::get_if<UnitaryStep>(&step)) {
            branch.state = qmath::apply_unitary(branch.state, u->u,
                                                layout.quantum_targets(u->targets));
        } else if (const auto* c = std::get_if<ControlledStep>(&step)) {
            ClassicalContext ctx(branch, c->actor);
            branch.state = detail::apply_ops(branch.state, c->gates(ctx), layout,
                                             c->actor, &c->declared_targets);
        } else {
            const auto& ms = std::get<MeasureStep>(step);
            const auto qt = layout.quantum_targets(ms.targets);
            const auto result = qmath::measure_computational(branch.state, qt, rng);
            branch.state = result.post_state;
            std::vector<int> outcome_bits;
            for (int i = 0; i < ms.targets.size(); ++i) {
                outcome_bits.push_back(static_cast<int>(
                    (result.bits >> (ms.targets.size() - 1 - i)) & 1u));
            }
            branch.records.push_back(Record{ms.record_label, ms.actor,
                                            ms.public_record, outcome_bits});
            if (ms.post) {
                ClassicalContext ctx(branch, ms.actor);
                branch.state = detail::apply_ops(branch.state,
                                                 ms.post(ctx, result.bits), layout,
                                                 ms.actor, nullptr);
            }
        }
        run.states.push_back(branch.state);
    }
    run.records = branch.records;

    // Acceptance convention: the first verifier workspace qubit at the end.
    if (layout.v_workspace > 0 && !steps.empty()) {
        const auto qt = QubitSet{layout.quantum_index(1)};
        const double p1 = qmath::measurement_distribution(branch.state, qt)[1].second;
        run.accept = rng.real() < p1;
    }
    return run;
}

// Verifier view of a single trajectory: trace out P, keep workspace + M + W.
inline DensityMatrix verifier_view(const ProtocolRun& run, std::size_t round) {
    return qmath::partial_trace(run.states.at(round),
                                run.layout.view_quantum_qubits());
}

// --- Classical-quantum states and view families ----------------------------

// Subnormalized quantum blocks keyed by a classical string; total weight 1.
class CqState {
public:
    void add(const std::string& key, double weight, const Matrix& density) {
        auto [it, inserted] = blocks_.try_emplace(key, weight * density);
        if (!inserted) it->second += weight * density;
    }

    const std::map<std::string, Matrix>& blocks() const { return blocks_; }

    double total_weight() const {
        double w = 0.0;
        for (const auto& [key, m] : blocks_) w += m.trace().real();
        return w;
    }

private:
    std::map<std::string, Matrix> blocks_;
};

// Trace distance between block-diagonal cq states:
// (1/2) sum_key || A_key - B_key ||_1.
inline double cq_trace_distance(const CqState& a, const CqState& b) {
    double total = 0.0;
    auto accumulate = [&total](const Matrix& diff) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(diff, Eigen::EigenvaluesOnly);
        total += 0.5 * solver.eigenvalues().cwiseAbs().sum();
    };
    for (const auto& [key, ma] : a.blocks()) {
        auto it = b.blocks().find(key);
        if (it == b.blocks().end()) {
            accumulate(ma);
        } else {
            accumulate(ma - it->second);
        }
    }
    for (const auto& [key, mb] : b.blocks()) {
        if (!a.blocks().count(key)) accumulate(mb);
    }
    return total;
}

namespace detail {

inline std::string classical_view_key(const Branch& branch) {
    std::ostringstream os;
    os << "c:";
    for (int bit : branch.coins) os << bit;
    for (const auto& rec : branch.records) {
        if (rec.owner != Actor::verifier && !rec.is_public) continue;
        os << '|' << rec.label << ':';
        for (int bit : rec.bits) os << bit;
    }
    return os.str();
}

}  // namespace detail

// Verifier view of a branch family as a cq state over (coins, visible
// records) with the P register traced out.
inline CqState verifier_view_cq(const BranchFamily& branches,
                                const RegisterLayout& layout) {
    CqState view;
    const auto keep = layout.view_quantum_qubits();
    for (const auto& branch : branches) {
        view.add(detail::classical_view_key(branch), branch.weight,
                 qmath::partial_trace(branch.state, keep).matrix());
    }
    return view;
}

// Round-indexed simulator output.
using Simulator = std::function<CqState(std::size_t round)>;

struct ZkAuditReport {
    std::vector<double> distances;  // one per audited round
    double max_distance = 0.0;
    bool pass = false;
};

// Compare the real verifier views against the simulator round by round.
// `rounds` selects which history entries are audited (typically the views
// after prover actions).
inline ZkAuditReport zk_audit(const RoundHistory& history,
                              const std::vector<std::size_t>& rounds,
                              const Simulator& simulator, double tolerance) {
    ZkAuditReport report;
    for (std::size_t j : rounds) {
        const CqState real = verifier_view_cq(history.rounds.at(j), history.layout);
        report.distances.push_back(cq_trace_distance(real, simulator(j)));
    }
    for (double d : report.distances) report.max_distance = std::max(report.max_distance, d);
    report.pass = report.max_distance <= tolerance;
    return report;
}

// --- Acceptance --------------------------------------------------------------

struct AcceptanceEstimate {
    double probability = 0.0;
    double lower = 0.0;   // 95% Clopper-Pearson bounds in Monte Carlo mode
    double upper = 1.0;
    bool exact = false;
};

inline double accept_probability(const Branch& branch, const RegisterLayout& layout) {
    const auto qt = QubitSet{layout.quantum_index(1)};
    return qmath::measurement_distribution(branch.state, qt)[1].second;
}

inline AcceptanceEstimate estimate_acceptance_exact(
    const std::vector<ProtocolStep>& steps, const RegisterLayout& layout,
    std::optional<DensityMatrix> initial = std::nullopt,
    const RunOptions& options = {}) {
    const RoundHistory history = run_branches(steps, layout, std::move(initial), options);
    double p = 0.0;
    for (const auto& branch : history.rounds.back()) {
        p += branch.weight * accept_probability(branch, layout);
    }
    return {p, p, p, true};
}

inline std::pair<double, double> clopper_pearson(std::uint64_t successes,
                                                 std::uint64_t trials,
                                                 double alpha = 0.05) {
    double lower = 0.0;
    double upper = 1.0;
    if (successes > 0) {
        boost::math::beta_distribution<double> lo(
            static_cast<double>(successes),
            static_cast<double>(trials - successes + 1));
        lower = boost::math::quantile(lo, alpha / 2.0);
    }
    if (successes < trials) {
        boost::math::beta_distribution<double> hi(
            static_cast<double>(successes + 1),
            static_cast<double>(trials - successes));
        upper = boost::math::quantile(hi, 1.0 - alpha / 2.0);
    }
    return {lower, upper};
}

inline AcceptanceEstimate estimate_acceptance_monte_carlo(
    const std::vector<ProtocolStep>& steps, const RegisterLayout& layout,
    std::optional<DensityMatrix> initial, std::uint64_t trials, SeededRng& rng) {
    std::uint64_t successes = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        SeededRng trial_rng = rng.fork();
        if (run_protocol(steps, layout, initial, trial_rng).accept) ++successes;
    }
    const auto [lower, upper] = clopper_pearson(successes, trials);
    return {static_cast<double>(successes) / static_cast<double>(trials),
            lower, upper, false};
}

// --- Channel purification (Stinespring dilation) ----------------------------

struct Dilation {
    UnitaryMatrix unitary;  // on system (x) environment, system first
    int system_qubits = 0;
    int env_qubits = 0;
};

inline Matrix apply_kraus_channel(const std::vector<Matrix>& kraus, const Matrix& rho) {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& k : kraus) out += k * rho * k.adjoint();
    return out;
}

// Dilate a Kraus channel to a unitary on system (x) environment with the
// environment initialized to |0>. The columns for environment input |0>
// stack the Kraus operators; the rest is completed by Gram-Schmidt.
inline Dilation purify_channel(const std::vector<Matrix>& kraus) {
    if (kraus.empty()) throw std::invalid_argument("purify_channel: empty Kraus list");
    const Eigen::Index d = kraus.front().rows();
    int system_qubits = 0;
    while ((Eigen::Index{1} << system_qubits) < d) ++system_qubits;
    if ((Eigen::Index{1} << system_qubits) != d || system_qubits > 2) {
        throw std::invalid_argument("purify_channel: system must be 1 or 2 qubits");
    }
    Matrix completeness = Matrix::Zero(d, d);
    for (const auto& k : kraus) {
        if (k.rows() != d || k.cols() != d) {
            throw std::invalid_argument("purify_channel: inconsistent Kraus dimensions");
        }
        completeness += k.adjoint() * k;
    }
    if ((completeness - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() >
        qmath::kTolerance) {
        throw std::invalid_argument("purify_channel: channel is not trace preserving");
    }

    int env_qubits = 0;
    while ((std::size_t{1} << env_qubits) < kraus.size()) ++env_qubits;
    const Eigen::Index env_dim = Eigen::Index{1} << env_qubits;
    const Eigen::Index full = d * env_dim;

    // Basis index ordering: system first, i.e. (j, e) -> j * env_dim + e.
    Matrix u = Matrix::Zero(full, full);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < kraus.size(); ++i) {
            for (Eigen::Index jp = 0; jp < d; ++jp) {
                u(jp * env_dim + static_cast<Eigen::Index>(i), j * env_dim) =
                    kraus[i](jp, j);
            }
        }
    }

    // Complete the remaining columns to an orthonormal basis.
    std::vector<Eigen::Index> fixed_cols;
    for (Eigen::Index j = 0; j < d; ++j) fixed_cols.push_back(j * env_dim);
    std::vector<Eigen::Index> free_cols;
    for (Eigen::Index c = 0; c < full; ++c) {
        if ((c % env_dim) != 0) free_cols.push_back(c);
    }
    std::vector<Eigen::VectorXcd> basis;
    for (Eigen::Index c : fixed_cols) basis.push_back(u.col(c));
    std::size_t next_free = 0;
    for (Eigen::Index cand = 0; cand < full && next_free < free_cols.size(); ++cand) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(full);
        v(cand) = 1.0;
        for (const auto& b : basis) v -= b.dot(v) * b;
        const double norm = v.norm();
        if (norm < 0.5) continue;
        v /= norm;
        u.col(free_cols[next_free++]) = v;
        basis.push_back(std::move(v));
    }
    if (next_free != free_cols.size()) {
        throw std::runtime_error("purify_channel: basis completion failed");
    }
    return {UnitaryMatrix(system_qubits + env_qubits, std::move(u)),
            system_qubits, env_qubits};
}

// Apply the dilation to rho (x) |0><0|_env and trace out the environment.
inline Matrix apply_dilation(const Dilation& dilation, const Matrix& rho) {
    const Eigen::Index d = rho.rows();
    const Eigen::Index env_dim = Eigen::Index{1} << dilation.env_qubits;
    Matrix big = Matrix::Zero(d * env_dim, d * env_dim);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            big(r * env_dim, c * env_dim) = rho(r, c);
        }
    }
    big = dilation.unitary.matrix() * big * dilation.unitary.matrix().adjoint();
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            for (Eigen::Index e = 0; e < env_dim; ++e) {
                out(r, c) += big(r * env_dim + e, c * env_dim + e);
            }
        }
    }
    return out;
}

// Max trace distance between the Kraus channel and the traced dilation over
// all basis states plus `samples` random pure states.
inline double check_purification(const std::vector<Matrix>& kraus,
                                 const Dilation& dilation, int samples,
                                 SeededRng& rng) {
    const Eigen::Index d = kraus.front().rows();
    const int n = dilation.system_qubits;
    std::vector<Matrix> inputs;
    for (Eigen::Index j = 0; j < d; ++j) {
        Matrix rho = Matrix::Zero(d, d);
        rho(j, j) = 1.0;
        inputs.push_back(std::move(rho));
    }
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXcd v(d);
        for (Eigen::Index i = 0; i < d; ++i) {
            v(i) = qmath::Complex(rng.real() * 2.0 - 1.0, rng.real() * 2.0 - 1.0);
        }
        v.normalize();
        inputs.push_back(v * v.adjoint());
    }
    double max_distance = 0.0;
    for (const auto& rho : inputs) {
        const DensityMatrix direct(n, apply_kraus_channel(kraus, rho));
        const DensityMatrix recovered(n, apply_dilation(dilation, rho));
        max_distance = std::max(max_distance, qmath::trace_distance(direct, recovered));
    }
    return max_distance;
}

// Verifier's initial state in the coin model, as a dense matrix:
// |0><0|^{(x) workspace} (x) I / 2^{coins}, workspace first.
inline DensityMatrix coin_model_initial_state(int workspace_qubits, int coin_qubits) {
    if (workspace_qubits == 0) return DensityMatrix::maximally_mixed(coin_qubits);
    if (coin_qubits == 0) return DensityMatrix::basis(workspace_qubits, 0);
    return qmath::tensor(DensityMatrix::basis(workspace_qubits, 0),
                         DensityMatrix::maximally_mixed(coin_qubits));
}

}  // namespace qzk::engine
