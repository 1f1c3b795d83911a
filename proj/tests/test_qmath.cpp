#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qzk/qmath.hpp"

#include <cmath>

using namespace qzk::qmath;

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

TEST_CASE("QubitSet rejects duplicates and zero indices") {
    CHECK_THROWS(QubitSet{1, 1});
    CHECK_THROWS(QubitSet{0});
    const QubitSet qs{3, 1};
    CHECK(qs.contains(1));
    CHECK_FALSE(qs.contains(2));
    CHECK_THROWS(qs.check_in_range(2));
}

TEST_CASE("state and density validation") {
    Vector bad(2);
    bad << 1.0, 1.0;  // unnormalized
    CHECK_THROWS(StateVector(1, bad));
    CHECK_THROWS(DensityMatrix(1, Matrix::Identity(2, 2)));  // trace 2
    Matrix neg(2, 2);
    neg << 1.5, 0, 0, -0.5;  // not PSD
    CHECK_THROWS(DensityMatrix(1, neg));
    Matrix nonherm(2, 2);
    nonherm << 0.5, 0.5, 0.0, 0.5;
    CHECK_THROWS(DensityMatrix(1, nonherm));
}

TEST_CASE("qubit 1 is the most significant bit") {
    // |10> = basis index 2: qubit 1 is |1>, qubit 2 is |0>.
    const auto psi = StateVector::basis(2, 2);
    const auto rho = DensityMatrix::pure(psi);
    const auto q1 = partial_trace(rho, QubitSet{1});
    const auto q2 = partial_trace(rho, QubitSet{2});
    CHECK(std::abs(q1(1, 1) - Complex(1.0)) < 1e-12);
    CHECK(std::abs(q2(0, 0) - Complex(1.0)) < 1e-12);
}

TEST_CASE("tensor products agree with the loop oracle") {
    SeededRng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = DensityMatrix::pure(random_state(1, rng));
        const auto b = DensityMatrix::pure(random_state(2, rng));
        const auto lib = tensor(a, b);
        const auto ref = oracles::tensor(a.matrix(), b.matrix());
        CHECK((lib.matrix() - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("partial trace agrees with the oracle and keeps order") {
    SeededRng rng(12);
    for (int trial = 0; trial < 5; ++trial) {
        const auto rho = DensityMatrix::pure(random_state(3, rng));
        for (const auto& keep : {std::vector<int>{1}, {2}, {3}, {1, 3}, {2, 3}}) {
            const auto lib = partial_trace(rho, QubitSet(keep));
            const auto ref = oracles::partial_trace(rho.matrix(), 3, keep);
            CHECK((lib.matrix() - ref).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    // Tracing a product state recovers the factor.
    const auto a = DensityMatrix::pure(random_state(1, rng));
    const auto b = DensityMatrix::pure(random_state(1, rng));
    const auto ab = tensor(a, b);
    CHECK(trace_distance(partial_trace(ab, QubitSet{1}), a) < 1e-12);
    CHECK(trace_distance(partial_trace(ab, QubitSet{2}), b) < 1e-12);
}

TEST_CASE("trace distance: known values and metric properties") {
    const auto zero = DensityMatrix::basis(1, 0);
    const auto one = DensityMatrix::basis(1, 1);
    CHECK(trace_distance(zero, one) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(trace_distance(zero, zero) == doctest::Approx(0.0));

    // |0> vs |+>: distance 1/sqrt(2).
    Vector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const auto plus_dm = DensityMatrix::pure(StateVector(1, plus));
    CHECK(trace_distance(zero, plus_dm) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));

    SeededRng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = DensityMatrix::pure(random_state(2, rng));
        const auto b = DensityMatrix::pure(random_state(2, rng));
        const auto c = DensityMatrix::pure(random_state(2, rng));
        const double ab = trace_distance(a, b);
        CHECK(ab == doctest::Approx(trace_distance(b, a)).epsilon(1e-12));
        CHECK(ab == doctest::Approx(oracles::trace_distance(a.matrix(), b.matrix()))
                        .epsilon(1e-9));
        CHECK(ab <= trace_distance(a, c) + trace_distance(c, b) + 1e-9);
    }
}

TEST_CASE("embed_unitary places gates on the right qubits") {
    // X on qubit 2 of 2: |00> -> |01>.
    const auto psi = apply_unitary(StateVector::basis(2, 0), pauli_x(), QubitSet{2});
    CHECK(std::abs(psi(1) - Complex(1.0)) < 1e-12);
    // X on qubit 1 of 2: |00> -> |10>.
    const auto psi2 = apply_unitary(StateVector::basis(2, 0), pauli_x(), QubitSet{1});
    CHECK(std::abs(psi2(2) - Complex(1.0)) < 1e-12);
    // Two-qubit gate on reversed targets swaps its argument order.
    SeededRng rng(14);
    const auto state = random_state(2, rng);
    const auto h_then = apply_unitary(state, hadamard(), QubitSet{1});
    const auto embedded =
        apply_unitary(state, tensor(hadamard(), UnitaryMatrix::identity(1)),
                      QubitSet{1, 2});
    CHECK((h_then.amplitudes() - embedded.amplitudes()).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("measurement distribution and projection") {
    // (|00> + |11>)/sqrt(2): both qubits perfectly correlated.
    Vector bell(4);
    bell << 1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0);
    const auto rho = DensityMatrix::pure(StateVector(2, bell));
    const auto dist = measurement_distribution(rho, QubitSet{1});
    CHECK(dist[0].second == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dist[1].second == doctest::Approx(0.5).epsilon(1e-12));

    const auto post = project_outcome(rho, QubitSet{1}, 1);
    CHECK(post.probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(post.post_state(3, 3) - Complex(1.0)) < 1e-12);
    CHECK_THROWS(project_outcome(DensityMatrix::basis(2, 0), QubitSet{1}, 1));

    SeededRng rng(15);
    const auto sampled = measure_computational(rho, QubitSet{1, 2}, rng);
    CHECK((sampled.bits == 0 || sampled.bits == 3));
}

TEST_CASE("mixture validates weights and averages") {
    const auto zero = DensityMatrix::basis(1, 0);
    const auto one = DensityMatrix::basis(1, 1);
    const auto mix = mixture({{0.5, zero}, {0.5, one}});
    CHECK(trace_distance(mix, DensityMatrix::maximally_mixed(1)) < 1e-12);
    CHECK_THROWS(mixture({{0.7, zero}, {0.7, one}}));
}

TEST_CASE("rng reproducibility and fork independence") {
    SeededRng a(42);
    SeededRng b(42);
    for (int i = 0; i < 16; ++i) CHECK(a.bit() == b.bit());
    SeededRng c(42);
    auto child = c.fork();
    CHECK(child.below(1000) < 1000);
}
