// qmath.hpp
// Dense complex linear algebra for small multi-qubit states: tensor
// products, partial trace, trace distance, unitary embedding and
// computational-basis measurement.
//
// Conventions used throughout the library:
//   - qubits are 1-based; qubit 1 is the MOST significant bit of the
//     computational-basis index,
//   - all validity checks use kTolerance = 1e-9,
//   - randomness always flows through an explicitly seeded rng.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qzk::qmath {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kTolerance = 1e-9;
inline constexpr int kMaxQubits = 10;  // dense 2^n x 2^n storage cap

// Explicitly seeded RNG; the only source of randomness in the library.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    // Uniform bit.
    int bit() { return static_cast<int>(engine_() & 1u); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
        return d(engine_);
    }

    // Uniform real in [0, 1).
    double real() {
        std::uniform_real_distribution<double> d(0.0, 1.0);
        return d(engine_);
    }

    // Independent child stream, for per-trial / per-branch seeding.
    SeededRng fork() { return SeededRng(engine_()); }

private:
    std::mt19937_64 engine_;
};

namespace detail {

inline std::size_t dim_for(int n) { return std::size_t{1} << n; }

inline void check_qubit_count(int n) {
    if (n < 0 || n > kMaxQubits) {
        throw std::invalid_argument("qubit count out of supported range: " +
                                    std::to_string(n));
    }
}

}  // namespace detail

// Ordered list of distinct 1-based qubit indices.
class QubitSet {
public:
    QubitSet() = default;
    QubitSet(std::initializer_list<int> qs) : qubits_(qs) { validate(); }
    explicit QubitSet(std::vector<int> qs) : qubits_(std::move(qs)) { validate(); }

    static QubitSet range(int first, int last) {
        std::vector<int> qs;
        for (int q = first; q <= last; ++q) qs.push_back(q);
        return QubitSet(std::move(qs));
    }

    int size() const { return static_cast<int>(qubits_.size()); }
    bool empty() const { return qubits_.empty(); }
    int operator[](int i) const { return qubits_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& indices() const { return qubits_; }

    bool contains(int q) const {
        return std::find(qubits_.begin(), qubits_.end(), q) != qubits_.end();
    }

    void check_in_range(int n) const {
        for (int q : qubits_) {
            if (q < 1 || q > n) {
                throw std::out_of_range("qubit index " + std::to_string(q) +
                                        " out of range for n=" + std::to_string(n));
            }
        }
    }

private:
    void validate() const {
        auto sorted = qubits_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("duplicate qubit index in QubitSet");
        }
        for (int q : qubits_) {
            if (q < 1) throw std::out_of_range("qubit indices are 1-based");
        }
    }

    std::vector<int> qubits_;
};

// Normalized pure state on n qubits.
class StateVector {
public:
    StateVector(int n, Vector amplitudes) : n_(n), amps_(std::move(amplitudes)) {
        detail::check_qubit_count(n_);
        if (static_cast<std::size_t>(amps_.size()) != detail::dim_for(n_)) {
            throw std::invalid_argument("amplitude vector has wrong dimension");
        }
        if (std::abs(amps_.squaredNorm() - 1.0) > kTolerance) {
            throw std::invalid_argument("state vector is not normalized");
        }
    }

    static StateVector basis(int n, std::uint64_t index) {
        Vector v = Vector::Zero(static_cast<Eigen::Index>(detail::dim_for(n)));
        v(static_cast<Eigen::Index>(index)) = 1.0;
        return StateVector(n, std::move(v));
    }

    int qubits() const { return n_; }
    Eigen::Index dim() const { return amps_.size(); }
    const Vector& amplitudes() const { return amps_; }
    Complex operator()(Eigen::Index i) const { return amps_(i); }

private:
    int n_;
    Vector amps_;
};

// Unitary on n qubits; unitarity checked at construction.
class UnitaryMatrix {
public:
    UnitaryMatrix(int n, Matrix data) : n_(n), data_(std::move(data)) {
        detail::check_qubit_count(n_);
        const auto d = static_cast<Eigen::Index>(detail::dim_for(n_));
        if (data_.rows() != d || data_.cols() != d) {
            throw std::invalid_argument("unitary has wrong dimension");
        }
        Matrix gram = data_.adjoint() * data_;
        if ((gram - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kTolerance) {
            throw std::invalid_argument("matrix is not unitary");
        }
    }

    static UnitaryMatrix identity(int n) {
        const auto d = static_cast<Eigen::Index>(detail::dim_for(n));
        return UnitaryMatrix(n, Matrix::Identity(d, d));
    }

    int qubits() const { return n_; }
    Eigen::Index dim() const { return data_.rows(); }
    const Matrix& matrix() const { return data_; }

    UnitaryMatrix adjoint() const { return UnitaryMatrix(n_, data_.adjoint()); }

    // Composition (this after other).
    UnitaryMatrix operator*(const UnitaryMatrix& other) const {
        if (n_ != other.n_) throw std::invalid_argument("unitary dimension mismatch");
        return UnitaryMatrix(n_, data_ * other.data_);
    }

private:
    int n_;
    Matrix data_;
};

// Hermitian, trace-1, PSD matrix on n qubits.
class DensityMatrix {
public:
    DensityMatrix(int n, Matrix data) : n_(n), data_(std::move(data)) {
        detail::check_qubit_count(n_);
        const auto d = static_cast<Eigen::Index>(detail::dim_for(n_));
        if (data_.rows() != d || data_.cols() != d) {
            throw std::invalid_argument("density matrix has wrong dimension");
        }
        if ((data_ - data_.adjoint()).cwiseAbs().maxCoeff() > kTolerance) {
            throw std::invalid_argument("density matrix is not Hermitian");
        }
        if (std::abs(data_.trace().real() - 1.0) > kTolerance ||
            std::abs(data_.trace().imag()) > kTolerance) {
            throw std::invalid_argument("density matrix trace is not 1");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(data_, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -kTolerance) {
            throw std::invalid_argument("density matrix is not PSD");
        }
    }

    static DensityMatrix pure(const StateVector& psi) {
        return DensityMatrix(psi.qubits(),
                             psi.amplitudes() * psi.amplitudes().adjoint());
    }

    static DensityMatrix basis(int n, std::uint64_t index) {
        return pure(StateVector::basis(n, index));
    }

    // Totally mixed state I / 2^n.
    static DensityMatrix maximally_mixed(int n) {
        const auto d = static_cast<Eigen::Index>(detail::dim_for(n));
        return DensityMatrix(n, Matrix::Identity(d, d) / static_cast<double>(d));
    }

    int qubits() const { return n_; }
    Eigen::Index dim() const { return data_.rows(); }
    const Matrix& matrix() const { return data_; }
    Complex operator()(Eigen::Index r, Eigen::Index c) const { return data_(r, c); }

private:
    int n_;
    Matrix data_;
};

namespace detail {

// Bit of `index` addressed by 1-based qubit q under the MSB-first convention.
inline int qubit_bit(std::uint64_t index, int q, int n) {
    return static_cast<int>((index >> (n - q)) & 1u);
}

// Basis index over |keep| qubits read off `index` in keep-order.
inline std::uint64_t extract_bits(std::uint64_t index, const QubitSet& keep, int n) {
    std::uint64_t out = 0;
    for (int i = 0; i < keep.size(); ++i) {
        out = (out << 1) | static_cast<std::uint64_t>(qubit_bit(index, keep[i], n));
    }
    return out;
}

// Write bits (MSB-first over `targets`) into `index`.
inline std::uint64_t deposit_bits(std::uint64_t index, std::uint64_t bits,
                                  const QubitSet& targets, int n) {
    for (int i = 0; i < targets.size(); ++i) {
        const int q = targets[i];
        const std::uint64_t mask = std::uint64_t{1} << (n - q);
        const std::uint64_t bit = (bits >> (targets.size() - 1 - i)) & 1u;
        index = (index & ~mask) | (bit << (n - q));
    }
    return index;
}

}  // namespace detail

// --- Operations ---------------------------------------------------------

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    const int n = a.qubits() + b.qubits();
    detail::check_qubit_count(n);
    Matrix out(a.dim() * b.dim(), a.dim() * b.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i) {
        for (Eigen::Index j = 0; j < a.dim(); ++j) {
            out.block(i * b.dim(), j * b.dim(), b.dim(), b.dim()) =
                a(i, j) * b.matrix();
        }
    }
    return DensityMatrix(n, std::move(out));
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
    const int n = a.qubits() + b.qubits();
    detail::check_qubit_count(n);
    Vector out(a.dim() * b.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i) {
        out.segment(i * b.dim(), b.dim()) = a(i) * b.amplitudes();
    }
    return StateVector(n, std::move(out));
}

inline UnitaryMatrix tensor(const UnitaryMatrix& a, const UnitaryMatrix& b) {
    const int n = a.qubits() + b.qubits();
    detail::check_qubit_count(n);
    Matrix out(a.dim() * b.dim(), a.dim() * b.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i) {
        for (Eigen::Index j = 0; j < a.dim(); ++j) {
            out.block(i * b.dim(), j * b.dim(), b.dim(), b.dim()) =
                a.matrix()(i, j) * b.matrix();
        }
    }
    return UnitaryMatrix(n, std::move(out));
}

// Trace over all qubits not in `keep`; kept qubits are relabeled 1..|keep|
// in their original order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const QubitSet& keep) {
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
    keep.check_in_range(rho.qubits());

    const int n = rho.qubits();
    std::vector<int> traced;
    for (int q = 1; q <= n; ++q) {
        if (!keep.contains(q)) traced.push_back(q);
    }
    const QubitSet traced_set(traced);

    const auto out_dim = static_cast<Eigen::Index>(detail::dim_for(keep.size()));
    Matrix out = Matrix::Zero(out_dim, out_dim);
    const std::uint64_t traced_dim = detail::dim_for(static_cast<int>(traced.size()));
    for (std::uint64_t r = 0; r < static_cast<std::uint64_t>(out_dim); ++r) {
        for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(out_dim); ++c) {
            Complex sum = 0.0;
            for (std::uint64_t t = 0; t < traced_dim; ++t) {
                std::uint64_t row = detail::deposit_bits(0, r, keep, n);
                row = detail::deposit_bits(row, t, traced_set, n);
                std::uint64_t col = detail::deposit_bits(0, c, keep, n);
                col = detail::deposit_bits(col, t, traced_set, n);
                sum += rho(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
            }
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sum;
        }
    }
    return DensityMatrix(keep.size(), std::move(out));
}

// (1/2) * sum of |eigenvalues| of rho - sigma.
inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.qubits() != sigma.qubits()) {
        throw std::invalid_argument("trace_distance: dimension mismatch");
    }
    Matrix diff = rho.matrix() - sigma.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(diff, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

// Embed `u` on `targets` (identity elsewhere) as a full n-qubit unitary.
inline UnitaryMatrix embed_unitary(const UnitaryMatrix& u, const QubitSet& targets,
                                   int n) {
    targets.check_in_range(n);
    if (u.qubits() != targets.size()) {
        throw std::invalid_argument("embed_unitary: target arity mismatch");
    }
    const auto dim = static_cast<Eigen::Index>(detail::dim_for(n));
    Matrix out = Matrix::Zero(dim, dim);
    for (std::uint64_t col = 0; col < static_cast<std::uint64_t>(dim); ++col) {
        const std::uint64_t in_bits = detail::extract_bits(col, targets, n);
        for (std::uint64_t out_bits = 0;
             out_bits < detail::dim_for(targets.size()); ++out_bits) {
            const Complex amp = u.matrix()(static_cast<Eigen::Index>(out_bits),
                                           static_cast<Eigen::Index>(in_bits));
            if (amp == Complex(0.0)) continue;
            const std::uint64_t row = detail::deposit_bits(col, out_bits, targets, n);
            out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = amp;
        }
    }
    return UnitaryMatrix(n, std::move(out));
}

inline DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryMatrix& u,
                                   const QubitSet& targets) {
    const UnitaryMatrix full = embed_unitary(u, targets, rho.qubits());
    return DensityMatrix(rho.qubits(),
                         full.matrix() * rho.matrix() * full.matrix().adjoint());
}

inline StateVector apply_unitary(const StateVector& psi, const UnitaryMatrix& u,
                                 const QubitSet& targets) {
    const UnitaryMatrix full = embed_unitary(u, targets, psi.qubits());
    return StateVector(psi.qubits(), full.matrix() * psi.amplitudes());
}

// Exact outcome distribution of a computational-basis measurement.
inline std::vector<std::pair<std::uint64_t, double>> measurement_distribution(
    const DensityMatrix& rho, const QubitSet& targets) {
    targets.check_in_range(rho.qubits());
    const int n = rho.qubits();
    std::vector<double> probs(detail::dim_for(targets.size()), 0.0);
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(rho.dim()); ++i) {
        probs[detail::extract_bits(i, targets, n)] +=
            rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    }
    std::vector<std::pair<std::uint64_t, double>> out;
    for (std::uint64_t bits = 0; bits < probs.size(); ++bits) {
        out.emplace_back(bits, probs[bits]);
    }
    return out;
}

struct MeasurementResult {
    std::uint64_t bits;       // MSB-first over targets
    DensityMatrix post_state;
    double probability;
};

// Projected, renormalized post-state for a fixed outcome. Throws if the
// outcome has probability below tolerance.
inline MeasurementResult project_outcome(const DensityMatrix& rho,
                                         const QubitSet& targets,
                                         std::uint64_t outcome) {
    targets.check_in_range(rho.qubits());
    const int n = rho.qubits();
    Matrix projected = Matrix::Zero(rho.dim(), rho.dim());
    double prob = 0.0;
    for (std::uint64_t r = 0; r < static_cast<std::uint64_t>(rho.dim()); ++r) {
        if (detail::extract_bits(r, targets, n) != outcome) continue;
        prob += rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)).real();
        for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(rho.dim()); ++c) {
            if (detail::extract_bits(c, targets, n) != outcome) continue;
            projected(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    if (prob <= kTolerance) {
        throw std::invalid_argument("project_outcome: outcome has probability 0");
    }
    return {outcome, DensityMatrix(n, projected / prob), prob};
}

// Born-rule sample of a computational-basis measurement on `targets`.
inline MeasurementResult measure_computational(const DensityMatrix& rho,
                                               const QubitSet& targets,
                                               SeededRng& rng) {
    const auto dist = measurement_distribution(rho, targets);
    double x = rng.real();
    std::uint64_t chosen = dist.back().first;
    for (const auto& [bits, p] : dist) {
        if (p <= 0.0) continue;  // zero-probability outcomes are never sampled
        if (x < p) {
            chosen = bits;
            break;
        }
        x -= p;
    }
    return project_outcome(rho, targets, chosen);
}

// Convex combination of density matrices.
inline DensityMatrix mixture(
    const std::vector<std::pair<double, DensityMatrix>>& parts) {
    if (parts.empty()) throw std::invalid_argument("mixture: empty part list");
    const int n = parts.front().second.qubits();
    double total = 0.0;
    Matrix acc = Matrix::Zero(parts.front().second.dim(), parts.front().second.dim());
    for (const auto& [w, rho] : parts) {
        if (w < -kTolerance) throw std::invalid_argument("mixture: negative weight");
        if (rho.qubits() != n) throw std::invalid_argument("mixture: dimension mismatch");
        total += w;
        acc += w * rho.matrix();
    }
    if (std::abs(total - 1.0) > kTolerance) {
        throw std::invalid_argument("mixture: weights do not sum to 1");
    }
    return DensityMatrix(n, std::move(acc));
}

// --- Standard gates ------------------------------------------------------

inline UnitaryMatrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return UnitaryMatrix(1, m);
}

inline UnitaryMatrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return UnitaryMatrix(1, m);
}

inline UnitaryMatrix pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return UnitaryMatrix(1, m);
}

inline UnitaryMatrix hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix m(2, 2);
    m << s, s, s, -s;
    return UnitaryMatrix(1, m);
}

}  // namespace qzk::qmath
