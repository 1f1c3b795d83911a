// oracles.hpp
// Independent reference implementations used to check the library. These
// deliberately avoid the library's code paths: plain loops over
// std::complex arrays, singular values instead of eigenvalues, and direct
// 2x2 Pauli arithmetic for the pad average.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <complex>
#include <cstdint>
#include <vector>

namespace oracles {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// Kronecker product by index arithmetic.
inline Mat tensor(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            for (Eigen::Index k = 0; k < b.rows(); ++k) {
                for (Eigen::Index l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return out;
}

// Partial trace keeping the 1-based qubits in `keep` (qubit 1 = MSB),
// computed by splitting every index into kept and traced bit groups.
inline Mat partial_trace(const Mat& rho, int n, const std::vector<int>& keep) {
    std::vector<int> traced;
    for (int q = 1; q <= n; ++q) {
        bool kept = false;
        for (int kq : keep) kept = kept || kq == q;
        if (!kept) traced.push_back(q);
    }
    const auto bit = [n](std::uint64_t idx, int q) {
        return (idx >> (n - q)) & 1u;
    };
    const auto dim_out = std::size_t{1} << keep.size();
    const auto dim_tr = std::size_t{1} << traced.size();
    Mat out = Mat::Zero(static_cast<Eigen::Index>(dim_out),
                        static_cast<Eigen::Index>(dim_out));
    const std::uint64_t dim = std::uint64_t{1} << n;
    for (std::uint64_t r = 0; r < dim; ++r) {
        for (std::uint64_t c = 0; c < dim; ++c) {
            // The traced bits must agree between row and column.
            bool diag = true;
            for (int q : traced) diag = diag && bit(r, q) == bit(c, q);
            if (!diag) continue;
            std::uint64_t ro = 0;
            std::uint64_t co = 0;
            for (int q : keep) {
                ro = (ro << 1) | bit(r, q);
                co = (co << 1) | bit(c, q);
            }
            out(static_cast<Eigen::Index>(ro), static_cast<Eigen::Index>(co)) +=
                rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    (void)dim_tr;
    return out;
}

// Trace distance via singular values (the difference is Hermitian, so the
// singular values are the absolute eigenvalues).
inline double trace_distance(const Mat& a, const Mat& b) {
    Eigen::JacobiSVD<Mat> svd(a - b);
    return 0.5 * svd.singularValues().sum();
}

inline Mat pauli(int r, int s) {
    Mat x(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    Mat out = Mat::Identity(2, 2);
    if (s) out = z * out;
    if (r) out = x * out;
    return out;
}

// (1/4^n) sum over all pad keys of U rho U^dagger, built from scratch.
inline Mat pad_average(const Mat& rho, int n) {
    const std::uint64_t keys = std::uint64_t{1} << (2 * n);
    Mat acc = Mat::Zero(rho.rows(), rho.cols());
    for (std::uint64_t key = 0; key < keys; ++key) {
        Mat u = Mat::Identity(1, 1);
        for (int q = 0; q < n; ++q) {
            const int r = static_cast<int>((key >> (2 * q)) & 1u);
            const int s = static_cast<int>((key >> (2 * q + 1)) & 1u);
            u = tensor(u, pauli(r, s));
        }
        acc += u * rho * u.adjoint();
    }
    return acc / static_cast<double>(keys);
}

// Exact reveal game for one hidden bit of security k: the cheater flips one
// share per pair at a uniformly random position; he survives a pair iff the
// flipped position is not the verifier's b. Returns the exact pass count
// over all (b, flip) combinations -- pass probability 2^{-k}.
inline double lying_pass_probability(int k) {
    long long pass = 0;
    const long long total = 1LL << (2 * k);
    for (long long atoms = 0; atoms < total; ++atoms) {
        bool ok = true;
        for (int j = 0; j < k; ++j) {
            const int b = static_cast<int>((atoms >> (2 * j)) & 1);
            const int flip = static_cast<int>((atoms >> (2 * j + 1)) & 1);
            if (flip == b) ok = false;
        }
        if (ok) ++pass;
    }
    return static_cast<double>(pass) / static_cast<double>(total);
}

}  // namespace oracles
