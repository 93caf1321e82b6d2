#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "horo/report.hpp"

namespace horo::crown {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using MatrixR = Eigen::MatrixXd;

constexpr double max_condition = 1e12;

/// Real strictly upper triangular n×n matrix.
struct UpperNilpotent {
    explicit UpperNilpotent(MatrixR entries);
    static UpperNilpotent unit(int n, int i, int j, double value);  // value·E_ij, 0-based

    int n() const { return static_cast<int>(Y.rows()); }
    MatrixR Y;
};

/// k×(n-k) block Z, embedded in the upper-right corner of an n×n matrix.
struct BlockMatrix {
    BlockMatrix(int n, int k, MatrixC Z);

    MatrixC embedded() const;
    int n;
    int k;
    MatrixC Z;
};

/// Exact finite series Σ_{m<n} X^m/m! for nilpotent X.
MatrixC exp_nilpotent(const MatrixC& X);
/// Scaling-and-squaring Padé exponential.
MatrixC exp_pade(const MatrixC& X);

/// det(⟨g e_i, g e_j⟩)_{k < i,j <= n} with the bilinear pairing zᵀw (columns k+1..n, 1-based k).
/// Throws ConditioningError if the 2-norm condition number of g exceeds max_condition.
Complex f_k(const MatrixC& g, int k);

/// 1 - YᵀY positive definite, by a symmetric eigen-solve.
bool upsilon_membership(const MatrixR& Y);
double upsilon_margin(const MatrixR& Y);  // smallest eigenvalue of 1 - YᵀY

struct Crossing {
    bool found = false;
    double tau = 0.0;  // smallest τ with a zero of some f_k on exp(iτY)·N
    int k = 0;
    Complex z;         // the zero z = s + iτ of z ↦ f_k(exp(zY)·u)
    int sample = -1;   // -1 for u = 1
};

/// Zeros of the polynomial z ↦ f_k(exp(zY)·u). For real s, exp((s+iτ)Y)·u = exp(iτY)·(exp(sY)u) with
/// exp(sY)u ∈ N, so a zero at Im z = τ > 0 certifies τY ∉ Λ'.
std::vector<Complex> line_zeros(const UpperNilpotent& Y, const MatrixR& u, int k);

/// First crossing along τ ↦ τY over u = 1 and the given samples; τ is exact to root-polishing precision.
Crossing first_crossing(const UpperNilpotent& Y, const std::vector<MatrixR>& samples);

/// Random real upper unipotent matrices with entries uniform in [-radius, radius].
std::vector<MatrixR> sample_unipotent(int n, int count, double radius, std::uint64_t seed);

/// min |f_k(exp(iY)·u)| per k over the samples, and the first crossing along the segment.
Report tube_probe(const UpperNilpotent& Y, int sample_count = 512, double radius = 5.0, std::uint64_t seed = 1);

/// Left complex-orthogonal and right lower-unipotent invariance of every f_k on random complex g.
Report invariance(int n, int trials, std::uint64_t seed, double tolerance = 1e-8);

/// f_k(κ a n̄) against the monomial a_{k+1}···a_n and its square.
Report iwasawa_diagonal(int n, int trials, std::uint64_t seed, double tolerance = 1e-10);

/// f_k(exp(Z)) against det(1 + ZᵀZ) for random complex blocks.
Report abelian_block(int n, int k, int trials, std::uint64_t seed, double tolerance = 1e-10);

/// τ*(cY) for increasing scales c over random directions: finite once c is large enough.
Report segment_exit(int n, int directions, const std::vector<double>& scales, std::uint64_t seed);

}  // namespace horo::crown
