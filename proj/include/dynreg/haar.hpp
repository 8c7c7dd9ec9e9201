#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dynreg/dense.hpp"
#include "dynreg/embedded.hpp"

namespace dynreg {

/// log2 of a power of two; throws std::invalid_argument otherwise.
std::size_t log2_exact(std::size_t n);

std::size_t next_pow2(std::size_t n);

struct SparseEntry {
    std::size_t index;
    double value;
};

/// Unnormalized Haar basis matrix of order n (T = 2^n), built by the
/// recursion H_0 = (1), H_n = [ H_{n-1} (x) (1,1)^T | I (x) (1,-1)^T ].
/// Dense use only; throws std::invalid_argument for n > 12.
DenseMatrix haar_matrix(std::size_t n);

/// y = H_n^T v in O(T) via the pairwise sum/difference recursion.
/// Throws std::invalid_argument unless |v| is a power of two.
void haar_transpose_apply(std::span<const double> v, std::span<double> y);

/// y = H_n c in O(T), the inverse recursion of haar_transpose_apply.
void haar_apply(std::span<const double> c, std::span<double> y);

/// The 1+n nonzero entries of row t of H_n (equivalently h_t = H_n^T e_t),
/// values in {-1, +1}. 0-based row index.
std::vector<SparseEntry> haar_row(std::size_t t, std::size_t n);

/// Diagonal of H_n H_n^T: every entry equals 1 + n.
double hht_diag(std::size_t n);

/// Squared column norm of H_n at a given column: the diagonal of D_n^2 in the
/// factorization H_n = (normalized basis) * D_n. Column 0 and 1 have norm^2 T,
/// columns [2^k, 2^{k+1}) have norm^2 T / 2^k.
double haar_scale_sq(std::size_t column, std::size_t n);

/// Consecutive intervals of length tau partitioning [0, T).
struct TimescalePartition {
    TimescalePartition(std::size_t T, std::size_t tau);
    std::size_t tau;
    std::vector<std::pair<std::size_t, std::size_t>> intervals;  // [begin, end)
};

/// ||u~||^2_M for S = (H H^T)^{-1}, computed coordinate-wise through the O(T)
/// factorization H^{-1} = D^{-2} H^T, never through a dense inverse. Equals
/// ||u bar||^2 + (1/4) * sum over timescales of the squared path-length.
/// Requires T a power of two.
double haar_comparator_norm_sq(const ComparatorSeq& seq);

/// Squared path-length at timescale tau: interval averages over consecutive
/// length-tau windows, summed over the disjoint pairs (2i, 2i+1). For
/// tau == T returns ||u bar||^2. tau must be a power of two dividing T.
double timescale_path_length(const ComparatorSeq& seq, std::size_t tau);

}  // namespace dynreg
