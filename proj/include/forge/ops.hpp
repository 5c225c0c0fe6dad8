#pragma once

#include <memory>
#include <vector>

#include "forge/rng.hpp"
#include "forge/tensor.hpp"

namespace forge::ad {

// Immutable CSR matrix used for fixed graph operators (never differentiated
// with respect to its own values).
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr;  // size rows+1
    std::vector<int> col_idx;
    std::vector<double> vals;
};

SparseMatrix sparse_transpose(const SparseMatrix& a);

// Forward operator plus its transpose for the backward pass. For symmetric
// operators both members may point at the same matrix.
struct SpPair {
    std::shared_ptr<const SparseMatrix> fwd;
    std::shared_ptr<const SparseMatrix> bwd;
};

SpPair make_sp_pair(SparseMatrix a);            // builds the transpose
SpPair make_symmetric_sp_pair(SparseMatrix a);  // bwd aliases fwd

enum class Mode { train, eval };

// Every op validates shapes (throwing dim_error naming both operands),
// computes the forward value, and, when a tape is supplied and some input
// requires grad, records a backward rule that accumulates additively.
// Passing tape == nullptr gives a plain forward evaluation.

TensorPtr matmul(Tape* tape, const TensorPtr& a, const TensorPtr& b);
TensorPtr add(Tape* tape, const TensorPtr& a, const TensorPtr& b);
TensorPtr sub(Tape* tape, const TensorPtr& a, const TensorPtr& b);
TensorPtr mul(Tape* tape, const TensorPtr& a, const TensorPtr& b);  // elementwise
TensorPtr scalar_mul(Tape* tape, const TensorPtr& a, double c);
TensorPtr transpose(Tape* tape, const TensorPtr& a);
TensorPtr concat_cols(Tape* tape, const TensorPtr& a, const TensorPtr& b);

// Broadcast adds: a row vector to every row, or a column vector to every column.
TensorPtr add_row_bias(Tape* tape, const TensorPtr& x, const TensorPtr& bias);  // bias 1xF
TensorPtr add_col_bias(Tape* tape, const TensorPtr& x, const TensorPtr& bias);  // bias Nx1

// out[r] = x[idx[r]]; backward scatter-adds rows. Indices must be in [0, x->rows).
TensorPtr gather_rows(Tape* tape, const TensorPtr& x, const std::vector<int>& idx);

// out[s][j] = max over rows r with seg[r] == s of x[r][j]; empty segments
// yield zero rows (and receive no gradient). Gradient flows to the first
// attaining row per (segment, column).
TensorPtr segment_max(Tape* tape, const TensorPtr& x, const std::vector<int>& seg,
                      int segments);

// Sparse @ dense. The sparse operator is constant.
TensorPtr spmm(Tape* tape, const SpPair& a, const TensorPtr& x);

TensorPtr relu(Tape* tape, const TensorPtr& x);

// Inverted dropout: train mode zeroes elements with probability p and scales
// survivors by 1/(1-p); eval mode is the identity and consumes no
// randomness. Requires 0 <= p < 1.
TensorPtr dropout(Tape* tape, const TensorPtr& x, double p, Mode mode, Rng* rng);

TensorPtr abs_val(Tape* tape, const TensorPtr& x);
TensorPtr square(Tape* tape, const TensorPtr& x);
TensorPtr sum_all(Tape* tape, const TensorPtr& x);   // 1x1
TensorPtr mean_all(Tape* tape, const TensorPtr& x);  // 1x1

TensorPtr col_max(Tape* tape, const TensorPtr& x);                 // 1xF column maxima
TensorPtr broadcast_rows(Tape* tape, const TensorPtr& x, int n);   // tile 1xF to NxF

}  // namespace forge::ad
