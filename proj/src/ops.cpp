#include "forge/ops.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>

#include "forge/error.hpp"

namespace forge::ad {

namespace {

void check_same_shape(const char* op, const TensorPtr& a, const TensorPtr& b) {
    if (a->rows != b->rows || a->cols != b->cols) {
        throw dim_error(std::string(op) + ": shapes " + a->shape_str() + " and " +
                        b->shape_str() + " do not match");
    }
}

bool want_grad(Tape* tape, const TensorPtr& a) { return tape && a->requires_grad; }

bool want_grad(Tape* tape, const TensorPtr& a, const TensorPtr& b) {
    return tape && (a->requires_grad || b->requires_grad);
}

TensorPtr out_like(int rows, int cols, bool rg) { return make_tensor(rows, cols, rg); }

// C += alpha * op(A) @ op(B), row-major.
void gemm_acc(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a,
              int lda, const double* b, int ldb, double beta, double* c, int ldc) {
    cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
                trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b, ldb, beta, c,
                ldc);
}

}  // namespace

SparseMatrix sparse_transpose(const SparseMatrix& a) {
    SparseMatrix t;
    t.rows = a.cols;
    t.cols = a.rows;
    t.row_ptr.assign(static_cast<std::size_t>(t.rows) + 1, 0);
    for (int c : a.col_idx) ++t.row_ptr[static_cast<std::size_t>(c) + 1];
    for (int r = 0; r < t.rows; ++r) {
        t.row_ptr[static_cast<std::size_t>(r) + 1] += t.row_ptr[static_cast<std::size_t>(r)];
    }
    t.col_idx.resize(a.col_idx.size());
    t.vals.resize(a.vals.size());
    std::vector<int> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
    for (int r = 0; r < a.rows; ++r) {
        for (int k = a.row_ptr[static_cast<std::size_t>(r)];
             k < a.row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            const int c = a.col_idx[static_cast<std::size_t>(k)];
            const int pos = cursor[static_cast<std::size_t>(c)]++;
            t.col_idx[static_cast<std::size_t>(pos)] = r;
            t.vals[static_cast<std::size_t>(pos)] = a.vals[static_cast<std::size_t>(k)];
        }
    }
    return t;
}

SpPair make_sp_pair(SparseMatrix a) {
    auto fwd = std::make_shared<const SparseMatrix>(std::move(a));
    auto bwd = std::make_shared<const SparseMatrix>(sparse_transpose(*fwd));
    return {fwd, bwd};
}

SpPair make_symmetric_sp_pair(SparseMatrix a) {
    auto fwd = std::make_shared<const SparseMatrix>(std::move(a));
    return {fwd, fwd};
}

TensorPtr matmul(Tape* tape, const TensorPtr& a, const TensorPtr& b) {
    if (a->cols != b->rows) {
        throw dim_error("matmul: " + a->shape_str() + " @ " + b->shape_str() +
                        " have incompatible inner dimensions");
    }
    auto out = out_like(a->rows, b->cols, want_grad(tape, a, b));
    if (a->rows > 0 && b->cols > 0 && a->cols > 0) {
        gemm_acc(false, false, a->rows, b->cols, a->cols, 1.0, a->values.data(), a->cols,
                 b->values.data(), b->cols, 0.0, out->values.data(), out->cols);
    }
    if (out->requires_grad) {
        tape->record(out, [a, b, out] {
            if (a->requires_grad) {
                a->ensure_grad();
                // dA += dOut @ B^T
                gemm_acc(false, true, a->rows, a->cols, b->cols, 1.0, out->grad.data(),
                         out->cols, b->values.data(), b->cols, 1.0, a->grad.data(), a->cols);
            }
            if (b->requires_grad) {
                b->ensure_grad();
                // dB += A^T @ dOut
                gemm_acc(true, false, b->rows, b->cols, a->rows, 1.0, a->values.data(), a->cols,
                         out->grad.data(), out->cols, 1.0, b->grad.data(), b->cols);
            }
        });
    }
    return out;
}

TensorPtr add(Tape* tape, const TensorPtr& a, const TensorPtr& b) {
    check_same_shape("add", a, b);
    auto out = out_like(a->rows, a->cols, want_grad(tape, a, b));
    for (std::size_t i = 0; i < out->size(); ++i) out->values[i] = a->values[i] + b->values[i];
    if (out->requires_grad) {
        tape->record(out, [a, b, out] {
            accumulate(a, out->grad.data());
            accumulate(b, out->grad.data());
        });
    }
    return out;
}

TensorPtr sub(Tape* tape, const TensorPtr& a, const TensorPtr& b) {
    check_same_shape("sub", a, b);
    auto out = out_like(a->rows, a->cols, want_grad(tape, a, b));
    for (std::size_t i = 0; i < out->size(); ++i) out->values[i] = a->values[i] - b->values[i];
    if (out->requires_grad) {
        tape->record(out, [a, b, out] {
            accumulate(a, out->grad.data());
            if (b->requires_grad) {
                b->ensure_grad();
                for (std::size_t i = 0; i < b->size(); ++i) b->grad[i] -= out->grad[i];
            }
        });
    }
    return out;
}

TensorPtr mul(Tape* tape, const TensorPtr& a, const TensorPtr& b) {
    check_same_shape("mul", a, b);
    auto out = out_like(a->rows, a->cols, want_grad(tape, a, b));
    for (std::size_t i = 0; i < out->size(); ++i) out->values[i] = a->values[i] * b->values[i];
    if (out->requires_grad) {
        tape->record(out, [a, b, out] {
            if (a->requires_grad) {
                a->ensure_grad();
                for (std::size_t i = 0; i < a->size(); ++i) {
                    a->grad[i] += out->grad[i] * b->values[i];
                }
            }
            if (b->requires_grad) {
                b->ensure_grad();
                for (std::size_t i = 0; i < b->size(); ++i) {
                    b->grad[i] += out->grad[i] * a->values[i];
                }
            }
        });
    }
    return out;
}

TensorPtr scalar_mul(Tape* tape, const TensorPtr& a, double c) {
    auto out = out_like(a->rows, a->cols, want_grad(tape, a));
    for (std::size_t i = 0; i < out->size(); ++i) out->values[i] = a->values[i] * c;
    if (out->requires_grad) {
        tape->record(out, [a, out, c] {
            a->ensure_grad();
            for (std::size_t i = 0; i < a->size(); ++i) a->grad[i] += out->grad[i] * c;
        });
    }
    return out;
}

TensorPtr transpose(Tape* tape, const TensorPtr& a) {
    auto out = out_like(a->cols, a->rows, want_grad(tape, a));
    for (int r = 0; r < a->rows; ++r) {
        for (int c = 0; c < a->cols; ++c) out->at(c, r) = a->at(r, c);
    }
    if (out->requires_grad) {
        tape->record(out, [a, out] {
            a->ensure_grad();
            for (int r = 0; r < a->rows; ++r) {
                for (int c = 0; c < a->cols; ++c) {
                    a->grad[static_cast<std::size_t>(r) * a->cols + c] +=
                        out->grad[static_cast<std::size_t>(c) * out->cols + r];
                }
            }
        });
    }
    return out;
}

TensorPtr concat_cols(Tape* tape, const TensorPtr& a, const TensorPtr& b) {
    if (a->rows != b->rows) {
        throw dim_error("concat_cols: " + a->shape_str() + " and " + b->shape_str() +
                        " differ in row count");
    }
    auto out = out_like(a->rows, a->cols + b->cols, want_grad(tape, a, b));
    for (int r = 0; r < a->rows; ++r) {
        double* dst = out->values.data() + static_cast<std::size_t>(r) * out->cols;
        std::copy_n(a->values.data() + static_cast<std::size_t>(r) * a->cols, a->cols, dst);
        std::copy_n(b->values.data() + static_cast<std::size_t>(r) * b->cols, b->cols,
                    dst + a->cols);
    }
    if (out->requires_grad) {
        tape->record(out, [a, b, out] {
            if (a->requires_grad) {
                a->ensure_grad();
                for (int r = 0; r < a->rows; ++r) {
                    const double* g = out->grad.data() + static_cast<std::size_t>(r) * out->cols;
                    double* ga = a->grad.data() + static_cast<std::size_t>(r) * a->cols;
                    for (int c = 0; c < a->cols; ++c) ga[c] += g[c];
                }
            }
            if (b->requires_grad) {
                b->ensure_grad();
                for (int r = 0; r < b->rows; ++r) {
                    const double* g = out->grad.data() + static_cast<std::size_t>(r) * out->cols +
                                      a->cols;
                    double* gb = b->grad.data() + static_cast<std::size_t>(r) * b->cols;
                    for (int c = 0; c < b->cols; ++c) gb[c] += g[c];
                }
            }
        });
    }
    return out;
}

TensorPtr add_row_bias(Tape* tape, const TensorPtr& x, const TensorPtr& bias) {
    if (bias->rows != 1 || bias->cols != x->cols) {
        throw dim_error("add_row_bias: bias " + bias->shape_str() + " does not broadcast over " +
                        x->shape_str());
    }
    auto out = out_like(x->rows, x->cols, want_grad(tape, x, bias));
    for (int r = 0; r < x->rows; ++r) {
        const double* src = x->values.data() + static_cast<std::size_t>(r) * x->cols;
        double* dst = out->values.data() + static_cast<std::size_t>(r) * x->cols;
        for (int c = 0; c < x->cols; ++c) dst[c] = src[c] + bias->values[static_cast<std::size_t>(c)];
    }
    if (out->requires_grad) {
        tape->record(out, [x, bias, out] {
            accumulate(x, out->grad.data());
            if (bias->requires_grad) {
                bias->ensure_grad();
                for (int r = 0; r < out->rows; ++r) {
                    const double* g = out->grad.data() + static_cast<std::size_t>(r) * out->cols;
                    for (int c = 0; c < out->cols; ++c) {
                        bias->grad[static_cast<std::size_t>(c)] += g[c];
                    }
                }
            }
        });
    }
    return out;
}

TensorPtr add_col_bias(Tape* tape, const TensorPtr& x, const TensorPtr& bias) {
    if (bias->cols != 1 || bias->rows != x->rows) {
        throw dim_error("add_col_bias: bias " + bias->shape_str() + " does not broadcast over " +
                        x->shape_str());
    }
    auto out = out_like(x->rows, x->cols, want_grad(tape, x, bias));
    for (int r = 0; r < x->rows; ++r) {
        const double b = bias->values[static_cast<std::size_t>(r)];
        const double* src = x->values.data() + static_cast<std::size_t>(r) * x->cols;
        double* dst = out->values.data() + static_cast<std::size_t>(r) * x->cols;
        for (int c = 0; c < x->cols; ++c) dst[c] = src[c] + b;
    }
    if (out->requires_grad) {
        tape->record(out, [x, bias, out] {
            accumulate(x, out->grad.data());
            if (bias->requires_grad) {
                bias->ensure_grad();
                for (int r = 0; r < out->rows; ++r) {
                    const double* g = out->grad.data() + static_cast<std::size_t>(r) * out->cols;
                    double s = 0.0;
                    for (int c = 0; c < out->cols; ++c) s += g[c];
                    bias->grad[static_cast<std::size_t>(r)] += s;
                }
            }
        });
    }
    return out;
}

TensorPtr gather_rows(Tape* tape, const TensorPtr& x, const std::vector<int>& idx) {
    for (int i : idx) {
        if (i < 0 || i >= x->rows) {
            throw dim_error("gather_rows: index " + std::to_string(i) + " outside " +
                            x->shape_str());
        }
    }
    auto out = out_like(static_cast<int>(idx.size()), x->cols, want_grad(tape, x));
    for (std::size_t r = 0; r < idx.size(); ++r) {
        std::copy_n(x->values.data() + static_cast<std::size_t>(idx[r]) * x->cols, x->cols,
                    out->values.data() + r * x->cols);
    }
    if (out->requires_grad) {
        tape->record(out, [x, out, idx] {
            x->ensure_grad();
            for (std::size_t r = 0; r < idx.size(); ++r) {
                const double* g = out->grad.data() + r * out->cols;
                double* gx = x->grad.data() + static_cast<std::size_t>(idx[r]) * x->cols;
                for (int c = 0; c < out->cols; ++c) gx[c] += g[c];
            }
        });
    }
    return out;
}

TensorPtr segment_max(Tape* tape, const TensorPtr& x, const std::vector<int>& seg,
                      int segments) {
    if (static_cast<int>(seg.size()) != x->rows) {
        throw dim_error("segment_max: segment ids (" + std::to_string(seg.size()) +
                        ") do not match rows of " + x->shape_str());
    }
    for (int s : seg) {
        if (s < 0 || s >= segments) {
            throw dim_error("segment_max: segment id " + std::to_string(s) + " outside [0, " +
                            std::to_string(segments) + ")");
        }
    }
    auto out = out_like(segments, x->cols, want_grad(tape, x));
    // argmax row per (segment, column); -1 marks an empty segment.
    auto arg = std::make_shared<std::vector<int>>(
        static_cast<std::size_t>(segments) * static_cast<std::size_t>(x->cols), -1);
    for (int r = 0; r < x->rows; ++r) {
        const int s = seg[static_cast<std::size_t>(r)];
        const double* src = x->values.data() + static_cast<std::size_t>(r) * x->cols;
        double* dst = out->values.data() + static_cast<std::size_t>(s) * x->cols;
        int* a = arg->data() + static_cast<std::size_t>(s) * x->cols;
        for (int c = 0; c < x->cols; ++c) {
            if (a[c] < 0 || src[c] > dst[c]) {
                dst[c] = src[c];
                a[c] = r;
            }
        }
    }
    if (out->requires_grad) {
        tape->record(out, [x, out, arg] {
            x->ensure_grad();
            for (int s = 0; s < out->rows; ++s) {
                const double* g = out->grad.data() + static_cast<std::size_t>(s) * out->cols;
                const int* a = arg->data() + static_cast<std::size_t>(s) * out->cols;
                for (int c = 0; c < out->cols; ++c) {
                    if (a[c] >= 0) {
                        x->grad[static_cast<std::size_t>(a[c]) * x->cols + c] += g[c];
                    }
                }
            }
        });
    }
    return out;
}

namespace {

void csr_matmul_acc(const SparseMatrix& a, const double* x, int xcols, double* out) {
    for (int r = 0; r < a.rows; ++r) {
        double* dst = out + static_cast<std::size_t>(r) * xcols;
        for (int k = a.row_ptr[static_cast<std::size_t>(r)];
             k < a.row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            const double v = a.vals[static_cast<std::size_t>(k)];
            const double* src =
                x + static_cast<std::size_t>(a.col_idx[static_cast<std::size_t>(k)]) * xcols;
            for (int c = 0; c < xcols; ++c) dst[c] += v * src[c];
        }
    }
}

}  // namespace

TensorPtr spmm(Tape* tape, const SpPair& a, const TensorPtr& x) {
    if (a.fwd->cols != x->rows) {
        throw dim_error("spmm: sparse " + std::to_string(a.fwd->rows) + "x" +
                        std::to_string(a.fwd->cols) + " @ dense " + x->shape_str() +
                        " have incompatible inner dimensions");
    }
    auto out = out_like(a.fwd->rows, x->cols, want_grad(tape, x));
    csr_matmul_acc(*a.fwd, x->values.data(), x->cols, out->values.data());
    if (out->requires_grad) {
        tape->record(out, [a, x, out] {
            x->ensure_grad();
            csr_matmul_acc(*a.bwd, out->grad.data(), out->cols, x->grad.data());
        });
    }
    return out;
}

TensorPtr relu(Tape* tape, const TensorPtr& x) {
    auto out = out_like(x->rows, x->cols, want_grad(tape, x));
    for (std::size_t i = 0; i < x->size(); ++i) {
        out->values[i] = x->values[i] > 0.0 ? x->values[i] : 0.0;
    }
    if (out->requires_grad) {
        tape->record(out, [x, out] {
            x->ensure_grad();
            for (std::size_t i = 0; i < x->size(); ++i) {
                if (x->values[i] > 0.0) x->grad[i] += out->grad[i];
            }
        });
    }
    return out;
}

TensorPtr dropout(Tape* tape, const TensorPtr& x, double p, Mode mode, Rng* rng) {
    if (!(p >= 0.0 && p < 1.0)) {
        throw validation_error("dropout probability must be in [0, 1), got " +
                               std::to_string(p));
    }
    if (mode == Mode::eval || p == 0.0) return x;
    if (!rng) throw validation_error("train-mode dropout needs a seeded rng");
    auto out = out_like(x->rows, x->cols, want_grad(tape, x));
    // Scaled mask: 0 with probability p, 1/(1-p) otherwise.
    auto mask = std::make_shared<std::vector<double>>(x->size());
    const double keep_scale = 1.0 / (1.0 - p);
    for (std::size_t i = 0; i < x->size(); ++i) {
        (*mask)[i] = rng->uniform() < p ? 0.0 : keep_scale;
        out->values[i] = x->values[i] * (*mask)[i];
    }
    if (out->requires_grad) {
        tape->record(out, [x, out, mask] {
            x->ensure_grad();
            for (std::size_t i = 0; i < x->size(); ++i) {
                x->grad[i] += out->grad[i] * (*mask)[i];
            }
        });
    }
    return out;
}

TensorPtr abs_val(Tape* tape, const TensorPtr& x) {
    auto out = out_like(x->rows, x->cols, want_grad(tape, x));
    for (std::size_t i = 0; i < x->size(); ++i) out->values[i] = std::abs(x->values[i]);
    if (out->requires_grad) {
        tape->record(out, [x, out] {
            x->ensure_grad();
            for (std::size_t i = 0; i < x->size(); ++i) {
                if (x->values[i] > 0.0) {
                    x->grad[i] += out->grad[i];
                } else if (x->values[i] < 0.0) {
                    x->grad[i] -= out->grad[i];
                }
            }
        });
    }
    return out;
}

TensorPtr square(Tape* tape, const TensorPtr& x) {
    auto out = out_like(x->rows, x->cols, want_grad(tape, x));
    for (std::size_t i = 0; i < x->size(); ++i) out->values[i] = x->values[i] * x->values[i];
    if (out->requires_grad) {
        tape->record(out, [x, out] {
            x->ensure_grad();
            for (std::size_t i = 0; i < x->size(); ++i) {
                x->grad[i] += 2.0 * x->values[i] * out->grad[i];
            }
        });
    }
    return out;
}

TensorPtr sum_all(Tape* tape, const TensorPtr& x) {
    auto out = out_like(1, 1, want_grad(tape, x));
    double s = 0.0;
    for (double v : x->values) s += v;
    out->values[0] = s;
    if (out->requires_grad) {
        tape->record(out, [x, out] {
            x->ensure_grad();
            const double g = out->grad[0];
            for (std::size_t i = 0; i < x->size(); ++i) x->grad[i] += g;
        });
    }
    return out;
}

TensorPtr mean_all(Tape* tape, const TensorPtr& x) {
    if (x->size() == 0) throw dim_error("mean_all: empty tensor");
    auto out = out_like(1, 1, want_grad(tape, x));
    double s = 0.0;
    for (double v : x->values) s += v;
    out->values[0] = s / static_cast<double>(x->size());
    if (out->requires_grad) {
        tape->record(out, [x, out] {
            x->ensure_grad();
            const double g = out->grad[0] / static_cast<double>(x->size());
            for (std::size_t i = 0; i < x->size(); ++i) x->grad[i] += g;
        });
    }
    return out;
}

TensorPtr col_max(Tape* tape, const TensorPtr& x) {
    if (x->rows < 1) throw dim_error("col_max: need at least one row, got " + x->shape_str());
    auto out = out_like(1, x->cols, want_grad(tape, x));
    auto arg = std::make_shared<std::vector<int>>(static_cast<std::size_t>(x->cols), 0);
    for (int c = 0; c < x->cols; ++c) out->values[static_cast<std::size_t>(c)] = x->at(0, c);
    for (int r = 1; r < x->rows; ++r) {
        const double* src = x->values.data() + static_cast<std::size_t>(r) * x->cols;
        for (int c = 0; c < x->cols; ++c) {
            if (src[c] > out->values[static_cast<std::size_t>(c)]) {
                out->values[static_cast<std::size_t>(c)] = src[c];
                (*arg)[static_cast<std::size_t>(c)] = r;
            }
        }
    }
    if (out->requires_grad) {
        tape->record(out, [x, out, arg] {
            x->ensure_grad();
            for (int c = 0; c < x->cols; ++c) {
                x->grad[static_cast<std::size_t>((*arg)[static_cast<std::size_t>(c)]) * x->cols +
                        c] += out->grad[static_cast<std::size_t>(c)];
            }
        });
    }
    return out;
}

TensorPtr broadcast_rows(Tape* tape, const TensorPtr& x, int n) {
    if (x->rows != 1) throw dim_error("broadcast_rows: expected 1xF, got " + x->shape_str());
    if (n < 1) throw dim_error("broadcast_rows: need n >= 1");
    auto out = out_like(n, x->cols, want_grad(tape, x));
    for (int r = 0; r < n; ++r) {
        std::copy_n(x->values.data(), x->cols,
                    out->values.data() + static_cast<std::size_t>(r) * x->cols);
    }
    if (out->requires_grad) {
        tape->record(out, [x, out] {
            x->ensure_grad();
            for (int r = 0; r < out->rows; ++r) {
                const double* g = out->grad.data() + static_cast<std::size_t>(r) * out->cols;
                for (int c = 0; c < out->cols; ++c) x->grad[static_cast<std::size_t>(c)] += g[c];
            }
        });
    }
    return out;
}

}  // namespace forge::ad
