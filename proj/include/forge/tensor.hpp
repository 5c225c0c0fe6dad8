#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace forge::ad {

class Tape;

// Dense row-major 2-D tensor of 64-bit floats, optionally participating in a
// reverse-mode gradient tape. Gradient buffers are allocated lazily the
// first time backward() touches a tensor.
struct Tensor {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;
    bool requires_grad = false;
    std::vector<double> grad;   // empty until accumulated into
    const Tape* tape = nullptr; // tape that recorded this tensor, if any
    int tape_node = -1;         // index of the producing tape entry

    Tensor(int r, int c, bool rg)
        : rows(r), cols(c), values(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0),
          requires_grad(rg) {}

    std::size_t size() const { return values.size(); }

    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }

    // Allocates a zero gradient buffer if absent. Only meaningful for
    // tensors that require grad.
    void ensure_grad() {
        if (grad.empty()) grad.assign(size(), 0.0);
    }

    void zero_grad() {
        if (!grad.empty()) std::fill(grad.begin(), grad.end(), 0.0);
    }

    std::string shape_str() const {
        return std::to_string(rows) + "x" + std::to_string(cols);
    }
};

using TensorPtr = std::shared_ptr<Tensor>;

TensorPtr make_tensor(int rows, int cols, bool requires_grad = false);
TensorPtr make_tensor(int rows, int cols, std::vector<double> values,
                      bool requires_grad = false);
TensorPtr make_scalar(double v, bool requires_grad = false);

// Ordered log of differentiable operations. Entries hold closures that pull
// the output gradient and scatter it additively into the inputs; recording
// order is topological by construction, so reverse iteration is a valid
// reverse-mode sweep.
class Tape {
public:
    // Registers the producing entry for `output` and returns its index.
    int record(const TensorPtr& output, std::function<void()> backward_fn);

    void clear();
    std::size_t size() const { return entries_.size(); }

    friend void backward(const TensorPtr& loss, Tape& tape);

private:
    struct Entry {
        TensorPtr output;
        std::function<void()> backward_fn;
    };
    std::vector<Entry> entries_;
};

// Seeds d(loss)/d(loss) = 1, runs the tape in reverse accumulating gradients
// into every requires_grad tensor, then clears the tape. The loss must be a
// 1x1 tensor recorded on this tape.
void backward(const TensorPtr& loss, Tape& tape);

// Accumulates `delta` into t->grad when t requires grad; no-op otherwise.
void accumulate(const TensorPtr& t, const double* delta);

}  // namespace forge::ad
