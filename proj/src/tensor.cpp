#include "forge/tensor.hpp"

#include "forge/error.hpp"

namespace forge::ad {

TensorPtr make_tensor(int rows, int cols, bool requires_grad) {
    if (rows < 0 || cols < 0) throw dim_error("tensor dimensions must be nonnegative");
    return std::make_shared<Tensor>(rows, cols, requires_grad);
}

TensorPtr make_tensor(int rows, int cols, std::vector<double> values, bool requires_grad) {
    auto t = make_tensor(rows, cols, requires_grad);
    if (values.size() != t->size()) {
        throw dim_error("value count " + std::to_string(values.size()) +
                        " does not match shape " + t->shape_str());
    }
    t->values = std::move(values);
    return t;
}

TensorPtr make_scalar(double v, bool requires_grad) {
    auto t = make_tensor(1, 1, requires_grad);
    t->values[0] = v;
    return t;
}

int Tape::record(const TensorPtr& output, std::function<void()> backward_fn) {
    output->tape = this;
    output->tape_node = static_cast<int>(entries_.size());
    entries_.push_back({output, std::move(backward_fn)});
    return output->tape_node;
}

void Tape::clear() { entries_.clear(); }

void backward(const TensorPtr& loss, Tape& tape) {
    if (loss->rows != 1 || loss->cols != 1) {
        throw dim_error("backward requires a 1x1 loss tensor, got " + loss->shape_str());
    }
    if (loss->tape != &tape || loss->tape_node < 0 ||
        loss->tape_node >= static_cast<int>(tape.entries_.size()) ||
        tape.entries_[static_cast<std::size_t>(loss->tape_node)].output.get() != loss.get()) {
        throw validation_error("loss tensor was not produced by this tape");
    }
    loss->ensure_grad();
    loss->grad[0] = 1.0;
    for (std::size_t i = tape.entries_.size(); i-- > 0;) {
        auto& entry = tape.entries_[i];
        // Ops whose output never reached the loss have no gradient to push.
        if (!entry.output->grad.empty()) entry.backward_fn();
    }
    tape.clear();
}

void accumulate(const TensorPtr& t, const double* delta) {
    if (!t->requires_grad) return;
    t->ensure_grad();
    double* g = t->grad.data();
    const std::size_t n = t->size();
    for (std::size_t i = 0; i < n; ++i) g[i] += delta[i];
}

}  // namespace forge::ad
