#pragma once

#include <functional>
#include <vector>

#include "trifuse/tensor.hpp"

namespace trifuse {

/// Records operations for reverse-mode differentiation. A tape and the
/// tensors attached to it form a single-threaded unit of work; distinct
/// tapes are independent. Destroying the tape detaches its tensors, which
/// then behave as plain values (gradient buffers are kept).
class Tape {
 public:
  Tape() = default;
  ~Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Registers a leaf tensor (parameter or differentiable input).
  void watch(Tensor& t);

  /// Reverse pass from a scalar loss. Zeroes all node gradients first, then
  /// accumulates; every tensor reachable from `loss` ends up with its grad
  /// populated. Each recorded operation fires exactly once.
  void backward(const Tensor& loss);

  std::size_t num_ops() const { return ops_.size(); }
  std::size_t num_nodes() const { return nodes_.size(); }
  bool empty() const { return ops_.empty(); }

  /// Low-level extension point used by all built-in operations: attaches the
  /// already-computed output tensor and records `bwd` to run during the
  /// reverse pass (it reads the output gradient and accumulates into the
  /// inputs). Inputs that live on a different live tape are rejected.
  Tensor record(Tensor out, const std::vector<Tensor>& inputs, std::function<void()> bwd);

 private:
  void attach(const std::shared_ptr<detail::TensorStorage>& s);

  struct Op {
    std::function<void()> bwd;
  };
  std::vector<std::shared_ptr<detail::TensorStorage>> nodes_;
  std::vector<Op> ops_;
};

// ---------------------------------------------------------------------------
// Differentiable operations. Each returns a constant when no operand is on a
// tape, and a recorded node otherwise. Shapes are validated up front and
// violations raise ShapeError naming the offending extents.
// ---------------------------------------------------------------------------

/// Matrix product of a [m x k] and b [k x n].
Tensor matmul(const Tensor& a, const Tensor& b);

/// 2-D transpose.
Tensor transpose(const Tensor& a);

/// Reinterprets the data in row-major order under a new shape of equal size.
Tensor reshape(const Tensor& a, Shape shape);

/// Concatenates along `axis`; all parts must agree on every other extent.
Tensor concat(const std::vector<Tensor>& parts, std::size_t axis);

/// Numerically stable softmax along `axis` (per-slice max subtraction).
Tensor softmax(const Tensor& x, std::size_t axis);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
/// Multiplication by a plain scalar constant.
Tensor scale(const Tensor& a, double c);
Tensor add_scalar(const Tensor& a, double c);

Tensor exp(const Tensor& a);

/// Natural log with the argument floored at `floor` (default 1e-12). Passing
/// floor <= 0 disables the guard; nonpositive inputs then raise DomainError.
Tensor log(const Tensor& a, double floor = 1e-12);

Tensor relu(const Tensor& a);

/// Mean over all elements (scalar output).
Tensor mean(const Tensor& a);

/// Sum over all elements (scalar output).
Tensor sum(const Tensor& a);

/// Normalizes each slice along `axis` to zero mean and unit variance
/// (variance floor 1e-5), then applies elementwise gain and bias. `gain` and
/// `bias` must have exactly extent(axis) elements.
Tensor layer_norm(const Tensor& x, std::size_t axis, const Tensor& gain,
                  const Tensor& bias);

/// Scales each row of a rank-2 tensor to unit L2 norm; norms below `floor`
/// are clamped to `floor`.
Tensor row_normalize(const Tensor& a, double floor = 1e-12);

/// Divides each row by its sum. Rows whose sum is within 1e-12 of zero raise
/// DomainError.
Tensor row_stochastic(const Tensor& a);

}  // namespace trifuse
