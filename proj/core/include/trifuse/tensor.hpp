#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "trifuse/errors.hpp"

namespace trifuse {

class Tape;

using Shape = std::vector<std::size_t>;

std::string shape_str(const Shape& s);
std::size_t shape_numel(const Shape& s);

namespace detail {

/// Shared storage behind a Tensor handle. `tape`/`node` are set while the
/// tensor participates in a recorded graph and cleared when the tape dies.
struct TensorStorage {
  Shape shape;
  std::vector<double> data;
  std::vector<double> grad;  // sized like data once attached to a tape
  Tape* tape = nullptr;
  std::int64_t node = -1;

  void accumulate_grad(const double* g, std::size_t n);
};

}  // namespace detail

/// Dense row-major tensor of 64-bit floats. Copying a Tensor copies the
/// handle, not the data; use clone() for a deep copy. A tensor is either a
/// plain constant value or a node on exactly one live Tape.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape);
  static Tensor full(Shape shape, double value);
  static Tensor from_data(Shape shape, std::vector<double> data);
  static Tensor scalar(double value);
  /// 1 x n row vector.
  static Tensor row(std::vector<double> data);

  bool defined() const { return s_ != nullptr; }
  const Shape& shape() const { return s_->shape; }
  std::size_t rank() const { return s_->shape.size(); }
  std::size_t size() const { return s_->data.size(); }
  std::size_t extent(std::size_t axis) const;
  /// Rows/cols of a rank-2 tensor (throws otherwise).
  std::size_t rows() const;
  std::size_t cols() const;

  double* data() { return s_->data.data(); }
  const double* data() const { return s_->data.data(); }
  std::vector<double>& values() { return s_->data; }
  const std::vector<double>& values() const { return s_->data; }

  double operator()(std::size_t i) const { return s_->data[i]; }
  double operator()(std::size_t i, std::size_t j) const;
  double& at(std::size_t i);
  double& at(std::size_t i, std::size_t j);

  /// Value of a single-element tensor.
  double value() const;

  /// Deep copy, detached from any tape.
  Tensor clone() const;

  Tape* tape() const { return s_->tape; }
  bool on_tape() const { return s_ && s_->tape != nullptr; }
  /// Gradient buffer; empty unless the tensor was part of a backward pass.
  const std::vector<double>& grad() const { return s_->grad; }
  bool has_grad() const { return s_ && !s_->grad.empty(); }

  std::shared_ptr<detail::TensorStorage> storage() const { return s_; }

 private:
  explicit Tensor(std::shared_ptr<detail::TensorStorage> s) : s_(std::move(s)) {}
  std::shared_ptr<detail::TensorStorage> s_;

  friend class Tape;
};

}  // namespace trifuse
