#include "trifuse/tensor.hpp"

#include <sstream>

namespace trifuse {

std::string shape_str(const Shape& s) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out << "x";
    out << s[i];
  }
  out << "]";
  return out.str();
}

std::size_t shape_numel(const Shape& s) {
  std::size_t n = 1;
  for (std::size_t e : s) n *= e;
  return n;
}

namespace detail {

void TensorStorage::accumulate_grad(const double* g, std::size_t n) {
  if (grad.empty()) return;  // constant input: no gradient tracked
  for (std::size_t i = 0; i < n; ++i) grad[i] += g[i];
}

}  // namespace detail

static void check_shape(const Shape& shape) {
  if (shape.empty()) throw ShapeError("tensor shape must have at least one axis");
  for (std::size_t e : shape) {
    if (e == 0) throw ShapeError("tensor extents must be >= 1, got " + shape_str(shape));
  }
}

Tensor Tensor::zeros(Shape shape) { return full(std::move(shape), 0.0); }

Tensor Tensor::full(Shape shape, double value) {
  check_shape(shape);
  auto s = std::make_shared<detail::TensorStorage>();
  s->data.assign(shape_numel(shape), value);
  s->shape = std::move(shape);
  return Tensor(std::move(s));
}

Tensor Tensor::from_data(Shape shape, std::vector<double> data) {
  check_shape(shape);
  if (shape_numel(shape) != data.size()) {
    throw ShapeError("data length " + std::to_string(data.size()) +
                     " does not match shape " + shape_str(shape));
  }
  auto s = std::make_shared<detail::TensorStorage>();
  s->shape = std::move(shape);
  s->data = std::move(data);
  return Tensor(std::move(s));
}

Tensor Tensor::scalar(double value) { return from_data({1}, {value}); }

Tensor Tensor::row(std::vector<double> data) {
  const std::size_t n = data.size();
  return from_data({1, n}, std::move(data));
}

std::size_t Tensor::extent(std::size_t axis) const {
  if (axis >= rank()) {
    throw ShapeError("axis " + std::to_string(axis) + " out of range for shape " +
                     shape_str(shape()));
  }
  return s_->shape[axis];
}

std::size_t Tensor::rows() const {
  if (rank() != 2) throw ShapeError("expected a rank-2 tensor, got " + shape_str(shape()));
  return s_->shape[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw ShapeError("expected a rank-2 tensor, got " + shape_str(shape()));
  return s_->shape[1];
}

double Tensor::operator()(std::size_t i, std::size_t j) const {
  return s_->data[i * cols() + j];
}

double& Tensor::at(std::size_t i) { return s_->data[i]; }

double& Tensor::at(std::size_t i, std::size_t j) { return s_->data[i * cols() + j]; }

double Tensor::value() const {
  if (!s_ || s_->data.size() != 1) {
    throw ShapeError("value() requires a single-element tensor, got " +
                     (s_ ? shape_str(shape()) : std::string("<empty>")));
  }
  return s_->data[0];
}

Tensor Tensor::clone() const {
  return from_data(s_->shape, s_->data);
}

}  // namespace trifuse
