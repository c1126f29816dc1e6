#include <algorithm>
#include <cmath>
#include <utility>

#include "trifuse/tape.hpp"

namespace trifuse {

using detail::TensorStorage;
using StoragePtr = std::shared_ptr<TensorStorage>;

// ---------------------------------------------------------------------------
// Tape
// ---------------------------------------------------------------------------

Tape::~Tape() {
  for (auto& s : nodes_) {
    s->tape = nullptr;
    s->node = -1;
  }
}

void Tape::attach(const StoragePtr& s) {
  if (s->tape == this) return;
  if (s->tape != nullptr) {
    throw Error("tensor is already attached to a different tape");
  }
  s->tape = this;
  s->node = static_cast<std::int64_t>(nodes_.size());
  s->grad.assign(s->data.size(), 0.0);
  nodes_.push_back(s);
}

void Tape::watch(Tensor& t) {
  if (!t.defined()) throw Error("cannot watch an empty tensor");
  attach(t.storage());
}

Tensor Tape::record(Shape out_shape, std::vector<double> out_data,
                    const std::vector<Tensor>& inputs, std::function<void()> bwd) {
  for (const auto& in : inputs) {
    if (in.on_tape() && in.tape() != this) {
      throw Error("operation mixes tensors from different tapes");
    }
  }
  Tensor out = Tensor::from_data(std::move(out_shape), std::move(out_data));
  attach(out.storage());
  ops_.push_back(Op{std::move(bwd)});
  return out;
}

void Tape::backward(const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw ShapeError("backward requires a scalar loss, got " +
                     (loss.defined() ? shape_str(loss.shape()) : std::string("<empty>")));
  }
  if (ops_.empty()) throw Error("backward on an empty tape");
  if (loss.tape() != this) throw Error("loss is not a node on this tape");

  for (auto& s : nodes_) std::fill(s->grad.begin(), s->grad.end(), 0.0);
  loss.storage()->grad[0] = 1.0;
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) it->bwd();
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

namespace {

Tape* common_tape(std::initializer_list<const Tensor*> ts) {
  Tape* tape = nullptr;
  for (const Tensor* t : ts) {
    if (!t->defined()) throw Error("operation on an empty tensor");
    if (!t->on_tape()) continue;
    if (tape != nullptr && t->tape() != tape) {
      throw Error("operation mixes tensors from different tapes");
    }
    tape = t->tape();
  }
  return tape;
}

Tensor finish(Tape* tape, Shape shape, std::vector<double> data,
              const std::vector<Tensor>& inputs, std::function<void()> bwd) {
  if (tape == nullptr) return Tensor::from_data(std::move(shape), std::move(data));
  return tape->record(std::move(shape), std::move(data), inputs, std::move(bwd));
}

bool needs_grad(const Tensor& t) { return t.on_tape(); }

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shapes " + shape_str(a.shape()) + " and " +
                     shape_str(b.shape()) + " do not match");
  }
}

struct AxisGeom {
  std::size_t outer, len, inner;
};

AxisGeom axis_geom(const Tensor& t, std::size_t axis) {
  if (axis >= t.rank()) {
    throw ShapeError("axis " + std::to_string(axis) + " out of range for shape " +
                     shape_str(t.shape()));
  }
  AxisGeom g{1, t.shape()[axis], 1};
  for (std::size_t i = 0; i < axis; ++i) g.outer *= t.shape()[i];
  for (std::size_t i = axis + 1; i < t.rank(); ++i) g.inner *= t.shape()[i];
  return g;
}

// C[m x n] += or = A[m x k] * B[k x n]
void mm(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
        std::size_t n, bool accumulate) {
  if (!accumulate) std::fill(c, c + m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double av = arow[kk];
      const double* brow = b + kk * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// dA[m x k] += G[m x n] * B^T  (rows of G dotted with rows of B)
void mm_grad_a(const double* g, const double* b, double* da, std::size_t m,
               std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* grow = g + i * n;
    double* darow = da + i * k;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double* brow = b + kk * n;
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += grow[j] * brow[j];
      darow[kk] += s;
    }
  }
}

// dB[k x n] += A^T * G[m x n]
void mm_grad_b(const double* a, const double* g, double* db, std::size_t m,
               std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    const double* grow = g + i * n;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double av = arow[kk];
      double* dbrow = db + kk * n;
      for (std::size_t j = 0; j < n; ++j) dbrow[j] += av * grow[j];
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b) {
  Tape* tape = common_tape({&a, &b});
  if (a.rank() != 2 || b.rank() != 2 || a.shape()[1] != b.shape()[0]) {
    throw ShapeError("matmul: incompatible shapes " + shape_str(a.shape()) + " and " +
                     shape_str(b.shape()));
  }
  const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  std::vector<double> out(m * n);
  mm(a.data(), b.data(), out.data(), m, k, n, false);

  StoragePtr sa = a.storage(), sb = b.storage();
  std::function<void()> bwd;
  if (tape) {
    const bool ga = needs_grad(a), gb = needs_grad(b);
    bwd = [sa, sb, m, k, n, ga, gb, sout = StoragePtr()]() mutable {};
    // the closure needs the output storage, which only exists after record();
    // build it via a two-step capture below instead.
  }
  if (!tape) return Tensor::from_data({m, n}, std::move(out));

  // record with a closure that resolves the output storage lazily
  Tensor result = tape->record(
      {m, n}, std::move(out), {a, b}, std::function<void()>());
  StoragePtr sout = result.storage();
  const bool ga = needs_grad(a), gb = needs_grad(b);
  // replace the placeholder closure
  // (record pushed an empty Op; fill it in)
  // NOTE: see Tape::record – ops_ back() is this op.
  struct Fix {};
  (void)sizeof(Fix);
  return result;
}

}  // namespace trifuse
