#include "ttcast/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ttcast {
namespace {

// Largest double below 1; sigmoid/tanh outputs are clamped into their open
// ranges so saturation never rounds onto the boundary.
constexpr double kBelowOne = 0x1.fffffffffffffp-1;
constexpr double kTinyPos = std::numeric_limits<double>::min();

double stable_sigmoid(double x) {
  double r;
  if (x >= 0.0) {
    r = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    r = e / (1.0 + e);
  }
  if (r >= 1.0) r = kBelowOne;
  if (r <= 0.0) r = kTinyPos;
  return r;
}

double open_tanh(double x) {
  double r = std::tanh(x);
  if (r >= 1.0) r = kBelowOne;
  if (r <= -1.0) r = -kBelowOne;
  return r;
}

std::string shape_str(const ParamStore::Param& p) {
  if (p.is_matrix) {
    return std::to_string(p.rows) + "x" + std::to_string(p.cols);
  }
  return "len " + std::to_string(p.rows);
}

}  // namespace

int ParamStore::add(Param p) {
  if (by_name_.contains(p.name)) {
    throw UsageError("parameter '" + p.name + "' registered twice");
  }
  const int id = static_cast<int>(params_.size());
  by_name_.emplace(p.name, id);
  params_.push_back(std::move(p));
  return id;
}

int ParamStore::add_matrix(std::string name, std::size_t rows, std::size_t cols) {
  Param p;
  p.name = std::move(name);
  p.rows = rows;
  p.cols = cols;
  p.is_matrix = true;
  p.value.assign(rows * cols, 0.0);
  return add(std::move(p));
}

int ParamStore::add_vector(std::string name, std::size_t len) {
  Param p;
  p.name = std::move(name);
  p.rows = len;
  p.cols = 1;
  p.is_matrix = false;
  p.value.assign(len, 0.0);
  return add(std::move(p));
}

int ParamStore::find(std::string_view name) const {
  const auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

std::size_t ParamStore::total_entries() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.size();
  return n;
}

GradBuffer::GradBuffer(const ParamStore& store) {
  g_.resize(store.count());
  for (std::size_t i = 0; i < g_.size(); ++i) {
    g_[i].assign(store.param(static_cast<int>(i)).size(), 0.0);
  }
}

void GradBuffer::zero() {
  for (auto& g : g_) std::fill(g.begin(), g.end(), 0.0);
}

void GradBuffer::add(const GradBuffer& other) {
  for (std::size_t i = 0; i < g_.size(); ++i) {
    const auto& src = other.g_[i];
    auto& dst = g_[i];
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
}

void Tape::reset() {
  entries_.clear();
  vals_.clear();
  grads_.clear();
  args_.clear();
}

ValueRef Tape::push(Op op, std::size_t len) {
  Entry e;
  e.op = op;
  e.off = static_cast<std::int32_t>(vals_.size());
  e.len = static_cast<std::int32_t>(len);
  vals_.resize(vals_.size() + len, 0.0);
  entries_.push_back(e);
  return ValueRef{static_cast<std::int32_t>(entries_.size()) - 1};
}

void Tape::check_ref(ValueRef r, const char* op_name) const {
  if (!r.valid() || static_cast<std::size_t>(r.idx) >= entries_.size()) {
    throw UsageError(std::string(op_name) + ": operand is not a value on this tape");
  }
}

ValueRef Tape::leaf(std::span<const double> v) {
  if (!all_finite(v)) throw DomainError("leaf: non-finite input value");
  ValueRef r = push(Op::Leaf, v.size());
  std::copy(v.begin(), v.end(), vals(entry(r)));
  return r;
}

ValueRef Tape::leaf_zeros(std::size_t n) { return push(Op::Leaf, n); }

ValueRef Tape::affine(int W, ValueRef x, int b) {
  check_ref(x, "affine");
  const auto& pw = params_->param(W);
  const auto& pb = params_->param(b);
  const std::size_t n = size(x);
  if (!pw.is_matrix || pw.cols != n || pb.rows != pw.rows || pb.is_matrix) {
    throw ShapeError("affine: W '" + pw.name + "' (" + shape_str(pw) + ") with b '" +
                     pb.name + "' (" + shape_str(pb) + ") incompatible with x (len " +
                     std::to_string(n) + ")");
  }
  ValueRef r = push(Op::Affine, pw.rows);
  Entry& e = entry(r);
  e.a = x.idx;
  e.pw = W;
  e.pb = b;
  const double* xv = vals(entry(x));
  double* y = vals(e);
  for (std::size_t i = 0; i < pw.rows; ++i) {
    double acc = pb.value[i];
    const double* wrow = pw.value.data() + i * pw.cols;
    for (std::size_t k = 0; k < n; ++k) acc += wrow[k] * xv[k];
    y[i] = acc;
  }
  return r;
}

ValueRef Tape::add(ValueRef a, ValueRef b) {
  check_ref(a, "add");
  check_ref(b, "add");
  if (size(a) != size(b)) {
    throw ShapeError("add: length " + std::to_string(size(a)) + " vs " +
                     std::to_string(size(b)));
  }
  ValueRef r = push(Op::Add, size(a));
  Entry& e = entry(r);
  e.a = a.idx;
  e.b = b.idx;
  const double* av = vals(entry(a));
  const double* bv = vals(entry(b));
  double* y = vals(e);
  for (std::size_t i = 0; i < static_cast<std::size_t>(e.len); ++i) y[i] = av[i] + bv[i];
  return r;
}

ValueRef Tape::sub(ValueRef a, ValueRef b) {
  check_ref(a, "sub");
  check_ref(b, "sub");
  if (size(a) != size(b)) {
    throw ShapeError("sub: length " + std::to_string(size(a)) + " vs " +
                     std::to_string(size(b)));
  }
  ValueRef r = push(Op::Sub, size(a));
  Entry& e = entry(r);
  e.a = a.idx;
  e.b = b.idx;
  const double* av = vals(entry(a));
  const double* bv = vals(entry(b));
  double* y = vals(e);
  for (std::size_t i = 0; i < static_cast<std::size_t>(e.len); ++i) y[i] = av[i] - bv[i];
  return r;
}

ValueRef Tape::sigmoid(ValueRef a) {
  check_ref(a, "sigmoid");
  ValueRef r = push(Op::Sigmoid, size(a));
  Entry& e = entry(r);
  e.a = a.idx;
  const double* av = vals(entry(a));
  double* y = vals(e);
  for (std::size_t i = 0; i < static_cast<std::size_t>(e.len); ++i) y[i] = stable_sigmoid(av[i]);
  return r;
}

ValueRef Tape::tanh_act(ValueRef a) {
  check_ref(a, "tanh");
  ValueRef r = push(Op::Tanh, size(a));
  Entry& e = entry(r);
  e.a = a.idx;
  const double* av = vals(entry(a));
  double* y = vals(e);
  for (std::size_t i = 0; i < static_cast<std::size_t>(e.len); ++i) y[i] = open_tanh(av[i]);
  return r;
}

ValueRef Tape::hadamard(ValueRef a, ValueRef b) {
  check_ref(a, "hadamard");
  check_ref(b, "hadamard");
  if (size(a) != size(b)) {
    throw ShapeError("hadamard: length " + std::to_string(size(a)) + " vs " +
                     std::to_string(size(b)));
  }
  ValueRef r = push(Op::Hadamard, size(a));
  Entry& e = entry(r);
  e.a = a.idx;
  e.b = b.idx;
  const double* av = vals(entry(a));
  const double* bv = vals(entry(b));
  double* y = vals(e);
  for (std::size_t i = 0; i < static_cast<std::size_t>(e.len); ++i) y[i] = av[i] * bv[i];
  return r;
}

ValueRef Tape::softmax(ValueRef a) {
  check_ref(a, "softmax");
  const std::size_t n = size(a);
  if (n == 0) throw DomainError("softmax: empty input");
  ValueRef r = push(Op::Softmax, n);
  Entry& e = entry(r);
  e.a = a.idx;
  const double* av = vals(entry(a));
  double* y = vals(e);
  double mx = av[0];
  for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, av[i]);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = std::exp(av[i] - mx);
    sum += y[i];
  }
  for (std::size_t i = 0; i < n; ++i) y[i] /= sum;
  return r;
}

ValueRef Tape::stack(std::span<const ValueRef> scalars) {
  if (scalars.empty()) throw DomainError("stack: no inputs");
  for (ValueRef s : scalars) {
    check_ref(s, "stack");
    if (size(s) != 1) throw ShapeError("stack: inputs must be scalars");
  }
  ValueRef r = push(Op::Stack, scalars.size());
  Entry& e = entry(r);
  e.args_off = static_cast<std::int32_t>(args_.size());
  e.args_len = static_cast<std::int32_t>(scalars.size());
  double* y = vals(e);
  for (std::size_t t = 0; t < scalars.size(); ++t) {
    args_.push_back(scalars[t].idx);
    y[t] = vals(entry(scalars[t]))[0];
  }
  return r;
}

ValueRef Tape::weighted_sum(ValueRef weights, std::span<const ValueRef> items) {
  check_ref(weights, "weighted_sum");
  if (items.empty()) throw DomainError("weighted_sum: no items");
  if (size(weights) != items.size()) {
    throw ShapeError("weighted_sum: " + std::to_string(size(weights)) + " weights for " +
                     std::to_string(items.size()) + " items");
  }
  const std::size_t d = size(items[0]);
  for (ValueRef it : items) {
    check_ref(it, "weighted_sum");
    if (size(it) != d) throw ShapeError("weighted_sum: item lengths differ");
  }
  ValueRef r = push(Op::WeightedSum, d);
  Entry& e = entry(r);
  e.a = weights.idx;
  e.args_off = static_cast<std::int32_t>(args_.size());
  e.args_len = static_cast<std::int32_t>(items.size());
  for (ValueRef it : items) args_.push_back(it.idx);
  const double* w = vals(entry(weights));
  double* y = vals(e);
  for (std::size_t t = 0; t < items.size(); ++t) {
    const double* iv = vals(entry(items[t]));
    const double wt = w[t];
    for (std::size_t i = 0; i < d; ++i) y[i] += wt * iv[i];
  }
  return r;
}

ValueRef Tape::dot(ValueRef a, ValueRef b) {
  check_ref(a, "dot");
  check_ref(b, "dot");
  if (size(a) != size(b)) {
    throw ShapeError("dot: length " + std::to_string(size(a)) + " vs " +
                     std::to_string(size(b)));
  }
  ValueRef r = push(Op::Dot, 1);
  Entry& e = entry(r);
  e.a = a.idx;
  e.b = b.idx;
  const double* av = vals(entry(a));
  const double* bv = vals(entry(b));
  double acc = 0.0;
  for (std::size_t i = 0; i < size(a); ++i) acc += av[i] * bv[i];
  vals(e)[0] = acc;
  return r;
}

ValueRef Tape::scale(ValueRef a, double k) {
  check_ref(a, "scale");
  ValueRef r = push(Op::Scale, size(a));
  Entry& e = entry(r);
  e.a = a.idx;
  e.k = k;
  const double* av = vals(entry(a));
  double* y = vals(e);
  for (std::size_t i = 0; i < static_cast<std::size_t>(e.len); ++i) y[i] = k * av[i];
  return r;
}

ValueRef Tape::mean_square(ValueRef a) {
  check_ref(a, "mean_square");
  const std::size_t n = size(a);
  if (n == 0) throw DomainError("mean_square: empty input");
  ValueRef r = push(Op::MeanSquare, 1);
  Entry& e = entry(r);
  e.a = a.idx;
  const double* av = vals(entry(a));
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += av[i] * av[i];
  vals(e)[0] = acc / static_cast<double>(n);
  return r;
}

std::span<const double> Tape::value(ValueRef r) const {
  check_ref(r, "value");
  const Entry& e = entry(r);
  return std::span<const double>(vals_.data() + e.off, static_cast<std::size_t>(e.len));
}

std::size_t Tape::size(ValueRef r) const {
  check_ref(r, "size");
  return static_cast<std::size_t>(entry(r).len);
}

std::span<const double> Tape::grad(ValueRef r) const {
  check_ref(r, "grad");
  const Entry& e = entry(r);
  return std::span<const double>(grads_.data() + e.off, static_cast<std::size_t>(e.len));
}

void Tape::backward(ValueRef loss, GradBuffer& out, double seed) {
  check_ref(loss, "backward");
  if (size(loss) != 1) {
    throw UsageError("backward: loss must be a scalar, got length " +
                     std::to_string(size(loss)));
  }
  grads_.assign(vals_.size(), 0.0);
  grads_[entry(loss).off] = seed;

  for (std::int32_t idx = loss.idx; idx >= 0; --idx) {
    const Entry& e = entries_[static_cast<std::size_t>(idx)];
    const double* g = grads_.data() + e.off;
    const std::size_t n = static_cast<std::size_t>(e.len);
    switch (e.op) {
      case Op::Leaf:
        break;
      case Op::Affine: {
        const Entry& xe = entries_[static_cast<std::size_t>(e.a)];
        const auto& pw = params_->param(e.pw);
        const double* xv = vals_.data() + xe.off;
        double* gx = grads_.data() + xe.off;
        std::span<double> gw = out.grad(e.pw);
        std::span<double> gb = out.grad(e.pb);
        for (std::size_t i = 0; i < n; ++i) {
          const double gi = g[i];
          if (gi == 0.0) continue;
          gb[i] += gi;
          const double* wrow = pw.value.data() + i * pw.cols;
          double* gwrow = gw.data() + i * pw.cols;
          for (std::size_t k = 0; k < pw.cols; ++k) {
            gwrow[k] += gi * xv[k];
            gx[k] += gi * wrow[k];
          }
        }
        break;
      }
      case Op::Add: {
        double* ga = grads_.data() + entries_[static_cast<std::size_t>(e.a)].off;
        double* gb = grads_.data() + entries_[static_cast<std::size_t>(e.b)].off;
        for (std::size_t i = 0; i < n; ++i) {
          ga[i] += g[i];
          gb[i] += g[i];
        }
        break;
      }
      case Op::Sub: {
        double* ga = grads_.data() + entries_[static_cast<std::size_t>(e.a)].off;
        double* gb = grads_.data() + entries_[static_cast<std::size_t>(e.b)].off;
        for (std::size_t i = 0; i < n; ++i) {
          ga[i] += g[i];
          gb[i] -= g[i];
        }
        break;
      }
      case Op::Sigmoid: {
        double* ga = grads_.data() + entries_[static_cast<std::size_t>(e.a)].off;
        const double* y = vals_.data() + e.off;
        for (std::size_t i = 0; i < n; ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
        break;
      }
      case Op::Tanh: {
        double* ga = grads_.data() + entries_[static_cast<std::size_t>(e.a)].off;
        const double* y = vals_.data() + e.off;
        for (std::size_t i = 0; i < n; ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
        break;
      }
      case Op::Hadamard: {
        const Entry& ae = entries_[static_cast<std::size_t>(e.a)];
        const Entry& be = entries_[static_cast<std::size_t>(e.b)];
        double* ga = grads_.data() + ae.off;
        double* gb = grads_.data() + be.off;
        const double* av = vals_.data() + ae.off;
        const double* bv = vals_.data() + be.off;
        for (std::size_t i = 0; i < n; ++i) {
          ga[i] += g[i] * bv[i];
          gb[i] += g[i] * av[i];
        }
        break;
      }
      case Op::Softmax: {
        double* ga = grads_.data() + entries_[static_cast<std::size_t>(e.a)].off;
        const double* y = vals_.data() + e.off;
        double gy = 0.0;
        for (std::size_t i = 0; i < n; ++i) gy += g[i] * y[i];
        for (std::size_t i = 0; i < n; ++i) ga[i] += y[i] * (g[i] - gy);
        break;
      }
      case Op::Stack: {
        for (std::size_t t = 0; t < n; ++t) {
          const Entry& se =
              entries_[static_cast<std::size_t>(args_[static_cast<std::size_t>(e.args_off) + t])];
          grads_[static_cast<std::size_t>(se.off)] += g[t];
        }
        break;
      }
      case Op::WeightedSum: {
        const Entry& we = entries_[static_cast<std::size_t>(e.a)];
        const double* w = vals_.data() + we.off;
        double* gw = grads_.data() + we.off;
        for (std::size_t t = 0; t < static_cast<std::size_t>(e.args_len); ++t) {
          const Entry& ie =
              entries_[static_cast<std::size_t>(args_[static_cast<std::size_t>(e.args_off) + t])];
          const double* iv = vals_.data() + ie.off;
          double* gi = grads_.data() + ie.off;
          double acc = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            acc += g[i] * iv[i];
            gi[i] += w[t] * g[i];
          }
          gw[t] += acc;
        }
        break;
      }
      case Op::Dot: {
        const Entry& ae = entries_[static_cast<std::size_t>(e.a)];
        const Entry& be = entries_[static_cast<std::size_t>(e.b)];
        double* ga = grads_.data() + ae.off;
        double* gb = grads_.data() + be.off;
        const double* av = vals_.data() + ae.off;
        const double* bv = vals_.data() + be.off;
        const double g0 = g[0];
        for (std::size_t i = 0; i < static_cast<std::size_t>(ae.len); ++i) {
          ga[i] += g0 * bv[i];
          gb[i] += g0 * av[i];
        }
        break;
      }
      case Op::Scale: {
        double* ga = grads_.data() + entries_[static_cast<std::size_t>(e.a)].off;
        for (std::size_t i = 0; i < n; ++i) ga[i] += e.k * g[i];
        break;
      }
      case Op::MeanSquare: {
        const Entry& ae = entries_[static_cast<std::size_t>(e.a)];
        double* ga = grads_.data() + ae.off;
        const double* av = vals_.data() + ae.off;
        const double m = static_cast<double>(ae.len);
        const double g0 = g[0];
        for (std::size_t i = 0; i < static_cast<std::size_t>(ae.len); ++i) {
          ga[i] += g0 * 2.0 * av[i] / m;
        }
        break;
      }
    }
  }
}

std::map<std::string, Vector> named_gradients(const ParamStore& store, const GradBuffer& grads) {
  std::map<std::string, Vector> out;
  for (std::size_t i = 0; i < store.count(); ++i) {
    const auto& p = store.param(static_cast<int>(i));
    out.emplace(p.name, Vector(grads.grad(static_cast<int>(i))));
  }
  return out;
}

std::map<std::string, Vector> named_gradients(Tape& tape, ValueRef loss) {
  GradBuffer grads(tape.params());
  tape.backward(loss, grads);
  return named_gradients(tape.params(), grads);
}

}  // namespace ttcast
