#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttcast/errors.hpp"
#include "ttcast/tensor.hpp"

namespace ttcast {

// Named trainable tensors. Values live here; gradients live in GradBuffer so
// several workers can differentiate against one shared, read-only store.
class ParamStore {
public:
  struct Param {
    std::string name;
    std::size_t rows = 0, cols = 1;
    bool is_matrix = false;
    std::vector<double> value;

    std::size_t size() const { return rows * cols; }
  };

  int add_matrix(std::string name, std::size_t rows, std::size_t cols);
  int add_vector(std::string name, std::size_t len);

  std::size_t count() const { return params_.size(); }
  Param& param(int id) { return params_[static_cast<std::size_t>(id)]; }
  const Param& param(int id) const { return params_[static_cast<std::size_t>(id)]; }

  // -1 when absent.
  int find(std::string_view name) const;

  std::size_t total_entries() const;

private:
  int add(Param p);

  std::vector<Param> params_;
  std::map<std::string, int, std::less<>> by_name_;
};

// Per-parameter gradient accumulator matching one ParamStore's layout.
class GradBuffer {
public:
  GradBuffer() = default;
  explicit GradBuffer(const ParamStore& store);

  void zero();
  std::span<double> grad(int id) { return g_[static_cast<std::size_t>(id)]; }
  std::span<const double> grad(int id) const { return g_[static_cast<std::size_t>(id)]; }
  void add(const GradBuffer& other);
  std::size_t count() const { return g_.size(); }

private:
  std::vector<std::vector<double>> g_;
};

enum class Op : std::uint8_t {
  Leaf,
  Affine,       // W x + b, W/b from the ParamStore
  Add,
  Sub,
  Sigmoid,
  Tanh,
  Hadamard,
  Softmax,
  Stack,        // scalars -> vector
  WeightedSum,  // sum_t w[t] * item_t
  Dot,
  Scale,        // k * x, k a constant
  MeanSquare,   // (1/n) sum x_i^2
};

struct ValueRef {
  std::int32_t idx = -1;
  bool valid() const { return idx >= 0; }
};

// Reverse-mode tape over vector values. Every primitive is recorded in
// program order; backward() replays the record once, in reverse, adding each
// node's contribution into its inputs (so a value feeding several consumers
// accumulates gradients additively) and into a GradBuffer for parameters.
// One tape per thread; reset() recycles the buffers between samples.
class Tape {
public:
  explicit Tape(const ParamStore& params) : params_(&params) {}

  void reset();
  std::size_t node_count() const { return entries_.size(); }

  ValueRef leaf(std::span<const double> v);
  ValueRef leaf(const Vector& v) { return leaf(v.span()); }
  ValueRef leaf_zeros(std::size_t n);

  // y[i] = sum_k W[i,k] x[k] + b[i], accumulated left to right starting from
  // b[i]; plain loops on purpose so results are reproducible bit for bit.
  ValueRef affine(int W, ValueRef x, int b);
  ValueRef add(ValueRef a, ValueRef b);
  ValueRef sub(ValueRef a, ValueRef b);
  ValueRef sigmoid(ValueRef a);
  ValueRef tanh_act(ValueRef a);
  ValueRef hadamard(ValueRef a, ValueRef b);
  // Max-subtracted softmax; raw exponentials would overflow for large scores.
  ValueRef softmax(ValueRef a);
  ValueRef stack(std::span<const ValueRef> scalars);
  ValueRef weighted_sum(ValueRef weights, std::span<const ValueRef> items);
  ValueRef dot(ValueRef a, ValueRef b);
  ValueRef scale(ValueRef a, double k);
  ValueRef mean_square(ValueRef a);

  // Spans returned by value()/grad() are invalidated by recording further
  // operations; copy out anything that must survive.
  std::span<const double> value(ValueRef r) const;
  std::size_t size(ValueRef r) const;
  // Gradient slice of a node; populated by the latest backward().
  std::span<const double> grad(ValueRef r) const;

  // Reverse pass from a scalar loss node. Parameter gradients are added into
  // `grads` (zero it first unless accumulation over samples is intended).
  void backward(ValueRef loss, GradBuffer& grads, double seed = 1.0);

  const ParamStore& params() const { return *params_; }

private:
  struct Entry {
    Op op = Op::Leaf;
    std::int32_t a = -1, b = -1;        // operand node ids
    std::int32_t pw = -1, pb = -1;      // parameter ids (Affine)
    std::int32_t args_off = 0, args_len = 0;
    double k = 0.0;
    std::int32_t off = 0, len = 0;      // slice of vals_/grads_
  };

  ValueRef push(Op op, std::size_t len);
  Entry& entry(ValueRef r) { return entries_[static_cast<std::size_t>(r.idx)]; }
  const Entry& entry(ValueRef r) const { return entries_[static_cast<std::size_t>(r.idx)]; }
  double* vals(const Entry& e) { return vals_.data() + e.off; }
  const double* vals(const Entry& e) const { return vals_.data() + e.off; }
  double* grads(const Entry& e) { return grads_.data() + e.off; }
  void check_ref(ValueRef r, const char* op_name) const;

  const ParamStore* params_;
  std::vector<Entry> entries_;
  std::vector<double> vals_;
  std::vector<double> grads_;
  std::vector<std::int32_t> args_;
};

// Gradient of a scalar loss for every registered parameter, by name; unused
// parameters come back as zeros.
std::map<std::string, Vector> named_gradients(const ParamStore& store, const GradBuffer& grads);
std::map<std::string, Vector> named_gradients(Tape& tape, ValueRef loss);

}  // namespace ttcast
