#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "ttcast/lstm.hpp"
#include "ttcast/pooling.hpp"
#include "ttcast/tape.hpp"

namespace ttcast {

enum class ModelVariant { HierLstmAt, StackedLstm, StackedLstmAt };

std::string_view variant_name(ModelVariant v);
ModelVariant parse_variant(std::string_view name);  // UsageError on unknown names

struct ModelConfig {
  std::size_t corridors = 40;
  std::size_t input_window = 24;   // timesteps fed to the bottom layer (2 h at 5 min)
  std::size_t hidden_dim = 32;
  std::size_t pooling_window = 6;  // K lower states per top-layer step
  std::size_t horizon_steps = 6;   // forecast lead in 5-min steps
  ModelVariant variant = ModelVariant::HierLstmAt;

  void validate() const;
  std::size_t top_steps() const { return input_window / pooling_window; }
  bool uses_attention() const { return variant != ModelVariant::StackedLstm; }
};

struct AttnParamIds {
  int W_q = -1, b_q = -1;
  int W_k = -1, b_k = -1;
  int W_v = -1, b_v = -1;
};

// All trainable weights of one model variant, addressable by name.
struct ModelParams {
  ModelConfig config;
  ParamStore store;
  LstmParamIds bottom{}, top{};
  PoolingParamIds pooling{};  // HierLstmAt only
  AttnParamIds attn{};        // HierLstmAt and StackedLstmAt
  int head_W = -1, head_b = -1;

  static ModelParams create(const ModelConfig& config, std::uint64_t seed);
  static ModelParams create_zeroed(const ModelConfig& config);
};

// Single-head scaled dot-product attention with the last state as query:
//   score_t = q(last) . k(state_t) / sqrt(dim), weights = softmax(score),
//   output  = sum_t weights_t * v(state_t)
ValueRef self_attention(Tape& tape, const AttnParamIds& p, std::span<const ValueRef> states);

// The hierarchical forward pass: bottom LSTM over the full window, attention
// pooling over disjoint consecutive blocks of K states, a top LSTM step per
// block driven by the pooled pair, self-attention over the top states, and an
// affine head mapping the context vector to one prediction per corridor.
ValueRef forward_hier(Tape& tape, const ModelParams& m, const Matrix& window);

// Two stacked LSTM layers, the second consuming the first's hidden sequence
// step for step. StackedLstm feeds the final hidden state to the head;
// StackedLstmAt inserts self-attention over the second layer's states first.
ValueRef forward_baseline(Tape& tape, const ModelParams& m, const Matrix& window);

ValueRef forward_model(Tape& tape, const ModelParams& m, const Matrix& window);

// Convenience wrapper: fresh tape, returns the prediction values.
Vector predict(const ModelParams& m, const Matrix& window);

}  // namespace ttcast
