#include "ttcast/model.hpp"

#include <cmath>
#include <vector>

namespace ttcast {

std::string_view variant_name(ModelVariant v) {
  switch (v) {
    case ModelVariant::HierLstmAt: return "hierlstmat";
    case ModelVariant::StackedLstm: return "stackedlstm";
    case ModelVariant::StackedLstmAt: return "stackedlstmat";
  }
  return "unknown";
}

ModelVariant parse_variant(std::string_view name) {
  if (name == "hierlstmat") return ModelVariant::HierLstmAt;
  if (name == "stackedlstm") return ModelVariant::StackedLstm;
  if (name == "stackedlstmat") return ModelVariant::StackedLstmAt;
  throw UsageError("unknown model variant '" + std::string(name) +
                   "' (expected hierlstmat, stackedlstm or stackedlstmat)");
}

void ModelConfig::validate() const {
  if (corridors == 0) throw UsageError("config: corridors must be positive");
  if (input_window == 0) throw UsageError("config: input_window must be positive");
  if (hidden_dim == 0) throw UsageError("config: hidden_dim must be positive");
  if (horizon_steps == 0) throw UsageError("config: horizon_steps must be positive");
  if (variant == ModelVariant::HierLstmAt) {
    if (pooling_window == 0 || input_window % pooling_window != 0) {
      throw UsageError("config: input_window (" + std::to_string(input_window) +
                       ") must be divisible by the pooling window (" +
                       std::to_string(pooling_window) + ")");
    }
  }
}

namespace {

int add_head(ParamStore& store, const ModelConfig& c, int* bias_out) {
  const int W = store.add_matrix("head.W", c.corridors, c.hidden_dim);
  *bias_out = store.add_vector("head.b", c.corridors);
  return W;
}

AttnParamIds add_attn_params(ParamStore& store, std::size_t hidden) {
  AttnParamIds ids;
  ids.W_q = store.add_matrix("attn.W_q", hidden, hidden);
  ids.b_q = store.add_vector("attn.b_q", hidden);
  ids.W_k = store.add_matrix("attn.W_k", hidden, hidden);
  ids.b_k = store.add_vector("attn.b_k", hidden);
  ids.W_v = store.add_matrix("attn.W_v", hidden, hidden);
  ids.b_v = store.add_vector("attn.b_v", hidden);
  return ids;
}

void init_uniform(ParamStore& store, int id, double bound, Rng& rng) {
  for (double& v : store.param(id).value) v = rng.uniform(-bound, bound);
}

}  // namespace

ModelParams ModelParams::create_zeroed(const ModelConfig& config) {
  config.validate();
  ModelParams m;
  m.config = config;
  m.bottom = add_lstm_params(m.store, "bottom", config.corridors, config.hidden_dim);
  // The top layer's input is the pooled (or raw) hidden state of the bottom
  // layer, so its input dimension equals the hidden dimension.
  m.top = add_lstm_params(m.store, "top", config.hidden_dim, config.hidden_dim);
  if (config.variant == ModelVariant::HierLstmAt) {
    m.pooling = add_pooling_params(m.store, "pool", config.hidden_dim);
  }
  if (config.uses_attention()) {
    m.attn = add_attn_params(m.store, config.hidden_dim);
  }
  m.head_W = add_head(m.store, config, &m.head_b);
  return m;
}

ModelParams ModelParams::create(const ModelConfig& config, std::uint64_t seed) {
  ModelParams m = create_zeroed(config);
  Rng rng = Rng::substream(seed, 0x70617261u);  // parameter-init stream
  init_lstm_params(m.store, m.bottom, rng);
  init_lstm_params(m.store, m.top, rng);
  const double bound = 1.0 / std::sqrt(static_cast<double>(config.hidden_dim));
  if (config.variant == ModelVariant::HierLstmAt) {
    init_pooling_params(m.store, m.pooling, rng);
  }
  if (config.uses_attention()) {
    for (int w : {m.attn.W_q, m.attn.W_k, m.attn.W_v}) init_uniform(m.store, w, bound, rng);
  }
  init_uniform(m.store, m.head_W, bound, rng);
  return m;
}

ValueRef self_attention(Tape& tape, const AttnParamIds& p, std::span<const ValueRef> states) {
  if (states.empty()) throw DomainError("self_attention: empty state sequence");
  const std::size_t dim = tape.size(states.back());
  const double inv_sqrt_dim = 1.0 / std::sqrt(static_cast<double>(dim));
  const ValueRef query = tape.affine(p.W_q, states.back(), p.b_q);
  std::vector<ValueRef> scores;
  scores.reserve(states.size());
  std::vector<ValueRef> values;
  values.reserve(states.size());
  for (ValueRef s : states) {
    const ValueRef key = tape.affine(p.W_k, s, p.b_k);
    scores.push_back(tape.scale(tape.dot(query, key), inv_sqrt_dim));
    values.push_back(tape.affine(p.W_v, s, p.b_v));
  }
  const ValueRef weights = tape.softmax(tape.stack(scores));
  return tape.weighted_sum(weights, values);
}

namespace {

void check_window(const ModelConfig& c, const Matrix& window) {
  if (window.rows != c.input_window || window.cols != c.corridors) {
    throw ShapeError("window is " + std::to_string(window.rows) + "x" +
                     std::to_string(window.cols) + ", model expects " +
                     std::to_string(c.input_window) + "x" + std::to_string(c.corridors));
  }
}

std::vector<ValueRef> window_inputs(Tape& tape, const Matrix& window) {
  std::vector<ValueRef> inputs;
  inputs.reserve(window.rows);
  for (std::size_t t = 0; t < window.rows; ++t) inputs.push_back(tape.leaf(window.row(t)));
  return inputs;
}

}  // namespace

ValueRef forward_hier(Tape& tape, const ModelParams& m, const Matrix& window) {
  const ModelConfig& c = m.config;
  check_window(c, window);
  const std::vector<ValueRef> inputs = window_inputs(tape, window);
  const ValueRef zeros = tape.leaf_zeros(c.hidden_dim);
  const std::vector<LstmStepRefs> bottom = lstm_unroll(tape, m.bottom, inputs, zeros, zeros);

  const std::size_t K = c.pooling_window;
  const std::size_t blocks = c.top_steps();
  ValueRef top_c = zeros;
  ValueRef top_h = zeros;
  std::vector<ValueRef> top_states;
  top_states.reserve(blocks);
  for (std::size_t n = 0; n < blocks; ++n) {
    std::vector<StateRefs> block(K);
    for (std::size_t t = 0; t < K; ++t) {
      block[t] = StateRefs{bottom[n * K + t].c, bottom[n * K + t].h};
    }
    const PooledRefs pooled = pool(tape, m.pooling, block, top_c);
    // Top-layer update driven by the pooled pair: the pooled hidden state is
    // the step input, and the pooled cell state stands in for c_{n-1}.
    const auto gate_pre = [&](int Wx, int bx, int Wh, int bh) {
      return tape.add(tape.affine(Wx, pooled.phs, bx), tape.affine(Wh, top_h, bh));
    };
    const ValueRef i = tape.sigmoid(gate_pre(m.top.W_ix, m.top.b_ii, m.top.W_ih, m.top.b_hi));
    const ValueRef f = tape.sigmoid(gate_pre(m.top.W_fx, m.top.b_if, m.top.W_fh, m.top.b_hf));
    const ValueRef o = tape.sigmoid(gate_pre(m.top.W_ox, m.top.b_io, m.top.W_oh, m.top.b_ho));
    const ValueRef g = tape.tanh_act(gate_pre(m.top.W_gx, m.top.b_ig, m.top.W_gh, m.top.b_hg));
    top_c = tape.add(tape.hadamard(f, pooled.pcs), tape.hadamard(i, g));
    top_h = tape.hadamard(o, tape.tanh_act(top_c));
    top_states.push_back(top_h);
  }

  const ValueRef context = self_attention(tape, m.attn, top_states);
  return tape.affine(m.head_W, context, m.head_b);
}

ValueRef forward_baseline(Tape& tape, const ModelParams& m, const Matrix& window) {
  const ModelConfig& c = m.config;
  check_window(c, window);
  const std::vector<ValueRef> inputs = window_inputs(tape, window);
  const ValueRef zeros = tape.leaf_zeros(c.hidden_dim);
  const std::vector<LstmStepRefs> lower = lstm_unroll(tape, m.bottom, inputs, zeros, zeros);
  std::vector<ValueRef> lower_h;
  lower_h.reserve(lower.size());
  for (const LstmStepRefs& s : lower) lower_h.push_back(s.h);
  const std::vector<LstmStepRefs> upper = lstm_unroll(tape, m.top, lower_h, zeros, zeros);

  if (c.variant == ModelVariant::StackedLstmAt) {
    std::vector<ValueRef> upper_h;
    upper_h.reserve(upper.size());
    for (const LstmStepRefs& s : upper) upper_h.push_back(s.h);
    const ValueRef context = self_attention(tape, m.attn, upper_h);
    return tape.affine(m.head_W, context, m.head_b);
  }
  return tape.affine(m.head_W, upper.back().h, m.head_b);
}

ValueRef forward_model(Tape& tape, const ModelParams& m, const Matrix& window) {
  if (m.config.variant == ModelVariant::HierLstmAt) return forward_hier(tape, m, window);
  return forward_baseline(tape, m, window);
}

Vector predict(const ModelParams& m, const Matrix& window) {
  Tape tape(m.store);
  const ValueRef out = forward_model(tape, m, window);
  return Vector(tape.value(out));
}

}  // namespace ttcast
