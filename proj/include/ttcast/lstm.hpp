#pragma once

#include <span>
#include <string>
#include <vector>

#include "ttcast/rng.hpp"
#include "ttcast/tape.hpp"

namespace ttcast {

// Parameter ids for one LSTM layer. Each gate keeps separate input-side and
// hidden-side biases; the pair is redundant (only the sum matters) but keeps
// a one-to-one mapping onto the update equations for auditing.
struct LstmParamIds {
  int W_ix = -1, W_ih = -1, b_ii = -1, b_hi = -1;  // input gate
  int W_fx = -1, W_fh = -1, b_if = -1, b_hf = -1;  // forget gate
  int W_ox = -1, W_oh = -1, b_io = -1, b_ho = -1;  // output gate
  int W_gx = -1, W_gh = -1, b_ig = -1, b_hg = -1;  // candidate
};

LstmParamIds add_lstm_params(ParamStore& store, const std::string& prefix,
                             std::size_t input_dim, std::size_t hidden_dim);

// Weights uniform in (-1/sqrt(hidden), +1/sqrt(hidden)), biases zero except
// the forget-gate bias at +1 so the cell state is not flushed early in
// training.
void init_lstm_params(ParamStore& store, const LstmParamIds& ids, Rng& rng);

// Plain-value state pair, used at API boundaries and in tests.
struct LayerState {
  Vector c, h;
};

struct LstmStepRefs {
  ValueRef c, h;
  ValueRef i, f, o, g;  // gate activations, exposed for inspection
};

// One cell update:
//   i,f,o = sigmoid(W.x + b + W.h_prev + b), g = tanh(...)
//   c = f (*) c_prev + i (*) g
//   h = o (*) tanh(c)
LstmStepRefs lstm_step(Tape& tape, const LstmParamIds& p, ValueRef x, ValueRef c_prev,
                       ValueRef h_prev);

// Left-to-right scan over the whole sequence; returns all T states. Both the
// cell and hidden sequences are kept because the pooling layer consumes cell
// states, unlike a conventional stack.
std::vector<LstmStepRefs> lstm_unroll(Tape& tape, const LstmParamIds& p,
                                      std::span<const ValueRef> inputs, ValueRef c0,
                                      ValueRef h0);

}  // namespace ttcast
