#include "ttcast/lstm.hpp"

#include <cmath>

namespace ttcast {

LstmParamIds add_lstm_params(ParamStore& store, const std::string& prefix,
                             std::size_t input_dim, std::size_t hidden_dim) {
  LstmParamIds ids;
  const auto mat_x = [&](const char* n) {
    return store.add_matrix(prefix + "." + n, hidden_dim, input_dim);
  };
  const auto mat_h = [&](const char* n) {
    return store.add_matrix(prefix + "." + n, hidden_dim, hidden_dim);
  };
  const auto vec = [&](const char* n) { return store.add_vector(prefix + "." + n, hidden_dim); };
  ids.W_ix = mat_x("W_ix");
  ids.W_ih = mat_h("W_ih");
  ids.b_ii = vec("b_ii");
  ids.b_hi = vec("b_hi");
  ids.W_fx = mat_x("W_fx");
  ids.W_fh = mat_h("W_fh");
  ids.b_if = vec("b_if");
  ids.b_hf = vec("b_hf");
  ids.W_ox = mat_x("W_ox");
  ids.W_oh = mat_h("W_oh");
  ids.b_io = vec("b_io");
  ids.b_ho = vec("b_ho");
  ids.W_gx = mat_x("W_gx");
  ids.W_gh = mat_h("W_gh");
  ids.b_ig = vec("b_ig");
  ids.b_hg = vec("b_hg");
  return ids;
}

void init_lstm_params(ParamStore& store, const LstmParamIds& ids, Rng& rng) {
  const std::size_t hidden = store.param(ids.b_ii).rows;
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (int w : {ids.W_ix, ids.W_ih, ids.W_fx, ids.W_fh, ids.W_ox, ids.W_oh, ids.W_gx,
                ids.W_gh}) {
    for (double& v : store.param(w).value) v = rng.uniform(-bound, bound);
  }
  for (int b : {ids.b_ii, ids.b_hi, ids.b_hf, ids.b_io, ids.b_ho, ids.b_ig, ids.b_hg}) {
    for (double& v : store.param(b).value) v = 0.0;
  }
  for (double& v : store.param(ids.b_if).value) v = 1.0;
}

LstmStepRefs lstm_step(Tape& tape, const LstmParamIds& p, ValueRef x, ValueRef c_prev,
                       ValueRef h_prev) {
  const auto gate_pre = [&](int Wx, int bx, int Wh, int bh) {
    return tape.add(tape.affine(Wx, x, bx), tape.affine(Wh, h_prev, bh));
  };
  LstmStepRefs out;
  out.i = tape.sigmoid(gate_pre(p.W_ix, p.b_ii, p.W_ih, p.b_hi));
  out.f = tape.sigmoid(gate_pre(p.W_fx, p.b_if, p.W_fh, p.b_hf));
  out.o = tape.sigmoid(gate_pre(p.W_ox, p.b_io, p.W_oh, p.b_ho));
  out.g = tape.tanh_act(gate_pre(p.W_gx, p.b_ig, p.W_gh, p.b_hg));
  out.c = tape.add(tape.hadamard(out.f, c_prev), tape.hadamard(out.i, out.g));
  out.h = tape.hadamard(out.o, tape.tanh_act(out.c));
  return out;
}

std::vector<LstmStepRefs> lstm_unroll(Tape& tape, const LstmParamIds& p,
                                      std::span<const ValueRef> inputs, ValueRef c0,
                                      ValueRef h0) {
  if (inputs.empty()) throw DomainError("lstm_unroll: empty input sequence");
  std::vector<LstmStepRefs> states;
  states.reserve(inputs.size());
  ValueRef c = c0, h = h0;
  for (ValueRef x : inputs) {
    LstmStepRefs s = lstm_step(tape, p, x, c, h);
    c = s.c;
    h = s.h;
    states.push_back(s);
  }
  return states;
}

}  // namespace ttcast
