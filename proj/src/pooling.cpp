#include "ttcast/pooling.hpp"

#include <cmath>
#include <vector>

namespace ttcast {

PoolingParamIds add_pooling_params(ParamStore& store, const std::string& prefix,
                                   std::size_t state_dim) {
  PoolingParamIds ids;
  ids.cs_W = store.add_matrix(prefix + ".cs.W", 1, state_dim);
  ids.cs_b = store.add_vector(prefix + ".cs.b", 1);
  ids.hs_W = store.add_matrix(prefix + ".hs.W", 1, state_dim);
  ids.hs_b = store.add_vector(prefix + ".hs.b", 1);
  return ids;
}

void init_pooling_params(ParamStore& store, const PoolingParamIds& ids, Rng& rng) {
  const std::size_t dim = store.param(ids.cs_W).cols;
  const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int w : {ids.cs_W, ids.hs_W}) {
    for (double& v : store.param(w).value) v = rng.uniform(-bound, bound);
  }
  store.param(ids.cs_b).value[0] = 0.0;
  store.param(ids.hs_b).value[0] = 0.0;
}

PoolScores score_states(Tape& tape, const PoolingParamIds& p,
                        std::span<const StateRefs> lower, ValueRef top_prev_cs) {
  if (lower.empty()) throw DomainError("score_states: pooling window is empty (K = 0)");
  std::vector<ValueRef> ucs;
  ucs.reserve(lower.size() + 1);
  ucs.push_back(tape.affine(p.cs_W, top_prev_cs, p.cs_b));
  for (const StateRefs& s : lower) ucs.push_back(tape.affine(p.cs_W, s.c, p.cs_b));
  std::vector<ValueRef> uhs;
  uhs.reserve(lower.size());
  for (const StateRefs& s : lower) uhs.push_back(tape.affine(p.hs_W, s.h, p.hs_b));
  return PoolScores{tape.stack(ucs), tape.stack(uhs)};
}

PooledRefs pool(Tape& tape, const PoolingParamIds& p, std::span<const StateRefs> lower,
                ValueRef top_prev_cs) {
  const PoolScores scores = score_states(tape, p, lower, top_prev_cs);
  PooledRefs out;
  out.cs_weights = tape.softmax(scores.cell_scores);
  out.hs_weights = tape.softmax(scores.hidden_scores);
  std::vector<ValueRef> cells;
  cells.reserve(lower.size() + 1);
  cells.push_back(top_prev_cs);
  for (const StateRefs& s : lower) cells.push_back(s.c);
  std::vector<ValueRef> hiddens;
  hiddens.reserve(lower.size());
  for (const StateRefs& s : lower) hiddens.push_back(s.h);
  out.pcs = tape.weighted_sum(out.cs_weights, cells);
  out.phs = tape.weighted_sum(out.hs_weights, hiddens);
  return out;
}

}  // namespace ttcast
