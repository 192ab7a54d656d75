#pragma once

#include <span>
#include <string>

#include "ttcast/rng.hpp"
#include "ttcast/tape.hpp"

namespace ttcast {

// Affine score projections for attention pooling. One shared cell-state
// projection scores both the top layer's previous cell state and the lower
// layer's cell states, so all K+1 scores live on one scale inside one
// softmax; the hidden-state projection is separate.
struct PoolingParamIds {
  int cs_W = -1, cs_b = -1;  // cell-state score: 1 x dim matrix, length-1 bias
  int hs_W = -1, hs_b = -1;  // hidden-state score
};

PoolingParamIds add_pooling_params(ParamStore& store, const std::string& prefix,
                                   std::size_t state_dim);
void init_pooling_params(ParamStore& store, const PoolingParamIds& ids, Rng& rng);

struct StateRefs {
  ValueRef c, h;
};

struct PoolScores {
  // K+1 cell-state scores; index 0 scores the top layer's previous cell
  // state, indices 1..K the lower-layer cell states in time order.
  ValueRef cell_scores;
  // K hidden-state scores in time order.
  ValueRef hidden_scores;
};

PoolScores score_states(Tape& tape, const PoolingParamIds& p,
                        std::span<const StateRefs> lower, ValueRef top_prev_cs);

struct PooledRefs {
  ValueRef pcs;         // pooled cell state
  ValueRef phs;         // pooled hidden state
  ValueRef cs_weights;  // K+1 softmax weights, index 0 = top previous cell state
  ValueRef hs_weights;  // K softmax weights
};

// Compress a window of K lower-layer states plus the top layer's previous
// cell state into one pooled pair. The pooled cell state is a convex
// combination over all K+1 cell states; the pooled hidden state combines the
// K lower hidden states only (the top layer's own hidden state does not
// participate).
PooledRefs pool(Tape& tape, const PoolingParamIds& p, std::span<const StateRefs> lower,
                ValueRef top_prev_cs);

}  // namespace ttcast
