// crid/nn/lstm.h

// Copyright 2026  crid authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CRID_NN_LSTM_H_
#define CRID_NN_LSTM_H_

#include <random>
#include <string>
#include <vector>

#include "crid/nn/graph.h"

namespace crid::nn {

// One LSTM cell. Gate order in the 4H-wide blocks: input, forget, cell, out.
struct LstmParams {
  Parameter w_x;  // input_dim x 4H
  Parameter w_h;  // H x 4H
  Parameter b;    // 1 x 4H
  int input_dim = 0;
  int hidden_dim = 0;

  LstmParams() = default;
  LstmParams(const std::string& prefix, int in_dim, int hid_dim);

  // Uniform(-1/sqrt(H), 1/sqrt(H)) weights; forget-gate bias starts at 1.
  void init(std::mt19937_64& rng);
  std::vector<Parameter*> parameters();
};

struct LstmState {
  Var h;
  Var c;
};

// One step given the precomputed input projection row (1 x 4H or B x 4H).
LstmState lstm_step(Graph& g, LstmParams& params, Var x_proj,
                    const LstmState& prev, bool trainable);

// Runs the cell over x_seq (L x input_dim); returns the L hidden rows in
// input order. With reverse=true the sequence is consumed right-to-left but
// outputs are still reported in input order.
std::vector<Var> run_lstm(Graph& g, LstmParams& params, Var x_seq,
                          bool reverse, bool trainable);

// Batched masked run over B sequences (x_seq: B x input_dim per step).
// mask[t] is B x H with 1 rows for live sequences; masked steps carry
// state through unchanged, so trailing padding never affects the result.
std::vector<Var> run_lstm_masked(Graph& g, LstmParams& params,
                                 const std::vector<Var>& x_steps,
                                 const std::vector<Var>& masks, bool reverse,
                                 bool trainable);

}  // namespace crid::nn

#endif  // CRID_NN_LSTM_H_
