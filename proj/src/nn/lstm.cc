// src/nn/lstm.cc

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

#include "crid/nn/lstm.h"

#include <cmath>

#include "crid/error.h"

namespace crid::nn {

LstmParams::LstmParams(const std::string& prefix, int in_dim, int hid_dim)
    : w_x(prefix + ".w_x", in_dim, 4 * hid_dim),
      w_h(prefix + ".w_h", hid_dim, 4 * hid_dim),
      b(prefix + ".b", 1, 4 * hid_dim),
      input_dim(in_dim),
      hidden_dim(hid_dim) {}

void LstmParams::init(std::mt19937_64& rng) {
  double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  std::uniform_real_distribution<double> uniform(-bound, bound);
  for (Mat* m : {&w_x.value, &w_h.value}) {
    for (Eigen::Index i = 0; i < m->size(); ++i) {
      m->data()[i] = uniform(rng);
    }
  }
  b.value.setZero();
  b.value.middleCols(hidden_dim, hidden_dim).setConstant(1.0);  // forget gate
}

std::vector<Parameter*> LstmParams::parameters() { return {&w_x, &w_h, &b}; }

LstmState lstm_step(Graph& g, LstmParams& params, Var x_proj,
                    const LstmState& prev, bool trainable) {
  const int h = params.hidden_dim;
  Var w_h = trainable ? g.param(params.w_h) : g.frozen(params.w_h);
  Var b = trainable ? g.param(params.b) : g.frozen(params.b);
  Var z = g.add_rowvec(g.add(x_proj, g.matmul(prev.h, w_h)), b);
  Var gate_i = g.sigmoid(g.slice_cols(z, 0, h));
  Var gate_f = g.sigmoid(g.slice_cols(z, h, h));
  Var gate_g = g.tanh(g.slice_cols(z, 2 * h, h));
  Var gate_o = g.sigmoid(g.slice_cols(z, 3 * h, h));
  Var c = g.add(g.mul(gate_f, prev.c), g.mul(gate_i, gate_g));
  Var hidden = g.mul(gate_o, g.tanh(c));
  return LstmState{hidden, c};
}

std::vector<Var> run_lstm(Graph& g, LstmParams& params, Var x_seq,
                          bool reverse, bool trainable) {
  const Eigen::Index len = g.value(x_seq).rows();
  if (len == 0) throw ArgumentError("run_lstm: empty sequence");
  Var w_x = trainable ? g.param(params.w_x) : g.frozen(params.w_x);
  Var x_proj = g.matmul(x_seq, w_x);  // L x 4H, one GEMM for all steps

  LstmState state{g.constant(Mat::Zero(1, params.hidden_dim)),
                  g.constant(Mat::Zero(1, params.hidden_dim))};
  std::vector<Var> hidden(len);
  for (Eigen::Index step = 0; step < len; ++step) {
    Eigen::Index t = reverse ? len - 1 - step : step;
    state = lstm_step(g, params, g.slice_rows(x_proj, static_cast<int>(t), 1),
                      state, trainable);
    hidden[t] = state.h;
  }
  return hidden;
}

std::vector<Var> run_lstm_masked(Graph& g, LstmParams& params,
                                 const std::vector<Var>& x_steps,
                                 const std::vector<Var>& masks, bool reverse,
                                 bool trainable) {
  if (x_steps.empty()) throw ArgumentError("run_lstm_masked: empty sequence");
  if (x_steps.size() != masks.size()) {
    throw ArgumentError("run_lstm_masked: steps and masks differ in length");
  }
  const Eigen::Index batch = g.value(x_steps[0]).rows();
  const int h = params.hidden_dim;
  Var w_x = trainable ? g.param(params.w_x) : g.frozen(params.w_x);

  Mat ones = Mat::Ones(batch, h);
  LstmState state{g.constant(Mat::Zero(batch, h)),
                  g.constant(Mat::Zero(batch, h))};
  std::vector<Var> hidden(x_steps.size());
  for (size_t step = 0; step < x_steps.size(); ++step) {
    size_t t = reverse ? x_steps.size() - 1 - step : step;
    LstmState cand = lstm_step(g, params, g.matmul(x_steps[t], w_x), state,
                               trainable);
    Var keep = masks[t];
    Var drop = g.sub(g.constant(ones), keep);
    state = LstmState{g.add(g.mul(keep, cand.h), g.mul(drop, state.h)),
                      g.add(g.mul(keep, cand.c), g.mul(drop, state.c))};
    hidden[t] = state.h;
  }
  return hidden;
}

}  // namespace crid::nn
