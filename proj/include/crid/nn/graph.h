// crid/nn/graph.h

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

#ifndef CRID_NN_GRAPH_H_
#define CRID_NN_GRAPH_H_

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace crid::nn {

using Mat = Eigen::MatrixXd;

// A named dense tensor with a persistent gradient accumulator. Models own
// their Parameters; Graph::backward adds into `grad` until zero_grad.
struct Parameter {
  std::string name;
  Mat value;
  Mat grad;

  Parameter() = default;
  Parameter(std::string param_name, int rows, int cols)
      : name(std::move(param_name)),
        value(Mat::Zero(rows, cols)),
        grad(Mat::Zero(rows, cols)) {}

  void zero_grad() { grad.setZero(); }
  Eigen::Index count() const { return value.size(); }
};

// Handle into a Graph's node arena.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode tape over Eigen matrices. Build a graph per loss evaluation;
// backward() accumulates into the Parameters bound via param(). Nodes are
// processed in reverse creation order, which makes gradient accumulation
// order (and therefore training) run-to-run deterministic.
class Graph {
 public:
  Graph() { nodes_.reserve(256); }
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // Leaves.
  Var constant(Mat value);
  // Caller guarantees `value` outlives the graph; no copy is made.
  Var constant_ref(const Mat& value);
  Var param(Parameter& p);
  // Reads a parameter without tracking gradients (frozen module).
  Var frozen(const Parameter& p) { return constant_ref(p.value); }

  // Elementwise and broadcast arithmetic.
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var div(Var a, Var b);
  Var scale(Var a, double c);
  Var add_rowvec(Var a, Var row);  // row: 1 x D, broadcast over rows of a

  // Matrix products.
  Var matmul(Var a, Var b);
  Var matmul_nt(Var a, Var b);  // a * b^T

  // Nonlinearities.
  Var sigmoid(Var a);
  Var tanh(Var a);
  Var relu(Var a);
  Var abs(Var a);
  Var sqrt(Var a);
  // |a|^p with sign-aware gradient (p >= 1).
  Var pow_abs(Var a, double p);
  // a^e on positive inputs.
  Var pow_pos(Var a, double e);

  // Reductions and reshaping.
  Var sum(Var a);        // 1 x 1
  Var mean(Var a);       // 1 x 1
  Var mean_rows(Var a);  // 1 x D column means
  Var max_rows(Var a);   // 1 x D column maxes; subgradient to first argmax
  Var concat_cols(Var a, Var b);
  Var concat_rows(const std::vector<Var>& rows);
  Var slice_rows(Var a, int start, int count);
  Var slice_cols(Var a, int start, int count);
  Var select_rows(Var a, std::vector<int> ids);

  // Row-wise softmax family.
  Var softmax_rows(Var a);
  Var log_softmax_rows(Var a);

  // scale * sum_k a(coords[k].first, coords[k].second); 1 x 1.
  Var pick_sum(Var a, std::vector<std::pair<int, int>> coords, double scale);

  const Mat& value(Var v) const { return nodes_[v.id].val(); }
  double scalar(Var v) const;
  size_t size() const { return nodes_.size(); }

  // Seeds d(root)/d(root) = 1 and sweeps the tape once. `root` must be 1x1.
  void backward(Var root);

 private:
  struct Node {
    Mat storage;
    // Set for ref leaves (parameters, borrowed constants); storage otherwise.
    const Mat* external = nullptr;
    Mat grad;
    bool has_grad = false;
    bool requires_grad = false;
    std::function<void(Graph&)> backfn;
    Parameter* bound_param = nullptr;

    const Mat& val() const { return external != nullptr ? *external : storage; }
  };

  int new_node(Mat value, bool requires_grad);
  int new_node_ref(const Mat* value, bool requires_grad);
  bool needs_grad(Var v) const { return nodes_[v.id].requires_grad; }
  const Mat& grad_of(int id) const { return nodes_[id].grad; }

  // Gradient accumulation helpers used by backward functions.
  void accum(int id, const Mat& g);
  template <typename Expr>
  void accum_expr(int id, const Expr& g) {
    Node& n = nodes_[id];
    if (!n.requires_grad) return;
    if (!n.has_grad) {
      n.grad = Mat::Zero(n.val().rows(), n.val().cols());
      n.has_grad = true;
    }
    n.grad += g;
  }
  Mat& grad_buffer(int id);  // zero-initialized on first access

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, int> param_nodes_;
};

// Global-norm gradient clipping; returns the pre-clip norm.
double clip_grad_norm(const std::vector<Parameter*>& params, double max_norm);

}  // namespace crid::nn

#endif  // CRID_NN_GRAPH_H_
