// src/nn/graph.cc

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

#include "crid/nn/graph.h"

#include <algorithm>
#include <cmath>

#include "crid/error.h"

namespace crid::nn {

int Graph::new_node(Mat value, bool requires_grad) {
  Node node;
  node.storage = std::move(value);
  node.requires_grad = requires_grad;
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

int Graph::new_node_ref(const Mat* value, bool requires_grad) {
  Node node;
  node.external = value;
  node.requires_grad = requires_grad;
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

Var Graph::constant(Mat value) {
  return Var{new_node(std::move(value), false)};
}

Var Graph::constant_ref(const Mat& value) {
  return Var{new_node_ref(&value, false)};
}

Var Graph::param(Parameter& p) {
  auto it = param_nodes_.find(&p);
  if (it != param_nodes_.end()) return Var{it->second};
  int id = new_node_ref(&p.value, true);
  nodes_[id].bound_param = &p;
  param_nodes_[&p] = id;
  return Var{id};
}

double Graph::scalar(Var v) const {
  const Mat& m = value(v);
  if (m.rows() != 1 || m.cols() != 1) {
    throw ArgumentError("scalar() on a non 1x1 value");
  }
  return m(0, 0);
}

void Graph::accum(int id, const Mat& g) { accum_expr(id, g); }

Mat& Graph::grad_buffer(int id) {
  Node& n = nodes_[id];
  if (!n.has_grad) {
    n.grad = Mat::Zero(n.val().rows(), n.val().cols());
    n.has_grad = true;
  }
  return n.grad;
}

void Graph::backward(Var root) {
  Node& root_node = nodes_[root.id];
  if (root_node.val().rows() != 1 || root_node.val().cols() != 1) {
    throw ArgumentError("backward() root must be a 1x1 scalar");
  }
  if (!root_node.requires_grad) return;  // nothing trainable on the path
  grad_buffer(root.id)(0, 0) += 1.0;

  for (int id = root.id; id >= 0; --id) {
    Node& node = nodes_[id];
    if (!node.requires_grad || !node.has_grad) continue;
    if (node.backfn) node.backfn(*this);
    if (node.bound_param != nullptr) node.bound_param->grad += node.grad;
  }
}

// --------------------------------------------------------------------------
// Ops. Each captures parent/self ids; values are read back through the graph
// so vector reallocation cannot invalidate anything.

Var Graph::add(Var a, Var b) {
  bool rg = needs_grad(a) || needs_grad(b);
  int id = new_node(value(a) + value(b), rg);
  if (rg) {
    nodes_[id].backfn = [id, a, b](Graph& g) {
      const Mat& grad = g.grad_of(id);
      g.accum(a.id, grad);
      g.accum(b.id, grad);
    };
  }
  return Var{id};
}

Var Graph::sub(Var a, Var b) {
  bool rg = needs_grad(a) || needs_grad(b);
  int id = new_node(value(a) - value(b), rg);
  if (rg) {
    nodes_[id].backfn = [id, a, b](Graph& g) {
      const Mat& grad = g.grad_of(id);
      g.accum(a.id, grad);
      g.accum_expr(b.id, -grad);
    };
  }
  return Var{id};
}

Var Graph::mul(Var a, Var b) {
  bool rg = needs_grad(a) || needs_grad(b);
  int id = new_node(value(a).cwiseProduct(value(b)), rg);
  if (rg) {
    nodes_[id].backfn = [id, a, b](Graph& g) {
      const Mat& grad = g.grad_of(id);
      g.accum_expr(a.id, grad.cwiseProduct(g.value(b)));
      g.accum_expr(b.id, grad.cwiseProduct(g.value(a)));
    };
  }
  return Var{id};
}

Var Graph::div(Var a, Var b) {
  bool rg = needs_grad(a) || needs_grad(b);
  int id = new_node(value(a).cwiseQuotient(value(b)), rg);
  if (rg) {
    nodes_[id].backfn = [id, a, b](Graph& g) {
      const Mat& grad = g.grad_of(id);
      const Mat& bv = g.value(b);
      g.accum_expr(a.id, grad.cwiseQuotient(bv));
      g.accum_expr(b.id, -grad.cwiseProduct(g.value(Var{id})).cwiseQuotient(bv));
    };
  }
  return Var{id};
}

Var Graph::scale(Var a, double c) {
  bool rg = needs_grad(a);
  int id = new_node(value(a) * c, rg);
  if (rg) {
    nodes_[id].backfn = [id, a, c](Graph& g) {
      g.accum_expr(a.id, g.grad_of(id) * c);
    };
  }
  return Var{id};
}

Var Graph::add_rowvec(Var a, Var row) {
  if (value(row).rows() != 1 || value(row).cols() != value(a).cols()) {
    throw ArgumentError("add_rowvec: row must be 1 x cols(a)");
  }
  bool rg = needs_grad(a) || needs_grad(row);
  Mat out = value(a);
  out.rowwise() += value(row).row(0);
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a, row](Graph& g) {
      const Mat& grad = g.grad_of(id);
      g.accum(a.id, grad);
      g.accum_expr(row.id, grad.colwise().sum());
    };
  }
  return Var{id};
}

Var Graph::matmul(Var a, Var b) {
  bool rg = needs_grad(a) || needs_grad(b);
  int id = new_node(value(a) * value(b), rg);
  if (rg) {
    nodes_[id].backfn = [id, a, b](Graph& g) {
      const Mat& grad = g.grad_of(id);
      if (g.needs_grad(a)) {
        g.grad_buffer(a.id).noalias() += grad * g.value(b).transpose();
      }
      if (g.needs_grad(b)) {
        g.grad_buffer(b.id).noalias() += g.value(a).transpose() * grad;
      }
    };
  }
  return Var{id};
}

Var Graph::matmul_nt(Var a, Var b) {
  bool rg = needs_grad(a) || needs_grad(b);
  int id = new_node(value(a) * value(b).transpose(), rg);
  if (rg) {
    nodes_[id].backfn = [id, a, b](Graph& g) {
      const Mat& grad = g.grad_of(id);
      if (g.needs_grad(a)) {
        g.grad_buffer(a.id).noalias() += grad * g.value(b);
      }
      if (g.needs_grad(b)) {
        g.grad_buffer(b.id).noalias() += grad.transpose() * g.value(a);
      }
    };
  }
  return Var{id};
}

Var Graph::sigmoid(Var a) {
  bool rg = needs_grad(a);
  Mat out = value(a).unaryExpr(
      [](double x) { return 1.0 / (1.0 + std::exp(-x)); });
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a](Graph& g) {
      const Mat& s = g.value(Var{id});
      g.accum_expr(a.id, g.grad_of(id).cwiseProduct(
                             s.cwiseProduct(Mat::Ones(s.rows(), s.cols()) - s)));
    };
  }
  return Var{id};
}

Var Graph::tanh(Var a) {
  bool rg = needs_grad(a);
  Mat out = value(a).array().tanh().matrix();
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a](Graph& g) {
      const Mat& t = g.value(Var{id});
      g.accum_expr(a.id,
                   g.grad_of(id).cwiseProduct(
                       (1.0 - t.array().square()).matrix()));
    };
  }
  return Var{id};
}

Var Graph::relu(Var a) {
  bool rg = needs_grad(a);
  Mat out = value(a).cwiseMax(0.0);
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a](Graph& g) {
      const Mat& x = g.value(a);
      g.accum_expr(a.id,
                   g.grad_of(id).cwiseProduct(
                       (x.array() > 0.0).cast<double>().matrix()));
    };
  }
  return Var{id};
}

Var Graph::abs(Var a) {
  bool rg = needs_grad(a);
  Mat out = value(a).cwiseAbs();
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a](Graph& g) {
      const Mat& x = g.value(a);
      g.accum_expr(a.id, g.grad_of(id).cwiseProduct(x.array().sign().matrix()));
    };
  }
  return Var{id};
}

Var Graph::sqrt(Var a) {
  bool rg = needs_grad(a);
  Mat out = value(a).cwiseSqrt();
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a](Graph& g) {
      const Mat& s = g.value(Var{id});
      g.accum_expr(a.id, (g.grad_of(id).array() * 0.5 / s.array()).matrix());
    };
  }
  return Var{id};
}

Var Graph::pow_abs(Var a, double p) {
  if (p < 1.0) throw ArgumentError("pow_abs requires p >= 1");
  bool rg = needs_grad(a);
  Mat out = value(a).array().abs().pow(p).matrix();
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a, p](Graph& g) {
      const auto x = g.value(a).array();
      g.accum_expr(
          a.id,
          (g.grad_of(id).array() * p * x.abs().pow(p - 1.0) * x.sign())
              .matrix());
    };
  }
  return Var{id};
}

Var Graph::pow_pos(Var a, double e) {
  bool rg = needs_grad(a);
  Mat out = value(a).array().pow(e).matrix();
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a, e](Graph& g) {
      const auto x = g.value(a).array();
      g.accum_expr(a.id,
                   (g.grad_of(id).array() * e * x.pow(e - 1.0)).matrix());
    };
  }
  return Var{id};
}

Var Graph::sum(Var a) {
  bool rg = needs_grad(a);
  Mat out(1, 1);
  out(0, 0) = value(a).sum();
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a](Graph& g) {
      const Mat& x = g.value(a);
      g.accum_expr(a.id,
                   Mat::Constant(x.rows(), x.cols(), g.grad_of(id)(0, 0)));
    };
  }
  return Var{id};
}

Var Graph::mean(Var a) {
  bool rg = needs_grad(a);
  Mat out(1, 1);
  out(0, 0) = value(a).mean();
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a](Graph& g) {
      const Mat& x = g.value(a);
      double scale = g.grad_of(id)(0, 0) / static_cast<double>(x.size());
      g.accum_expr(a.id, Mat::Constant(x.rows(), x.cols(), scale));
    };
  }
  return Var{id};
}

Var Graph::mean_rows(Var a) {
  bool rg = needs_grad(a);
  Mat out = value(a).colwise().mean();
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a](Graph& g) {
      const Mat& x = g.value(a);
      double inv = 1.0 / static_cast<double>(x.rows());
      g.accum_expr(a.id, (g.grad_of(id) * inv).replicate(x.rows(), 1));
    };
  }
  return Var{id};
}

Var Graph::max_rows(Var a) {
  bool rg = needs_grad(a);
  const Mat& x = value(a);
  Mat out(1, x.cols());
  std::vector<int> argmax(x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    Eigen::Index best = 0;
    for (Eigen::Index r = 1; r < x.rows(); ++r) {
      if (x(r, c) > x(best, c)) best = r;
    }
    out(0, c) = x(best, c);
    argmax[c] = static_cast<int>(best);
  }
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a, argmax = std::move(argmax)](Graph& g) {
      const Mat& grad = g.grad_of(id);
      Mat& buf = g.grad_buffer(a.id);
      for (Eigen::Index c = 0; c < grad.cols(); ++c) {
        buf(argmax[c], c) += grad(0, c);
      }
    };
  }
  return Var{id};
}

Var Graph::concat_cols(Var a, Var b) {
  bool rg = needs_grad(a) || needs_grad(b);
  const Mat& av = value(a);
  const Mat& bv = value(b);
  if (av.rows() != bv.rows()) {
    throw ArgumentError("concat_cols: row counts differ");
  }
  Mat out(av.rows(), av.cols() + bv.cols());
  out.leftCols(av.cols()) = av;
  out.rightCols(bv.cols()) = bv;
  int id = new_node(std::move(out), rg);
  if (rg) {
    int acols = static_cast<int>(av.cols());
    int bcols = static_cast<int>(bv.cols());
    nodes_[id].backfn = [id, a, b, acols, bcols](Graph& g) {
      const Mat& grad = g.grad_of(id);
      g.accum_expr(a.id, grad.leftCols(acols));
      g.accum_expr(b.id, grad.rightCols(bcols));
    };
  }
  return Var{id};
}

Var Graph::concat_rows(const std::vector<Var>& rows) {
  if (rows.empty()) throw ArgumentError("concat_rows: empty input");
  bool rg = false;
  Eigen::Index total = 0;
  Eigen::Index cols = value(rows[0]).cols();
  for (Var v : rows) {
    rg = rg || needs_grad(v);
    if (value(v).cols() != cols) {
      throw ArgumentError("concat_rows: column counts differ");
    }
    total += value(v).rows();
  }
  Mat out(total, cols);
  Eigen::Index at = 0;
  for (Var v : rows) {
    out.middleRows(at, value(v).rows()) = value(v);
    at += value(v).rows();
  }
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, pieces = rows](Graph& g) {
      const Mat& grad = g.grad_of(id);
      Eigen::Index at = 0;
      for (Var v : pieces) {
        Eigen::Index r = g.value(v).rows();
        g.accum_expr(v.id, grad.middleRows(at, r));
        at += r;
      }
    };
  }
  return Var{id};
}

Var Graph::slice_rows(Var a, int start, int count) {
  bool rg = needs_grad(a);
  int id = new_node(value(a).middleRows(start, count), rg);
  if (rg) {
    nodes_[id].backfn = [id, a, start, count](Graph& g) {
      g.grad_buffer(a.id).middleRows(start, count) += g.grad_of(id);
    };
  }
  return Var{id};
}

Var Graph::slice_cols(Var a, int start, int count) {
  bool rg = needs_grad(a);
  int id = new_node(value(a).middleCols(start, count), rg);
  if (rg) {
    nodes_[id].backfn = [id, a, start, count](Graph& g) {
      g.grad_buffer(a.id).middleCols(start, count) += g.grad_of(id);
    };
  }
  return Var{id};
}

Var Graph::select_rows(Var a, std::vector<int> ids) {
  bool rg = needs_grad(a);
  const Mat& x = value(a);
  Mat out(static_cast<Eigen::Index>(ids.size()), x.cols());
  for (size_t k = 0; k < ids.size(); ++k) out.row(k) = x.row(ids[k]);
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a, ids = std::move(ids)](Graph& g) {
      const Mat& grad = g.grad_of(id);
      Mat& buf = g.grad_buffer(a.id);
      for (size_t k = 0; k < ids.size(); ++k) {
        buf.row(ids[k]) += grad.row(k);
      }
    };
  }
  return Var{id};
}

Var Graph::softmax_rows(Var a) {
  bool rg = needs_grad(a);
  Mat out = value(a);
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    double mx = out.row(r).maxCoeff();
    out.row(r) = (out.row(r).array() - mx).exp();
    out.row(r) /= out.row(r).sum();
  }
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a](Graph& g) {
      const Mat& y = g.value(Var{id});
      const Mat& grad = g.grad_of(id);
      Mat gy = grad.cwiseProduct(y);
      Eigen::VectorXd dot = gy.rowwise().sum();
      g.accum_expr(a.id, gy - y.cwiseProduct(dot.replicate(1, y.cols())));
    };
  }
  return Var{id};
}

Var Graph::log_softmax_rows(Var a) {
  bool rg = needs_grad(a);
  Mat out = value(a);
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    double mx = out.row(r).maxCoeff();
    double lse = std::log((out.row(r).array() - mx).exp().sum()) + mx;
    out.row(r).array() -= lse;
  }
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a](Graph& g) {
      const Mat& y = g.value(Var{id});  // log-probs
      const Mat& grad = g.grad_of(id);
      Eigen::VectorXd gsum = grad.rowwise().sum();
      g.accum_expr(a.id,
                   grad - y.array().exp().matrix().cwiseProduct(
                              gsum.replicate(1, y.cols())));
    };
  }
  return Var{id};
}

Var Graph::pick_sum(Var a, std::vector<std::pair<int, int>> coords,
                    double scale) {
  bool rg = needs_grad(a);
  const Mat& x = value(a);
  double total = 0;
  for (const auto& [r, c] : coords) total += x(r, c);
  Mat out(1, 1);
  out(0, 0) = total * scale;
  int id = new_node(std::move(out), rg);
  if (rg) {
    nodes_[id].backfn = [id, a, coords = std::move(coords), scale](Graph& g) {
      double go = g.grad_of(id)(0, 0) * scale;
      Mat& buf = g.grad_buffer(a.id);
      for (const auto& [r, c] : coords) buf(r, c) += go;
    };
  }
  return Var{id};
}

double clip_grad_norm(const std::vector<Parameter*>& params, double max_norm) {
  double total = 0;
  for (const Parameter* p : params) total += p->grad.squaredNorm();
  total = std::sqrt(total);
  if (total > max_norm && total > 0) {
    double factor = max_norm / total;
    for (Parameter* p : params) p->grad *= factor;
  }
  return total;
}

}  // namespace crid::nn
