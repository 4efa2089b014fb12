// crid/nn/adam.h

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

#ifndef CRID_NN_ADAM_H_
#define CRID_NN_ADAM_H_

#include <vector>

#include "crid/nn/graph.h"

namespace crid::nn {

// Adaptive moment estimation with bias correction.
class AdamOptimizer {
 public:
  AdamOptimizer(std::vector<Parameter*> params, double learning_rate,
                double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  void step();
  void zero_grad();
  double learning_rate() const { return lr_; }

 private:
  std::vector<Parameter*> params_;
  std::vector<Mat> m_;
  std::vector<Mat> v_;
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
};

}  // namespace crid::nn

#endif  // CRID_NN_ADAM_H_
