// crid/checkpoint.h

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

#ifndef CRID_CHECKPOINT_H_
#define CRID_CHECKPOINT_H_

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "crid/nn/graph.h"

namespace crid {

// Versioned binary container: a JSON metadata header (which also carries the
// tensor manifest) followed by raw little-endian doubles per tensor. Round
// trips bit-exactly.
class Checkpoint {
 public:
  nlohmann::json metadata;

  void add(const std::string& name, const nn::Mat& tensor);
  void add_params(const std::vector<nn::Parameter*>& params);
  const nn::Mat& tensor(const std::string& name) const;
  bool has_tensor(const std::string& name) const;
  void load_into(const std::vector<nn::Parameter*>& params) const;
  const std::vector<std::pair<std::string, nn::Mat>>& tensors() const {
    return tensors_;
  }

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);

 private:
  std::vector<std::pair<std::string, nn::Mat>> tensors_;
};

}  // namespace crid

#endif  // CRID_CHECKPOINT_H_
