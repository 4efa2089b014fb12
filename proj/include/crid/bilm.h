// crid/bilm.h

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

#ifndef CRID_BILM_H_
#define CRID_BILM_H_

#include <array>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "crid/checkpoint.h"
#include "crid/confusion.h"
#include "crid/corpus.h"
#include "crid/nn/graph.h"
#include "crid/nn/lstm.h"

namespace crid {

using nn::Mat;
using nn::Var;

// Word index for the language model. Slot 0 is <unk>; the start/end marks
// live as extra embedding rows, not vocab entries, so softmax outputs are
// distributions over real words plus <unk>.
class LmVocab {
 public:
  LmVocab();
  static LmVocab build(const std::vector<std::vector<std::string>>& corpus);

  int id(const std::string& word) const;
  const std::string& word(int id) const { return words_[id]; }
  int size() const { return static_cast<int>(words_.size()); }
  int unk_id() const { return 0; }
  const std::vector<std::string>& words() const { return words_; }
  void add(const std::string& word);

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

// Per-token representations: for each layer i in {0,1}, row t concatenates
// the forward and backward hidden states of that layer at position t.
struct TokenReps {
  std::array<Mat, 2> layers;  // each L x 2H

  Eigen::RowVectorXd h(int t, int layer) const {
    return layers[layer].row(t);
  }
  Eigen::Index length() const { return layers[0].rows(); }
};

// Mean over positions of the layer-1 token representations.
struct SentenceRep {
  Eigen::RowVectorXd h;
};

struct LmForwardResult {
  TokenReps reps;
  SentenceRep sentence;
  std::vector<double> fwd_logprob;  // log p(w_t | w_<t), one per position
  std::vector<double> bwd_logprob;  // log p(w_t | w_>t)
  Mat fwd_logprob_full;             // L x V, rows are log-distributions
  Mat bwd_logprob_full;
};

enum class DistanceKind { kMse, kCosine, kL1, kTriplet };

std::string distance_kind_name(DistanceKind kind);
DistanceKind parse_distance_kind(const std::string& name);

struct TripletConfig {
  double margin = 1.0;
  int norm_p = 2;
  uint64_t seed = 0;
};

struct DistanceSpec {
  DistanceKind kind = DistanceKind::kMse;
  TripletConfig triplet;
};

struct CalibrationConfig {
  double lambda = 10.0;
  int epochs = 10;
  int batch_size = 32;
  double learning_rate = 1e-4;
  DistanceSpec distance;
  uint64_t seed = 0;
  // Cleared for the variant that trains on the confusion loss alone.
  bool use_task_adaptive = true;

  void validate() const;
};

struct PretrainConfig {
  int epochs = 20;
  int batch_size = 32;
  double learning_rate = 1e-3;
  uint64_t seed = 0;
};

struct EpochLoss {
  double l_ta = 0;
  double l_ca = 0;
  double l_total = 0;
};

// Two-layer bidirectional LSTM language model over whole words. The forward
// stream predicts each token from its left context, the backward stream from
// its right context; boundary predictions condition on learned start/end
// embeddings.
class BiLM {
 public:
  BiLM(LmVocab vocab, int embed_dim, int hidden_dim, uint64_t seed);

  const LmVocab& vocab() const { return vocab_; }
  int embed_dim() const { return embed_dim_; }
  int hidden_dim() const { return hidden_dim_; }
  int rep_dim() const { return 2 * hidden_dim_; }

  std::vector<nn::Parameter*> parameters();

  struct GraphEncoding {
    std::array<Var, 2> reps;  // L x 2H per layer
    Var sentence;             // 1 x 2H
    Var fwd_lp;               // L x V (invalid when logprobs skipped)
    Var bwd_lp;
    std::vector<int> ids;
  };

  // Builds the forward pass on `g`. trainable binds parameters for gradient
  // flow; with_logprobs adds the two output projections.
  GraphEncoding encode(nn::Graph& g, const std::vector<std::string>& tokens,
                       bool trainable, bool with_logprobs) const;

  // In-graph Eq.-style task loss for one sentence.
  Var task_loss(nn::Graph& g, const GraphEncoding& enc) const;

  // Inference conveniences (no gradients, pure).
  LmForwardResult forward(const std::vector<std::string>& tokens) const;
  Mat embed(const std::vector<std::string>& tokens) const;  // L x 2H, layer 1

  Checkpoint to_checkpoint() const;
  static BiLM from_checkpoint(const Checkpoint& ckpt);

 private:
  LmVocab vocab_;
  int embed_dim_;
  int hidden_dim_;
  // rows: [vocab words..., <bos>, <eos>]
  mutable nn::Parameter embedding_;
  mutable nn::LstmParams fw_[2];
  mutable nn::LstmParams bw_[2];
  mutable nn::Parameter out_fw_w_, out_fw_b_, out_bw_w_, out_bw_b_;

  int bos_row() const { return vocab_.size(); }
  int eos_row() const { return vocab_.size() + 1; }
};

// Mean over positions of the per-direction negative log likelihoods (the
// LM's own pretraining objective).
double task_adaptive_loss(const std::vector<double>& fwd_logprob,
                          const std::vector<double>& bwd_logprob);

// Representations of one encoded utterance variant, for the value-level
// confusion loss.
struct RepEntry {
  TokenReps reps;
  SentenceRep sentence;
  std::vector<std::string> tokens;
};

// Keyed by occurrence_key(): "<utterance id>/<stream>".
using RepTable = std::map<std::string, RepEntry>;

std::string occurrence_key(const Occurrence& occ);

RepEntry make_rep_entry(const BiLM& model,
                        const std::vector<std::string>& tokens);

// Mean over confusion pairs of the per-layer representation distances plus
// the sentence-level distance. Zero for an empty set. Throws ArgumentError
// when a pair references a representation that `reps` does not cover.
double confusion_loss(const ConfusionSet& pairs, const RepTable& reps,
                      const DistanceSpec& distance);

// L = L_ta + lambda * L_ca.
inline double joint_loss(double l_ta, double l_ca, double lambda) {
  return l_ta + lambda * l_ca;
}

// Minimizes the task loss alone; returns per-epoch mean loss.
std::vector<double> pretrain_lm(
    BiLM& model, const std::vector<std::vector<std::string>>& corpus,
    const PretrainConfig& config);

// Joint finetuning: every batch mixes task-loss sentences (manual and ASR
// streams of `corpus`) with confusion pairs re-encoded under the current
// weights. Returns the per-epoch loss trace.
std::vector<EpochLoss> joint_finetune(BiLM& model, const Dataset& corpus,
                                      const ConfusionSet& pairs,
                                      const CalibrationConfig& config);

}  // namespace crid

#endif  // CRID_BILM_H_
