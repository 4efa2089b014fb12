// crid/corpus.h

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

#ifndef CRID_CORPUS_H_
#define CRID_CORPUS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crid/phonology.h"

namespace crid {

enum class Split { kTrain, kDev, kTest };

std::string split_name(Split split);

// One utterance: manual transcript tokens, optional ASR transcript tokens,
// and the gold intent label.
struct LabeledExample {
  std::string id;
  std::vector<std::string> manual_tokens;
  std::optional<std::vector<std::string>> asr_tokens;
  std::string intent;
};

struct Dataset {
  std::vector<LabeledExample> examples;
  std::vector<std::string> intents;  // first-appearance order
  Split split = Split::kTrain;

  size_t size() const { return examples.size(); }
  int intent_index(const std::string& intent) const;
};

// Lowercases, strips punctuation, splits on whitespace.
std::vector<std::string> tokenize(const std::string& text);
std::string join_tokens(const std::vector<std::string>& tokens);

// JSON-lines dataset files: one object per line with keys "id", "manual",
// optional "asr", and "intent". Throws ParseError / ValidationError with the
// offending line number.
Dataset parse_dataset(const std::string& text, Split split);
Dataset load_dataset(const std::string& path, Split split);
std::string serialize_dataset(const Dataset& dataset);
void save_dataset(const Dataset& dataset, const std::string& path);

// word -> [(confusable word, weight)], weight = 1 / (1 + phoneme distance).
using CandidatePool =
    std::map<std::string, std::vector<std::pair<std::string, double>>>;

// Candidates for each vocab word are the other vocab words within
// `max_phoneme_distance` phoneme edits (unit costs, stress ignored).
CandidatePool build_candidate_pool(const std::vector<std::string>& vocab,
                                   const PronDict& dict,
                                   int max_phoneme_distance);

struct NoiseModel {
  double substitution_rate = 0.0;
  double deletion_rate = 0.0;
  double insertion_rate = 0.0;
  CandidatePool candidate_pool;
  uint64_t seed = 0;

  // Throws ArgumentError when rates are invalid.
  void validate() const;
};

// Stable per-utterance stream id (FNV-1a) so noise is reproducible and
// independent of corpus order.
uint64_t stream_id_for(const std::string& utterance_id);

// Draws one event per token: substitute (weighted candidate), delete,
// insert-after (uniform vocab word), or keep. Pure in (tokens, model,
// stream_id). Output is never empty.
std::vector<std::string> simulate_asr(const std::vector<std::string>& tokens,
                                      const NoiseModel& model,
                                      uint64_t stream_id = 0);

// Fills in asr_tokens for every example that lacks them.
void add_simulated_asr(Dataset& dataset, const NoiseModel& model);

// ---------------------------------------------------------------------------
// Synthetic desk-scale corpus: templated single-intent commands with enough
// shared carrier words that the intent keyword carries most of the signal.

struct SynthConfig {
  int num_train = 600;
  int num_dev = 200;
  int num_test = 200;
  uint64_t seed = 1;
};

struct SynthCorpus {
  Dataset train;
  Dataset dev;
  Dataset test;
};

SynthCorpus synthesize_corpus(const SynthConfig& config);

// Every word the templates can produce (sorted, unique).
std::vector<std::string> synth_vocabulary();

}  // namespace crid

#endif  // CRID_CORPUS_H_
