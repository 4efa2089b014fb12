// crid/confusion.h

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

#ifndef CRID_CONFUSION_H_
#define CRID_CONFUSION_H_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crid/corpus.h"

namespace crid {

enum class AlignKind { kMatch, kSubstitute, kDelete, kInsert };

std::string align_kind_name(AlignKind kind);

// One step of a reference/hypothesis alignment. Match and Substitute carry
// both positions, Delete only ref_pos, Insert only hyp_pos.
struct AlignmentOp {
  AlignKind kind;
  std::optional<size_t> ref_pos;
  std::optional<size_t> hyp_pos;

  static AlignmentOp match(size_t r, size_t h) {
    return {AlignKind::kMatch, r, h};
  }
  static AlignmentOp substitute(size_t r, size_t h) {
    return {AlignKind::kSubstitute, r, h};
  }
  static AlignmentOp del(size_t r) {
    return {AlignKind::kDelete, r, std::nullopt};
  }
  static AlignmentOp ins(size_t h) {
    return {AlignKind::kInsert, std::nullopt, h};
  }
};

// Levenshtein alignment with unit substitute/delete/insert costs and free
// matches. On cost ties the backtrace prefers Match, then Substitute, then
// Delete, then Insert, so alignments are deterministic.
std::vector<AlignmentOp> med_align(const std::vector<std::string>& ref,
                                   const std::vector<std::string>& hyp);

// Total edit cost of an op list (matches are free).
int alignment_cost(const std::vector<AlignmentOp>& ops);

// Which transcript stream a word occurrence was observed in.
enum class TokenStream { kManual, kAsr };

std::string token_stream_name(TokenStream stream);
TokenStream parse_token_stream(const std::string& name);

// A word occurrence: utterance, stream, token (or WCN bin) position, word.
struct Occurrence {
  std::string utterance_id;
  TokenStream stream = TokenStream::kManual;
  size_t position = 0;
  std::string word;

  friend bool operator==(const Occurrence& a, const Occurrence& b) {
    return a.utterance_id == b.utterance_id && a.stream == b.stream &&
           a.position == b.position && a.word == b.word;
  }
  friend auto operator<=>(const Occurrence& a, const Occurrence& b) {
    return std::tie(a.word, a.utterance_id, a.position, a.stream) <=>
           std::tie(b.word, b.utterance_id, b.position, b.stream);
  }
};

// Two acoustically confusable word occurrences, stored in canonical order
// (lexicographic by word, then utterance id) so sets are order-insensitive.
struct ConfusionPair {
  Occurrence a;
  Occurrence b;

  // Orders the two occurrences canonically. Throws ArgumentError if the two
  // words are equal.
  static ConfusionPair canonical(Occurrence x, Occurrence y);

  friend bool operator==(const ConfusionPair& p, const ConfusionPair& q) {
    return p.a == q.a && p.b == q.b;
  }
  friend auto operator<=>(const ConfusionPair& p, const ConfusionPair& q) {
    return std::tie(p.a, p.b) <=> std::tie(q.a, q.b);
  }
};

// Deduplicated, canonically ordered set of confusion pairs.
class ConfusionSet {
 public:
  void insert(ConfusionPair pair);
  const std::vector<ConfusionPair>& pairs() const { return pairs_; }
  size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

 private:
  std::vector<ConfusionPair> pairs_;  // sorted, unique
};

// Aligns manual (reference) to ASR (hypothesis) tokens for every example that
// carries both; every Substitute op contributes one pair.
ConfusionSet extract_confusions_med(const Dataset& dataset);

inline constexpr const char* kWcnEpsilon = "<eps>";

// Word confusion network: per-slot bins of (word, posterior) entries.
struct WordConfusionNetwork {
  std::string utterance_id;
  std::vector<std::vector<std::pair<std::string, double>>> bins;
};

// JSON-lines: {"id": ..., "bins": [[["word", posterior], ...], ...]}.
std::vector<WordConfusionNetwork> parse_wcn_jsonl(const std::string& text);
std::vector<WordConfusionNetwork> load_wcn_file(const std::string& path);
std::string serialize_wcn_jsonl(const std::vector<WordConfusionNetwork>& wcns);

// All unordered pairs of distinct non-epsilon words within a bin whose
// posteriors both reach the threshold; occurrence position = bin index.
ConfusionSet extract_confusions_wcn(const std::vector<WordConfusionNetwork>& wcns,
                                    double posterior_threshold);

// Simulates a WCN per example from its ASR tokens: each bin holds the
// observed word plus its pool competitors with seeded posteriors.
std::vector<WordConfusionNetwork> simulate_wcns(const Dataset& dataset,
                                                const NoiseModel& model,
                                                int max_competitors = 3);

// JSON-lines confusion-set files.
std::string serialize_confusion_set(const ConfusionSet& set);
ConfusionSet parse_confusion_set(const std::string& text);
void save_confusion_set(const ConfusionSet& set, const std::string& path);
ConfusionSet load_confusion_set(const std::string& path);

}  // namespace crid

#endif  // CRID_CONFUSION_H_
