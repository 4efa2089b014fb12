// crid/phonology.h

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

#ifndef CRID_PHONOLOGY_H_
#define CRID_PHONOLOGY_H_

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace crid {

// One ARPAbet phoneme, e.g. "AY1" = base "AY" with primary stress.
// Stress digits: 0 none, 1 primary, 2 secondary; consonants carry none.
struct Phoneme {
  std::string symbol;
  std::string base;
  std::optional<int> stress;

  // The 39 ARPAbet base symbols of the CMU dictionary.
  static const std::vector<std::string>& inventory();
  static bool is_vowel(const std::string& base);

  // Parses "AY1" / "K" style tokens. Returns nullopt for symbols outside
  // the inventory or with a stress digit other than 0/1/2.
  static std::optional<Phoneme> parse(const std::string& token);

  // Reserved pseudo-phoneme for unpronounceable input.
  static Phoneme unknown();
  bool is_unknown() const { return symbol == "<unk>"; }

  bool operator==(const Phoneme& other) const { return symbol == other.symbol; }
  bool operator!=(const Phoneme& other) const { return !(*this == other); }
};

using PhonemeSeq = std::vector<Phoneme>;

PhonemeSeq make_phoneme_seq(const std::vector<std::string>& symbols);
std::string to_string(const PhonemeSeq& seq);

// Pronunciation dictionary: lowercase word -> pronunciations, primary first.
class PronDict {
 public:
  void add(const std::string& word, PhonemeSeq seq);
  const std::vector<PhonemeSeq>* find(const std::string& word) const;
  bool contains(const std::string& word) const { return find(word) != nullptr; }
  size_t size() const { return entries_.size(); }
  std::vector<std::string> words() const;

 private:
  std::unordered_map<std::string, std::vector<PhonemeSeq>> entries_;
};

// Parses CMUdict-format text: ";;;" comment lines, "WORD  PH PH ..." entries,
// "WORD(1)" variant entries appended after the primary pronunciation.
// Throws ParseError (naming the line) on unknown phoneme symbols or entries
// without phonemes.
PronDict parse_cmu_dict(const std::string& text);
PronDict load_cmu_dict(const std::string& path);

// Word -> phoneme sequence. In-dict words get their first pronunciation;
// everything else falls back to per-letter spell-out using the single-letter
// entries of `dict`, and finally to the unknown phoneme. Total by fallback.
PhonemeSeq g2p(const std::string& word, const PronDict& dict);

// Unit-cost Levenshtein distance over phoneme symbols; with ignore_stress the
// comparison uses base symbols only.
int phoneme_edit_distance(const PhonemeSeq& a, const PhonemeSeq& b,
                          bool ignore_stress = false);

// Fixed embedding index over all stress-expanded symbols: id 0 is padding,
// id 1 unknown, then consonants and vowel/stress combinations in inventory
// order. Identical across runs by construction.
class PhonemeVocab {
 public:
  PhonemeVocab();

  int pad_id() const { return 0; }
  int unk_id() const { return 1; }
  int id(const std::string& symbol) const;
  int id(const Phoneme& p) const { return id(p.symbol); }
  const std::string& symbol(int id) const { return symbols_[id]; }
  int size() const { return static_cast<int>(symbols_.size()); }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace crid

#endif  // CRID_PHONOLOGY_H_
