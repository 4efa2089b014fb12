// src/phonology.cc

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

#include "crid/phonology.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "crid/error.h"

namespace crid {

namespace {

const std::vector<std::string> kVowels = {
    "AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER",
    "EY", "IH", "IY", "OW", "OY", "UH", "UW"};

const std::vector<std::string> kConsonants = {
    "B",  "CH", "D", "DH", "F",  "G", "HH", "JH", "K", "L",  "M", "N",
    "NG", "P",  "R", "S",  "SH", "T", "TH", "V",  "W", "Y",  "Z", "ZH"};

std::string lower_ascii(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

const std::vector<std::string>& Phoneme::inventory() {
  static const std::vector<std::string> all = [] {
    std::vector<std::string> v = kVowels;
    v.insert(v.end(), kConsonants.begin(), kConsonants.end());
    std::sort(v.begin(), v.end());
    return v;
  }();
  return all;
}

bool Phoneme::is_vowel(const std::string& base) {
  return std::find(kVowels.begin(), kVowels.end(), base) != kVowels.end();
}

std::optional<Phoneme> Phoneme::parse(const std::string& token) {
  if (token.empty()) return std::nullopt;
  std::string base = token;
  std::optional<int> stress;
  char last = token.back();
  if (last >= '0' && last <= '9') {
    if (last > '2') return std::nullopt;
    stress = last - '0';
    base = token.substr(0, token.size() - 1);
  }
  static const std::unordered_set<std::string> known(inventory().begin(),
                                                     inventory().end());
  if (known.find(base) == known.end()) return std::nullopt;
  if (stress.has_value() && !is_vowel(base)) return std::nullopt;
  return Phoneme{token, base, stress};
}

Phoneme Phoneme::unknown() { return Phoneme{"<unk>", "<unk>", std::nullopt}; }

PhonemeSeq make_phoneme_seq(const std::vector<std::string>& symbols) {
  PhonemeSeq seq;
  seq.reserve(symbols.size());
  for (const auto& s : symbols) {
    auto p = Phoneme::parse(s);
    if (!p.has_value()) throw ArgumentError("unknown phoneme symbol: " + s);
    seq.push_back(*p);
  }
  return seq;
}

std::string to_string(const PhonemeSeq& seq) {
  std::string out;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i > 0) out += ' ';
    out += seq[i].symbol;
  }
  return out;
}

void PronDict::add(const std::string& word, PhonemeSeq seq) {
  entries_[lower_ascii(word)].push_back(std::move(seq));
}

const std::vector<PhonemeSeq>* PronDict::find(const std::string& word) const {
  auto it = entries_.find(lower_ascii(word));
  if (it == entries_.end()) return nullptr;
  return &it->second;
}

std::vector<std::string> PronDict::words() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& kv : entries_) out.push_back(kv.first);
  std::sort(out.begin(), out.end());
  return out;
}

PronDict parse_cmu_dict(const std::string& text) {
  PronDict dict;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind(";;;", 0) == 0) continue;

    std::istringstream fields(line);
    std::string word;
    fields >> word;
    if (word.empty()) continue;
    // Variant entries look like WORD(1); the suffix orders alternatives.
    auto paren = word.find('(');
    if (paren != std::string::npos && word.back() == ')') {
      word = word.substr(0, paren);
    }

    PhonemeSeq seq;
    std::string tok;
    while (fields >> tok) {
      auto p = Phoneme::parse(tok);
      if (!p.has_value()) {
        throw ParseError("cmudict line " + std::to_string(lineno) +
                         ": unknown phoneme symbol '" + tok + "'");
      }
      seq.push_back(*p);
    }
    if (seq.empty()) {
      throw ParseError("cmudict line " + std::to_string(lineno) +
                       ": entry '" + word + "' has no phonemes");
    }
    dict.add(word, std::move(seq));
  }
  return dict;
}

PronDict load_cmu_dict(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open pronunciation dictionary: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_cmu_dict(ss.str());
}

PhonemeSeq g2p(const std::string& word, const PronDict& dict) {
  const std::string w = lower_ascii(word);
  if (const auto* prons = dict.find(w)) return prons->front();

  // Spell-out fallback: concatenate letter-name pronunciations.
  PhonemeSeq out;
  for (char c : w) {
    if (!std::isalpha(static_cast<unsigned char>(c))) continue;
    if (const auto* prons = dict.find(std::string(1, c))) {
      const PhonemeSeq& letter = prons->front();
      out.insert(out.end(), letter.begin(), letter.end());
    }
  }
  if (out.empty()) out.push_back(Phoneme::unknown());
  return out;
}

int phoneme_edit_distance(const PhonemeSeq& a, const PhonemeSeq& b,
                          bool ignore_stress) {
  auto key = [&](const Phoneme& p) -> const std::string& {
    return ignore_stress ? p.base : p.symbol;
  };
  const size_t n = a.size(), m = b.size();
  std::vector<int> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= m; ++j) {
      int sub = prev[j - 1] + (key(a[i - 1]) == key(b[j - 1]) ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

PhonemeVocab::PhonemeVocab() {
  symbols_.push_back("<pad>");
  symbols_.push_back("<unk>");
  for (const auto& base : Phoneme::inventory()) {
    if (Phoneme::is_vowel(base)) {
      for (int s = 0; s <= 2; ++s) symbols_.push_back(base + std::to_string(s));
    } else {
      symbols_.push_back(base);
    }
  }
  for (int i = 0; i < static_cast<int>(symbols_.size()); ++i) {
    index_[symbols_[i]] = i;
  }
}

int PhonemeVocab::id(const std::string& symbol) const {
  auto it = index_.find(symbol);
  return it == index_.end() ? unk_id() : it->second;
}

}  // namespace crid
