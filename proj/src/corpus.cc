// src/corpus.cc

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

#include "crid/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "crid/error.h"

namespace crid {

using json = nlohmann::json;

std::string split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

int Dataset::intent_index(const std::string& intent) const {
  for (size_t i = 0; i < intents.size(); ++i) {
    if (intents[i] == intent) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (unsigned char c : text) {
    if (std::isalnum(c) || std::isspace(c)) {
      cleaned.push_back(static_cast<char>(std::tolower(c)));
    } else {
      cleaned.push_back(' ');
    }
  }
  std::vector<std::string> tokens;
  std::istringstream in(cleaned);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

Dataset parse_dataset(const std::string& text, Split split) {
  Dataset dataset;
  dataset.split = split;
  std::unordered_set<std::string> seen_ids;
  std::unordered_set<std::string> seen_intents;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("dataset line " + std::to_string(lineno) +
                       ": invalid JSON (" + std::string(e.what()) + ")");
    }
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("manual") ||
        !rec.contains("intent")) {
      throw ParseError("dataset line " + std::to_string(lineno) +
                       ": record needs string fields id, manual, intent");
    }

    LabeledExample ex;
    try {
      ex.id = rec.at("id").get<std::string>();
      ex.manual_tokens = tokenize(rec.at("manual").get<std::string>());
      ex.intent = rec.at("intent").get<std::string>();
      if (rec.contains("asr") && !rec.at("asr").is_null()) {
        ex.asr_tokens = tokenize(rec.at("asr").get<std::string>());
      }
    } catch (const json::exception& e) {
      throw ParseError("dataset line " + std::to_string(lineno) +
                       ": bad field type (" + std::string(e.what()) + ")");
    }

    if (ex.manual_tokens.empty()) {
      throw ValidationError("dataset line " + std::to_string(lineno) +
                            ": empty manual transcript");
    }
    if (ex.asr_tokens.has_value() && ex.asr_tokens->empty()) {
      throw ValidationError("dataset line " + std::to_string(lineno) +
                            ": asr field present but empty");
    }
    if (!seen_ids.insert(ex.id).second) {
      throw ValidationError("dataset line " + std::to_string(lineno) +
                            ": duplicate id '" + ex.id + "'");
    }
    if (seen_intents.insert(ex.intent).second) {
      dataset.intents.push_back(ex.intent);
    }
    dataset.examples.push_back(std::move(ex));
  }
  return dataset;
}

Dataset load_dataset(const std::string& path, Split split) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str(), split);
}

std::string serialize_dataset(const Dataset& dataset) {
  std::string out;
  for (const auto& ex : dataset.examples) {
    json rec;
    rec["id"] = ex.id;
    rec["manual"] = join_tokens(ex.manual_tokens);
    if (ex.asr_tokens.has_value()) rec["asr"] = join_tokens(*ex.asr_tokens);
    rec["intent"] = ex.intent;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write dataset file: " + path);
  out << serialize_dataset(dataset);
}

CandidatePool build_candidate_pool(const std::vector<std::string>& vocab,
                                   const PronDict& dict,
                                   int max_phoneme_distance) {
  std::vector<std::string> words = vocab;
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());

  std::vector<PhonemeSeq> prons;
  prons.reserve(words.size());
  for (const auto& w : words) prons.push_back(g2p(w, dict));

  CandidatePool pool;
  for (size_t i = 0; i < words.size(); ++i) {
    auto& candidates = pool[words[i]];
    for (size_t j = 0; j < words.size(); ++j) {
      if (i == j) continue;
      int d = phoneme_edit_distance(prons[i], prons[j], /*ignore_stress=*/true);
      if (d <= max_phoneme_distance) {
        candidates.emplace_back(words[j], 1.0 / (1.0 + d));
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
              });
  }
  return pool;
}

void NoiseModel::validate() const {
  if (substitution_rate < 0 || deletion_rate < 0 || insertion_rate < 0 ||
      substitution_rate > 1 || deletion_rate > 1 || insertion_rate > 1) {
    throw ArgumentError("noise rates must lie in [0,1]");
  }
  if (substitution_rate + deletion_rate + insertion_rate > 1.0 + 1e-12) {
    throw ArgumentError("noise rates must sum to at most 1");
  }
  for (const auto& [word, cands] : candidate_pool) {
    double total = 0;
    for (const auto& [cand, w] : cands) {
      if (w < 0) throw ArgumentError("negative candidate weight for " + word);
      total += w;
    }
    if (!cands.empty() && total <= 0) {
      throw ArgumentError("candidate list for " + word +
                          " sums to a non-positive total");
    }
  }
}

uint64_t stream_id_for(const std::string& utterance_id) {
  uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : utterance_id) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<std::string> simulate_asr(const std::vector<std::string>& tokens,
                                      const NoiseModel& model,
                                      uint64_t stream_id) {
  model.validate();
  std::mt19937_64 rng(splitmix64(model.seed ^ splitmix64(stream_id)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::string> vocab;
  vocab.reserve(model.candidate_pool.size());
  for (const auto& kv : model.candidate_pool) vocab.push_back(kv.first);

  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    double u = unit(rng);
    if (u < model.substitution_rate) {
      auto it = model.candidate_pool.find(tok);
      if (it == model.candidate_pool.end() || it->second.empty()) {
        out.push_back(tok);  // no confusable candidates: keep
        continue;
      }
      std::vector<double> weights;
      weights.reserve(it->second.size());
      for (const auto& [cand, w] : it->second) weights.push_back(w);
      std::discrete_distribution<size_t> pick(weights.begin(), weights.end());
      out.push_back(it->second[pick(rng)].first);
    } else if (u < model.substitution_rate + model.deletion_rate) {
      continue;
    } else if (u < model.substitution_rate + model.deletion_rate +
                       model.insertion_rate) {
      out.push_back(tok);
      if (!vocab.empty()) {
        std::uniform_int_distribution<size_t> pick(0, vocab.size() - 1);
        out.push_back(vocab[pick(rng)]);
      }
    } else {
      out.push_back(tok);
    }
  }
  if (out.empty() && !tokens.empty()) out.push_back(tokens.front());
  return out;
}

void add_simulated_asr(Dataset& dataset, const NoiseModel& model) {
  for (auto& ex : dataset.examples) {
    if (!ex.asr_tokens.has_value()) {
      ex.asr_tokens = simulate_asr(ex.manual_tokens, model,
                                   stream_id_for(ex.id));
    }
  }
}

// ---------------------------------------------------------------------------
// Synthetic corpus templates.

namespace {

struct IntentTemplates {
  std::string intent;
  std::vector<std::string> patterns;
};

// Carrier phrases overlap across intents so the content keywords carry most
// of the class signal.
const std::vector<IntentTemplates>& intent_templates() {
  static const std::vector<IntentTemplates> templates = {
      {"PlayMusic",
       {
           "play some music",
           "play a song for me",
           "play the track again",
           "put on a tune for me",
           "play the album tonight",
           "i want to play a song",
           "can you play some music please",
           "play my favorite band",
           "put on some music please",
           "i want to play the album",
       }},
      {"BookRestaurant",
       {
           "book a table for two",
           "book a restaurant for tonight",
           "i want to book a table",
           "reserve a table for dinner",
           "can you book a table please",
           "book dinner for tonight",
           "find me a table at seven",
           "book a table for this evening",
           "i want to reserve a restaurant",
           "reserve dinner for two please",
       }},
      {"GetWeather",
       {
           "what is the weather today",
           "give me the forecast please",
           "will it rain tomorrow",
           "is it sunny today",
           "what is the forecast for tomorrow",
           "will it snow tonight",
           "is it cold outside",
           "how warm is it today",
           "give me the weather for tomorrow",
           "will it rain this evening",
       }},
      {"SetAlarm",
       {
           "set an alarm for six",
           "set a timer for two minutes",
           "wake me at seven",
           "remind me this evening",
           "set the clock for eight",
           "wake me in the morning",
           "set an alarm please",
           "can you set a timer for me",
           "remind me tomorrow morning",
           "set an alarm for six tomorrow",
       }},
  };
  return templates;
}

Dataset make_split(Split split, int count, uint64_t seed,
                   const std::string& id_prefix) {
  const auto& templates = intent_templates();
  std::mt19937_64 rng(splitmix64(seed));

  Dataset dataset;
  dataset.split = split;
  for (const auto& t : templates) dataset.intents.push_back(t.intent);

  for (int i = 0; i < count; ++i) {
    // Round-robin over intents keeps splits balanced; the pattern is random.
    const auto& t = templates[i % templates.size()];
    std::uniform_int_distribution<size_t> pick_pattern(0,
                                                       t.patterns.size() - 1);
    LabeledExample ex;
    ex.id = id_prefix + "-" + std::to_string(i);
    ex.manual_tokens = tokenize(t.patterns[pick_pattern(rng)]);
    ex.intent = t.intent;
    dataset.examples.push_back(std::move(ex));
  }
  return dataset;
}

}  // namespace

SynthCorpus synthesize_corpus(const SynthConfig& config) {
  SynthCorpus corpus;
  corpus.train = make_split(Split::kTrain, config.num_train,
                            splitmix64(config.seed) ^ 0x1111, "train");
  corpus.dev = make_split(Split::kDev, config.num_dev,
                          splitmix64(config.seed) ^ 0x2222, "dev");
  corpus.test = make_split(Split::kTest, config.num_test,
                           splitmix64(config.seed) ^ 0x3333, "test");
  return corpus;
}

std::vector<std::string> synth_vocabulary() {
  std::set<std::string> vocab;
  for (const auto& t : intent_templates()) {
    for (const auto& p : t.patterns) {
      for (const auto& tok : tokenize(p)) vocab.insert(tok);
    }
  }
  return std::vector<std::string>(vocab.begin(), vocab.end());
}

}  // namespace crid
