// src/confusion.cc

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

#include "crid/confusion.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "crid/error.h"

namespace crid {

using json = nlohmann::json;

std::string align_kind_name(AlignKind kind) {
  switch (kind) {
    case AlignKind::kMatch: return "match";
    case AlignKind::kSubstitute: return "substitute";
    case AlignKind::kDelete: return "delete";
    case AlignKind::kInsert: return "insert";
  }
  return "match";
}

std::vector<AlignmentOp> med_align(const std::vector<std::string>& ref,
                                   const std::vector<std::string>& hyp) {
  const size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<int>> cost(n + 1, std::vector<int>(m + 1, 0));
  for (size_t i = 1; i <= n; ++i) cost[i][0] = static_cast<int>(i);
  for (size_t j = 1; j <= m; ++j) cost[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      int diag = cost[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cost[i][j] = std::min({diag, cost[i - 1][j] + 1, cost[i][j - 1] + 1});
    }
  }

  // Backtrace; tie order: match, substitute, delete, insert.
  std::vector<AlignmentOp> ops;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] &&
        cost[i][j] == cost[i - 1][j - 1]) {
      ops.push_back(AlignmentOp::match(i - 1, j - 1));
      --i, --j;
    } else if (i > 0 && j > 0 && ref[i - 1] != hyp[j - 1] &&
               cost[i][j] == cost[i - 1][j - 1] + 1) {
      ops.push_back(AlignmentOp::substitute(i - 1, j - 1));
      --i, --j;
    } else if (i > 0 && cost[i][j] == cost[i - 1][j] + 1) {
      ops.push_back(AlignmentOp::del(i - 1));
      --i;
    } else {
      ops.push_back(AlignmentOp::ins(j - 1));
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

int alignment_cost(const std::vector<AlignmentOp>& ops) {
  int cost = 0;
  for (const auto& op : ops) {
    if (op.kind != AlignKind::kMatch) ++cost;
  }
  return cost;
}

std::string token_stream_name(TokenStream stream) {
  return stream == TokenStream::kManual ? "manual" : "asr";
}

TokenStream parse_token_stream(const std::string& name) {
  if (name == "manual") return TokenStream::kManual;
  if (name == "asr") return TokenStream::kAsr;
  throw ParseError("unknown token stream '" + name + "'");
}

ConfusionPair ConfusionPair::canonical(Occurrence x, Occurrence y) {
  if (x.word == y.word) {
    throw ArgumentError("confusion pair words must differ: '" + x.word + "'");
  }
  if (y < x) std::swap(x, y);
  return ConfusionPair{std::move(x), std::move(y)};
}

void ConfusionSet::insert(ConfusionPair pair) {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), pair);
  if (it != pairs_.end() && *it == pair) return;
  pairs_.insert(it, std::move(pair));
}

ConfusionSet extract_confusions_med(const Dataset& dataset) {
  ConfusionSet set;
  for (const auto& ex : dataset.examples) {
    if (!ex.asr_tokens.has_value()) continue;
    auto ops = med_align(ex.manual_tokens, *ex.asr_tokens);
    for (const auto& op : ops) {
      if (op.kind != AlignKind::kSubstitute) continue;
      Occurrence ref_occ{ex.id, TokenStream::kManual, *op.ref_pos,
                         ex.manual_tokens[*op.ref_pos]};
      Occurrence hyp_occ{ex.id, TokenStream::kAsr, *op.hyp_pos,
                         (*ex.asr_tokens)[*op.hyp_pos]};
      if (ref_occ.word == hyp_occ.word) continue;  // defensive; cannot happen
      set.insert(ConfusionPair::canonical(std::move(ref_occ),
                                          std::move(hyp_occ)));
    }
  }
  return set;
}

std::vector<WordConfusionNetwork> parse_wcn_jsonl(const std::string& text) {
  std::vector<WordConfusionNetwork> wcns;
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
      throw ParseError("wcn line " + std::to_string(lineno) +
                       ": invalid JSON (" + std::string(e.what()) + ")");
    }
    if (!rec.contains("id") || !rec.contains("bins")) {
      throw ParseError("wcn line " + std::to_string(lineno) +
                       ": record needs fields id and bins");
    }
    WordConfusionNetwork wcn;
    try {
      wcn.utterance_id = rec.at("id").get<std::string>();
      for (const auto& bin : rec.at("bins")) {
        std::vector<std::pair<std::string, double>> entries;
        double total = 0;
        for (const auto& entry : bin) {
          std::string word = entry.at(0).get<std::string>();
          double posterior = entry.at(1).get<double>();
          if (posterior < 0 || posterior > 1) {
            throw ValidationError("wcn line " + std::to_string(lineno) +
                                  ": posterior out of [0,1]");
          }
          total += posterior;
          entries.emplace_back(std::move(word), posterior);
        }
        if (total > 1.0 + 1e-6) {
          throw ValidationError("wcn line " + std::to_string(lineno) +
                                ": bin posteriors sum to " +
                                std::to_string(total));
        }
        wcn.bins.push_back(std::move(entries));
      }
    } catch (const json::exception& e) {
      throw ParseError("wcn line " + std::to_string(lineno) +
                       ": bad field type (" + std::string(e.what()) + ")");
    }
    wcns.push_back(std::move(wcn));
  }
  return wcns;
}

std::vector<WordConfusionNetwork> load_wcn_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open wcn file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_wcn_jsonl(ss.str());
}

std::string serialize_wcn_jsonl(const std::vector<WordConfusionNetwork>& wcns) {
  std::string out;
  for (const auto& wcn : wcns) {
    json rec;
    rec["id"] = wcn.utterance_id;
    json bins = json::array();
    for (const auto& bin : wcn.bins) {
      json jbin = json::array();
      for (const auto& [word, posterior] : bin) {
        jbin.push_back(json::array({word, posterior}));
      }
      bins.push_back(std::move(jbin));
    }
    rec["bins"] = std::move(bins);
    out += rec.dump();
    out += '\n';
  }
  return out;
}

ConfusionSet extract_confusions_wcn(const std::vector<WordConfusionNetwork>& wcns,
                                    double posterior_threshold) {
  if (posterior_threshold < 0 || posterior_threshold > 1) {
    throw ArgumentError("posterior threshold must lie in [0,1]");
  }
  ConfusionSet set;
  for (const auto& wcn : wcns) {
    for (size_t bin_idx = 0; bin_idx < wcn.bins.size(); ++bin_idx) {
      const auto& bin = wcn.bins[bin_idx];
      for (size_t i = 0; i < bin.size(); ++i) {
        if (bin[i].first == kWcnEpsilon) continue;
        if (bin[i].second < posterior_threshold) continue;
        for (size_t j = i + 1; j < bin.size(); ++j) {
          if (bin[j].first == kWcnEpsilon) continue;
          if (bin[j].second < posterior_threshold) continue;
          if (bin[i].first == bin[j].first) continue;
          Occurrence x{wcn.utterance_id, TokenStream::kAsr, bin_idx,
                       bin[i].first};
          Occurrence y{wcn.utterance_id, TokenStream::kAsr, bin_idx,
                       bin[j].first};
          set.insert(ConfusionPair::canonical(std::move(x), std::move(y)));
        }
      }
    }
  }
  return set;
}

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<WordConfusionNetwork> simulate_wcns(const Dataset& dataset,
                                                const NoiseModel& model,
                                                int max_competitors) {
  std::vector<WordConfusionNetwork> wcns;
  for (const auto& ex : dataset.examples) {
    if (!ex.asr_tokens.has_value()) continue;
    std::mt19937_64 rng(splitmix64(model.seed ^ 0x5743ull ^
                                   splitmix64(stream_id_for(ex.id))));
    WordConfusionNetwork wcn;
    wcn.utterance_id = ex.id;
    for (const auto& tok : *ex.asr_tokens) {
      std::vector<std::pair<std::string, double>> bin;
      std::uniform_real_distribution<double> top(0.55, 0.9);
      double p_top = top(rng);
      bin.emplace_back(tok, p_top);
      double remaining = 1.0 - p_top;
      auto it = model.candidate_pool.find(tok);
      if (it != model.candidate_pool.end() && !it->second.empty()) {
        int count = std::min<int>(max_competitors,
                                  static_cast<int>(it->second.size()));
        double weight_total = 0;
        for (int k = 0; k < count; ++k) weight_total += it->second[k].second;
        for (int k = 0; k < count; ++k) {
          double share = remaining * it->second[k].second / weight_total;
          bin.emplace_back(it->second[k].first, share);
          p_top += share;
        }
        remaining = 1.0 - p_top;
      }
      if (remaining > 1e-9) bin.emplace_back(kWcnEpsilon, remaining);
      wcn.bins.push_back(std::move(bin));
    }
    wcns.push_back(std::move(wcn));
  }
  return wcns;
}

std::string serialize_confusion_set(const ConfusionSet& set) {
  std::string out;
  for (const auto& pair : set.pairs()) {
    auto occ_json = [](const Occurrence& o) {
      json j;
      j["utt"] = o.utterance_id;
      j["stream"] = token_stream_name(o.stream);
      j["pos"] = o.position;
      j["word"] = o.word;
      return j;
    };
    json rec;
    rec["a"] = occ_json(pair.a);
    rec["b"] = occ_json(pair.b);
    out += rec.dump();
    out += '\n';
  }
  return out;
}

ConfusionSet parse_confusion_set(const std::string& text) {
  ConfusionSet set;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      json rec = json::parse(line);
      auto parse_occ = [](const json& j) {
        Occurrence o;
        o.utterance_id = j.at("utt").get<std::string>();
        o.stream = parse_token_stream(j.at("stream").get<std::string>());
        o.position = j.at("pos").get<size_t>();
        o.word = j.at("word").get<std::string>();
        return o;
      };
      set.insert(ConfusionPair::canonical(parse_occ(rec.at("a")),
                                          parse_occ(rec.at("b"))));
    } catch (const json::exception& e) {
      throw ParseError("confusion set line " + std::to_string(lineno) +
                       ": " + std::string(e.what()));
    }
  }
  return set;
}

void save_confusion_set(const ConfusionSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write confusion set: " + path);
  out << serialize_confusion_set(set);
}

ConfusionSet load_confusion_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open confusion set: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_confusion_set(ss.str());
}

}  // namespace crid
