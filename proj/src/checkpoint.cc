// src/checkpoint.cc

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

#include "crid/checkpoint.h"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "crid/error.h"

namespace crid {

namespace {

constexpr char kMagic[4] = {'C', 'R', 'C', 'K'};
constexpr uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ParseError("checkpoint: truncated file");
  return value;
}

}  // namespace

void Checkpoint::add(const std::string& name, const nn::Mat& tensor) {
  tensors_.emplace_back(name, tensor);
}

void Checkpoint::add_params(const std::vector<nn::Parameter*>& params) {
  for (const nn::Parameter* p : params) add(p->name, p->value);
}

const nn::Mat& Checkpoint::tensor(const std::string& name) const {
  for (const auto& [key, value] : tensors_) {
    if (key == name) return value;
  }
  throw ArgumentError("checkpoint: no tensor named '" + name + "'");
}

bool Checkpoint::has_tensor(const std::string& name) const {
  for (const auto& [key, value] : tensors_) {
    if (key == name) return true;
  }
  return false;
}

void Checkpoint::load_into(const std::vector<nn::Parameter*>& params) const {
  for (nn::Parameter* p : params) {
    const nn::Mat& stored = tensor(p->name);
    if (stored.rows() != p->value.rows() || stored.cols() != p->value.cols()) {
      throw ValidationError("checkpoint: shape mismatch for '" + p->name +
                            "'");
    }
    p->value = stored;
  }
}

void Checkpoint::save(const std::string& path) const {
  nlohmann::json header = metadata;
  nlohmann::json manifest = nlohmann::json::array();
  for (const auto& [name, tensor] : tensors_) {
    manifest.push_back({{"name", name},
                        {"rows", tensor.rows()},
                        {"cols", tensor.cols()}});
  }
  header["__tensors__"] = std::move(manifest);
  const std::string header_bytes = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kVersion);
  write_pod(out, static_cast<uint64_t>(header_bytes.size()));
  out.write(header_bytes.data(),
            static_cast<std::streamsize>(header_bytes.size()));
  for (const auto& [name, tensor] : tensors_) {
    out.write(reinterpret_cast<const char*>(tensor.data()),
              static_cast<std::streamsize>(tensor.size() * sizeof(double)));
  }
  if (!out) throw ValidationError("short write on checkpoint: " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open checkpoint: " + path);
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("checkpoint: bad magic in " + path);
  }
  uint32_t version = read_pod<uint32_t>(in);
  if (version != kVersion) {
    throw ParseError("checkpoint: unsupported version " +
                     std::to_string(version));
  }
  uint64_t header_len = read_pod<uint64_t>(in);
  std::string header_bytes(header_len, '\0');
  in.read(header_bytes.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw ParseError("checkpoint: truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_bytes);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("checkpoint: bad header JSON (" + std::string(e.what()) +
                     ")");
  }

  Checkpoint ckpt;
  nlohmann::json manifest = header.at("__tensors__");
  header.erase("__tensors__");
  ckpt.metadata = std::move(header);
  for (const auto& entry : manifest) {
    nn::Mat tensor(entry.at("rows").get<Eigen::Index>(),
                   entry.at("cols").get<Eigen::Index>());
    in.read(reinterpret_cast<char*>(tensor.data()),
            static_cast<std::streamsize>(tensor.size() * sizeof(double)));
    if (!in) throw ParseError("checkpoint: truncated tensor data");
    ckpt.tensors_.emplace_back(entry.at("name").get<std::string>(),
                               std::move(tensor));
  }
  return ckpt;
}

}  // namespace crid
