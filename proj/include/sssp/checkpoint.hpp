// Copyright 2026 The SSSP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace sssp {

inline constexpr uint32_t kCheckpointVersion = 1;

/// Named tensors plus the training config and step counter.
///
/// File layout (little endian):
///   "SSSPCKPT" | u32 version | u64 step | u64 len + config JSON (sorted keys)
///   | u64 count | count x { u64 len + name | u8 dtype | u8 ndim | ndim x i64
///   | u64 nbytes + raw data }
/// Entries are written in name order, so save -> load -> save is byte-identical.
struct Checkpoint {
  uint32_t version = kCheckpointVersion;
  uint64_t step = 0;
  nlohmann::json config = nlohmann::json::object();
  std::map<std::string, torch::Tensor> tensors;

  std::string serialize() const;
  static Checkpoint deserialize(std::string_view bytes);

  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);

  /// Keys starting with `prefix`.
  std::vector<std::string> names_with_prefix(const std::string& prefix) const;
};

/// Copies every parameter and buffer of `module` under `prefix + "." + name`.
void store_module(Checkpoint& ckpt, const std::string& prefix, const torch::nn::Module& module);

/// Loads `prefix.*` entries into `module`. Every module tensor must be present
/// with a matching shape (kNotFound / kShapeMismatch otherwise).
void restore_module(const Checkpoint& ckpt, const std::string& prefix, torch::nn::Module& module);

}  // namespace sssp
