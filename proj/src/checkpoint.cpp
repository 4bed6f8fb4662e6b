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

#include "sssp/checkpoint.hpp"

#include <cstring>

#include "sssp/error.hpp"
#include "sssp/image.hpp"

namespace sssp {

namespace {

constexpr char kMagic[8] = {'S', 'S', 'S', 'P', 'C', 'K', 'P', 'T'};

enum DtypeTag : uint8_t { kF32 = 1, kF64 = 2, kI64 = 3, kI32 = 4, kU8 = 5 };

uint8_t dtype_tag(torch::ScalarType t) {
  switch (t) {
    case torch::kFloat32: return kF32;
    case torch::kFloat64: return kF64;
    case torch::kInt64: return kI64;
    case torch::kInt32: return kI32;
    case torch::kUInt8: return kU8;
    default: throw Error(ErrorCode::kInvalidArgument, "unsupported checkpoint dtype");
  }
}

torch::ScalarType tag_dtype(uint8_t tag) {
  switch (tag) {
    case kF32: return torch::kFloat32;
    case kF64: return torch::kFloat64;
    case kI64: return torch::kInt64;
    case kI32: return torch::kInt32;
    case kU8: return torch::kUInt8;
    default: throw Error(ErrorCode::kIo, "unknown dtype tag in checkpoint");
  }
}

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

void put_bytes(std::string& out, std::string_view bytes) {
  put<uint64_t>(out, bytes.size());
  out.append(bytes);
}

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string_view bytes() {
    const auto n = get<uint64_t>();
    need(n);
    const std::string_view s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == data_.size(); }

 private:
  void need(uint64_t n) const {
    SSSP_CHECK(n <= data_.size() - pos_, ErrorCode::kIo, "truncated checkpoint");
  }

  std::string_view data_;
  size_t pos_ = 0;
};

}  // namespace

std::string Checkpoint::serialize() const {
  std::string out(kMagic, sizeof(kMagic));
  put<uint32_t>(out, version);
  put<uint64_t>(out, step);
  put_bytes(out, config.dump());  // nlohmann objects iterate in key order
  put<uint64_t>(out, tensors.size());
  for (const auto& [name, tensor] : tensors) {
    put_bytes(out, name);
    const torch::Tensor t = tensor.detach().cpu().contiguous();
    put<uint8_t>(out, dtype_tag(t.scalar_type()));
    put<uint8_t>(out, static_cast<uint8_t>(t.dim()));
    for (const int64_t d : t.sizes()) put<int64_t>(out, d);
    put_bytes(out, std::string_view(static_cast<const char*>(t.data_ptr()), t.nbytes()));
  }
  return out;
}

Checkpoint Checkpoint::deserialize(std::string_view bytes) {
  SSSP_CHECK(bytes.size() >= sizeof(kMagic) && std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) == 0,
             ErrorCode::kIo, "not a checkpoint file");
  Reader in(bytes.substr(sizeof(kMagic)));
  Checkpoint c;
  c.version = in.get<uint32_t>();
  SSSP_CHECK(c.version == kCheckpointVersion, ErrorCode::kIo,
             "unsupported checkpoint version " + std::to_string(c.version));
  c.step = in.get<uint64_t>();
  try {
    c.config = nlohmann::json::parse(in.bytes());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kIo, std::string("corrupt checkpoint config: ") + e.what());
  }
  const auto count = in.get<uint64_t>();
  for (uint64_t i = 0; i < count; ++i) {
    std::string name(in.bytes());
    const torch::ScalarType dtype = tag_dtype(in.get<uint8_t>());
    const auto ndim = in.get<uint8_t>();
    std::vector<int64_t> dims(ndim);
    for (auto& d : dims) {
      d = in.get<int64_t>();
      SSSP_CHECK(d >= 0, ErrorCode::kIo, "negative dimension in checkpoint");
    }
    const std::string_view raw = in.bytes();
    torch::Tensor t = torch::empty(dims, torch::TensorOptions().dtype(dtype));
    SSSP_CHECK(raw.size() == t.nbytes(), ErrorCode::kIo, "size mismatch for checkpoint entry " + name);
    std::memcpy(t.data_ptr(), raw.data(), raw.size());
    c.tensors.emplace(std::move(name), std::move(t));
  }
  SSSP_CHECK(in.done(), ErrorCode::kIo, "trailing bytes after checkpoint");
  return c;
}

void Checkpoint::save(const std::filesystem::path& path) const { write_file(path, serialize()); }

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  SSSP_CHECK(std::filesystem::exists(path), ErrorCode::kNotFound, "checkpoint not found: " + path.string());
  return deserialize(read_file(path));
}

std::vector<std::string> Checkpoint::names_with_prefix(const std::string& prefix) const {
  std::vector<std::string> names;
  for (auto it = tensors.lower_bound(prefix); it != tensors.end() && it->first.starts_with(prefix); ++it) {
    names.push_back(it->first);
  }
  return names;
}

void store_module(Checkpoint& ckpt, const std::string& prefix, const torch::nn::Module& module) {
  for (const auto& item : module.named_parameters(true)) {
    ckpt.tensors[prefix + "." + item.key()] = item.value().detach().clone();
  }
  for (const auto& item : module.named_buffers(true)) {
    ckpt.tensors[prefix + "." + item.key()] = item.value().detach().clone();
  }
}

void restore_module(const Checkpoint& ckpt, const std::string& prefix, torch::nn::Module& module) {
  torch::NoGradGuard no_grad;
  auto assign = [&](const std::string& key, torch::Tensor& target) {
    const std::string name = prefix + "." + key;
    const auto it = ckpt.tensors.find(name);
    SSSP_CHECK(it != ckpt.tensors.end(), ErrorCode::kNotFound, "checkpoint lacks " + name);
    SSSP_CHECK(it->second.sizes() == target.sizes(), ErrorCode::kShapeMismatch, "shape mismatch for " + name);
    target.copy_(it->second);
  };
  for (auto& item : module.named_parameters(true)) assign(item.key(), item.value());
  for (auto& item : module.named_buffers(true)) assign(item.key(), item.value());
}

}  // namespace sssp
