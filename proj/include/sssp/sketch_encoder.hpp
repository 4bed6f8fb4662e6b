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

#include <atomic>
#include <vector>

#include "sssp/generator.hpp"

namespace sssp {

struct SketchEncoderOptions {
  int64_t input_resolution = 512;
  int64_t latent_dim = 512;
  LatentMode mode = LatentMode::kW;
  /// Number of per-layer heads in W+ mode (the generator's modulated layer count).
  int64_t wplus_layers = 1;
  std::vector<int64_t> widths{16, 32, 64, 128};
  std::vector<int64_t> blocks{1, 1, 1, 1};
  /// ResNet-34 topology: 7x7 stem + max-pool, widths 64..512, blocks 3-4-6-3.
  bool resnet34 = false;

  static SketchEncoderOptions resnet34_preset(int64_t input_resolution, int64_t latent_dim);
};

class ResidualBlockImpl : public torch::nn::Module {
 public:
  ResidualBlockImpl(int64_t in_channels, int64_t out_channels, int64_t stride);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  torch::nn::Conv2d conv1_{nullptr};
  torch::nn::Conv2d conv2_{nullptr};
  torch::nn::Conv2d shortcut_{nullptr};
};
TORCH_MODULE(ResidualBlock);

/// Residual convolutional encoder from a grayscale sketch to a W or W+ code.
class SketchEncoderImpl : public torch::nn::Module {
 public:
  explicit SketchEncoderImpl(const SketchEncoderOptions& options);

  /// sketches: [B, 1, H, H] with values in [0, 1].
  LatentCode forward(const torch::Tensor& sketches);

  const SketchEncoderOptions& options() const { return options_; }
  int64_t calls() const { return calls_.load(); }

 private:
  SketchEncoderOptions options_;
  torch::nn::Conv2d stem_{nullptr};
  torch::nn::Sequential stages_{nullptr};
  std::vector<torch::nn::Linear> heads_;
  std::atomic<int64_t> calls_{0};
};
TORCH_MODULE(SketchEncoder);

}  // namespace sssp
