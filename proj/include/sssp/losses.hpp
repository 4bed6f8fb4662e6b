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
#include <vector>

#include "sssp/triplane.hpp"

namespace sssp {

/// Frozen multi-scale feature pyramid standing in for VGG activations: each
/// stage is a stride-2 3x3 convolution followed by softplus, with weights drawn
/// from a fixed seed.
class PerceptualExtractorImpl : public torch::nn::Module {
 public:
  explicit PerceptualExtractorImpl(int64_t stages = 3, int64_t in_channels = 3, uint64_t seed = 1234);

  std::vector<torch::Tensor> forward(const torch::Tensor& images);
  int64_t stages() const { return static_cast<int64_t>(convs_.size()); }

 private:
  std::vector<torch::nn::Conv2d> convs_;
};
TORCH_MODULE(PerceptualExtractor);

/// Mean absolute pixel error plus the mean absolute feature error of every
/// extractor stage. `extractor` may be null to disable the feature term.
torch::Tensor recon_loss(const torch::Tensor& a, const torch::Tensor& b, PerceptualExtractorImpl* extractor);

/// Sum of recon_loss over the four (left eye, right eye, nose, mouth) pairs.
torch::Tensor region_loss(const std::vector<torch::Tensor>& renders, const std::vector<torch::Tensor>& targets,
                          PerceptualExtractorImpl* extractor);

/// mean |F_S - flip(F_Sbar)| over all three planes. Accepts TriPlane tensors
/// [3, C, R, R] or batches [B, 3, C, R, R].
torch::Tensor symmetry_loss(const torch::Tensor& planes, const torch::Tensor& flipped_sketch_planes);
torch::Tensor symmetry_loss(const TriPlane& planes, const TriPlane& flipped_sketch_planes);

struct LossWeights {
  double recon = 1.0;
  double region = 1.0;
  double symmetry = 0.1;
};

struct EncoderLossInputs {
  torch::Tensor rgb;                   // [B, 3, h, h]
  torch::Tensor target_low;            // [B, 3, h, h]
  std::vector<torch::Tensor> region_renders;  // 4 x [B, 3, h, h]; empty skips the term
  std::vector<torch::Tensor> region_targets;
  torch::Tensor planes;                // [B, 3, C, R, R]; undefined skips the term
  torch::Tensor flipped_planes;
};

struct EncoderLossBreakdown {
  torch::Tensor recon;
  torch::Tensor region;
  torch::Tensor symmetry;
  torch::Tensor total;
};

/// recon * L_re + region * L_re^R + symmetry * L_sym, with each unweighted term reported.
EncoderLossBreakdown total_encoder_loss(const EncoderLossInputs& inputs, const LossWeights& weights,
                                        PerceptualExtractorImpl* extractor);

}  // namespace sssp
