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

#include "sssp/losses.hpp"

#include "sssp/error.hpp"

namespace sssp {

PerceptualExtractorImpl::PerceptualExtractorImpl(int64_t stages, int64_t in_channels, uint64_t seed) {
  SSSP_CHECK(stages >= 1, ErrorCode::kInvalidArgument, "perceptual extractor needs at least one stage");
  auto gen = at::make_generator<at::CPUGeneratorImpl>(seed);
  int64_t in = in_channels;
  int64_t out = 16;
  for (int64_t s = 0; s < stages; ++s) {
    auto conv = register_module("conv" + std::to_string(s),
                                torch::nn::Conv2d(torch::nn::Conv2dOptions(in, out, 3).stride(2).padding(1)));
    torch::NoGradGuard no_grad;
    conv->weight.copy_(torch::randn(conv->weight.sizes(), gen) / std::sqrt(static_cast<double>(in * 9)));
    conv->bias.zero_();
    conv->weight.set_requires_grad(false);
    conv->bias.set_requires_grad(false);
    convs_.push_back(conv);
    in = out;
    out *= 2;
  }
}

std::vector<torch::Tensor> PerceptualExtractorImpl::forward(const torch::Tensor& images) {
  std::vector<torch::Tensor> features;
  torch::Tensor x = images;
  for (auto& conv : convs_) {
    // Stages stop once the spatial size can no longer be halved.
    if (x.size(-1) < 2 || x.size(-2) < 2) {
      break;
    }
    x = torch::softplus(conv(x));
    features.push_back(x);
  }
  return features;
}

torch::Tensor recon_loss(const torch::Tensor& a, const torch::Tensor& b, PerceptualExtractorImpl* extractor) {
  SSSP_CHECK(a.sizes() == b.sizes(), ErrorCode::kShapeMismatch, "recon_loss inputs differ in shape");
  torch::Tensor loss = (a - b).abs().mean();
  if (extractor != nullptr) {
    const auto fa = extractor->forward(a.dim() == 3 ? a.unsqueeze(0) : a);
    const auto fb = extractor->forward(b.dim() == 3 ? b.unsqueeze(0) : b);
    for (size_t m = 0; m < fa.size(); ++m) {
      loss = loss + (fa[m] - fb[m]).abs().mean();
    }
  }
  return loss;
}

torch::Tensor region_loss(const std::vector<torch::Tensor>& renders, const std::vector<torch::Tensor>& targets,
                          PerceptualExtractorImpl* extractor) {
  SSSP_CHECK(renders.size() == 4 && targets.size() == 4, ErrorCode::kShapeMismatch,
             "region loss expects exactly four region pairs");
  torch::Tensor loss = recon_loss(renders[0], targets[0], extractor);
  for (size_t i = 1; i < 4; ++i) {
    loss = loss + recon_loss(renders[i], targets[i], extractor);
  }
  return loss;
}

torch::Tensor symmetry_loss(const torch::Tensor& planes, const torch::Tensor& flipped_sketch_planes) {
  SSSP_CHECK(planes.sizes() == flipped_sketch_planes.sizes(), ErrorCode::kShapeMismatch,
             "symmetry loss inputs differ in shape");
  return (planes - flip_planes(flipped_sketch_planes)).abs().mean();
}

torch::Tensor symmetry_loss(const TriPlane& planes, const TriPlane& flipped_sketch_planes) {
  return symmetry_loss(planes.planes(), flipped_sketch_planes.planes());
}

EncoderLossBreakdown total_encoder_loss(const EncoderLossInputs& inputs, const LossWeights& weights,
                                        PerceptualExtractorImpl* extractor) {
  EncoderLossBreakdown out;
  const auto zero = torch::zeros({}, inputs.rgb.options());
  out.recon = recon_loss(inputs.rgb, inputs.target_low, extractor);
  out.region = inputs.region_renders.empty() ? zero
                                             : region_loss(inputs.region_renders, inputs.region_targets, extractor);
  out.symmetry = inputs.planes.defined() ? symmetry_loss(inputs.planes, inputs.flipped_planes) : zero;
  out.total = weights.recon * out.recon + weights.region * out.region + weights.symmetry * out.symmetry;
  return out;
}

}  // namespace sssp
