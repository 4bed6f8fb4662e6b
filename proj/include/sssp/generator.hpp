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
#include <cstdint>
#include <string>

#include "sssp/triplane.hpp"

namespace sssp {

enum class LatentMode { kW, kWPlus };

std::string latent_mode_name(LatentMode mode);
LatentMode latent_mode_from_string(const std::string& name);

/// Batched latent codes: [B, d] in W mode, [B, L, d] in W+ mode.
struct LatentCode {
  LatentMode mode = LatentMode::kW;
  torch::Tensor codes;

  int64_t batch() const { return codes.size(0); }
  int64_t dim() const { return codes.size(-1); }
  /// Code driving modulated layer `layer` as [B, d].
  torch::Tensor layer(int64_t layer) const;
};

/// Repeats a W code once per modulated layer.
LatentCode broadcast_to_wplus(const LatentCode& code, int64_t layers);

/// StyleGAN2-style convolution: per-sample weight modulation by an affine
/// projection of the latent, optional demodulation.
class ModulatedConv2dImpl : public torch::nn::Module {
 public:
  ModulatedConv2dImpl(int64_t latent_dim, int64_t in_channels, int64_t out_channels, int64_t kernel,
                      bool demodulate);

  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& latent);

 private:
  int64_t in_channels_;
  int64_t out_channels_;
  int64_t kernel_;
  bool demodulate_;
  torch::Tensor weight_;
  torch::Tensor bias_;
  torch::nn::Linear affine_{nullptr};
};
TORCH_MODULE(ModulatedConv2d);

struct GeneratorOptions {
  int64_t latent_dim = 512;
  int64_t triplane_resolution = 256;
  int64_t triplane_channels = 32;
  int64_t backbone_channels = 64;
  /// Channels of the rendered feature image; the first three are RGB.
  int64_t feature_channels = 32;
  int64_t decoder_hidden = 64;
  int64_t render_resolution = 128;
  int64_t upsample_factor = 4;
  int64_t superres_channels = 32;
  double extent = 1.0;

  void validate() const;
  int64_t output_resolution() const { return render_resolution * upsample_factor; }
};

/// Latent -> tri-plane backbone, the per-point decoder, and the modulated
/// super-resolution head that lifts the rendered feature image.
class GeneratorImpl : public torch::nn::Module {
 public:
  explicit GeneratorImpl(const GeneratorOptions& options);

  const GeneratorOptions& options() const { return options_; }

  int64_t backbone_layers() const;
  int64_t superres_layers() const;
  int64_t num_layers() const { return backbone_layers() + superres_layers(); }

  /// Raw backbone output split into planes: [B, 3, C_t, R, R].
  torch::Tensor synthesize_planes(const LatentCode& latent);

  /// Single-sample convenience wrapper.
  TriPlane synthesize_triplane(const LatentCode& latent);

  /// [B, C, h, h] feature images -> [B, 3, h*k, h*k].
  torch::Tensor upsample(const torch::Tensor& feature_images, const LatentCode& latent);

  PointDecoderImpl& decoder() { return *decoder_; }
  PointDecoder decoder_module() const { return decoder_; }

  torch::nn::Module& backbone() { return *backbone_; }
  torch::nn::Module& superres() { return *sr_; }

  /// Number of backbone forward passes since construction.
  int64_t backbone_calls() const { return backbone_calls_.load(); }

 private:
  void check_latent(const LatentCode& latent) const;

  GeneratorOptions options_;
  std::shared_ptr<torch::nn::Module> backbone_;
  std::shared_ptr<torch::nn::Module> sr_;
  PointDecoder decoder_{nullptr};

  torch::Tensor constant_;
  std::vector<ModulatedConv2d> backbone_convs_;
  ModulatedConv2d to_planes_{nullptr};
  std::vector<ModulatedConv2d> sr_convs_;
  ModulatedConv2d to_rgb_{nullptr};

  std::atomic<int64_t> backbone_calls_{0};
};
TORCH_MODULE(Generator);

}  // namespace sssp
