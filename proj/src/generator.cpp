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

#include "sssp/generator.hpp"

#include <bit>
#include <cmath>

#include "sssp/error.hpp"

namespace sssp {

namespace F = torch::nn::functional;

std::string latent_mode_name(LatentMode mode) { return mode == LatentMode::kW ? "W" : "Wplus"; }

LatentMode latent_mode_from_string(const std::string& name) {
  if (name == "W" || name == "w") return LatentMode::kW;
  if (name == "Wplus" || name == "W+" || name == "wplus") return LatentMode::kWPlus;
  throw Error(ErrorCode::kInvalidArgument, "unknown latent mode: " + name);
}

torch::Tensor LatentCode::layer(int64_t layer) const {
  return mode == LatentMode::kW ? codes : codes.select(1, layer);
}

LatentCode broadcast_to_wplus(const LatentCode& code, int64_t layers) {
  SSSP_CHECK(code.mode == LatentMode::kW, ErrorCode::kInvalidArgument, "code is already W+");
  return {LatentMode::kWPlus, code.codes.unsqueeze(1).expand({-1, layers, -1}).contiguous()};
}

ModulatedConv2dImpl::ModulatedConv2dImpl(int64_t latent_dim, int64_t in_channels, int64_t out_channels,
                                         int64_t kernel, bool demodulate)
    : in_channels_(in_channels), out_channels_(out_channels), kernel_(kernel), demodulate_(demodulate) {
  const double fan_in = static_cast<double>(in_channels * kernel * kernel);
  torch::Tensor w = torch::randn({out_channels, in_channels, kernel, kernel});
  if (!demodulate) {
    w = w / std::sqrt(fan_in);
  }
  weight_ = register_parameter("weight", w);
  bias_ = register_parameter("bias", torch::zeros({out_channels}));
  affine_ = register_module("affine", torch::nn::Linear(latent_dim, in_channels));
  torch::NoGradGuard no_grad;
  affine_->bias.fill_(1.0);
}

torch::Tensor ModulatedConv2dImpl::forward(const torch::Tensor& x, const torch::Tensor& latent) {
  const int64_t batch = x.size(0);
  const torch::Tensor styles = affine_(latent);
  torch::Tensor w = weight_.unsqueeze(0) * styles.view({batch, 1, in_channels_, 1, 1});
  if (demodulate_) {
    w = w * torch::rsqrt(w.pow(2).sum({2, 3, 4}, /*keepdim=*/true) + 1e-8);
  }
  const torch::Tensor grouped = x.reshape({1, batch * in_channels_, x.size(2), x.size(3)});
  torch::Tensor out = F::conv2d(
      grouped, w.reshape({batch * out_channels_, in_channels_, kernel_, kernel_}),
      F::Conv2dFuncOptions().padding(kernel_ / 2).groups(batch));
  out = out.reshape({batch, out_channels_, x.size(2), x.size(3)});
  return out + bias_.view({1, -1, 1, 1});
}

void GeneratorOptions::validate() const {
  SSSP_CHECK(latent_dim >= 1, ErrorCode::kInvalidArgument, "latent_dim must be positive");
  SSSP_CHECK(triplane_resolution >= 4 && std::has_single_bit(static_cast<uint64_t>(triplane_resolution)),
             ErrorCode::kInvalidArgument, "triplane_resolution must be a power of two >= 4");
  SSSP_CHECK(upsample_factor >= 1 && std::has_single_bit(static_cast<uint64_t>(upsample_factor)),
             ErrorCode::kInvalidArgument, "upsample_factor must be a power of two");
  SSSP_CHECK(feature_channels >= 3, ErrorCode::kInvalidArgument, "feature_channels must be >= 3");
  SSSP_CHECK(triplane_channels >= 1 && backbone_channels >= 1 && superres_channels >= 1,
             ErrorCode::kInvalidArgument, "channel counts must be positive");
  SSSP_CHECK(render_resolution >= 1, ErrorCode::kInvalidArgument, "render_resolution must be positive");
}

namespace {

int64_t log2_exact(int64_t v) { return std::countr_zero(static_cast<uint64_t>(v)); }

}  // namespace

GeneratorImpl::GeneratorImpl(const GeneratorOptions& options) : options_(options) {
  options_.validate();
  const int64_t d = options_.latent_dim;
  const int64_t cb = options_.backbone_channels;

  backbone_ = register_module("backbone", std::make_shared<torch::nn::Module>());
  constant_ = backbone_->register_parameter("const", torch::randn({1, cb, 4, 4}));
  const int64_t up_blocks = log2_exact(options_.triplane_resolution) - 2;
  for (int64_t i = 0; i <= up_blocks; ++i) {
    backbone_convs_.push_back(backbone_->register_module("conv" + std::to_string(i),
                                                         ModulatedConv2d(d, cb, cb, 3, true)));
  }
  to_planes_ = backbone_->register_module(
      "to_planes", ModulatedConv2d(d, cb, 3 * options_.triplane_channels, 1, false));

  sr_ = register_module("sr", std::make_shared<torch::nn::Module>());
  int64_t in = options_.feature_channels;
  for (int64_t i = 0; i < log2_exact(options_.upsample_factor); ++i) {
    sr_convs_.push_back(sr_->register_module("conv" + std::to_string(i),
                                             ModulatedConv2d(d, in, options_.superres_channels, 3, true)));
    in = options_.superres_channels;
  }
  to_rgb_ = sr_->register_module("to_rgb", ModulatedConv2d(d, in, 3, 1, false));

  decoder_ = register_module("decoder", PointDecoder(PointDecoderOptions{
                                            options_.triplane_channels, options_.decoder_hidden,
                                            options_.feature_channels}));
}

int64_t GeneratorImpl::backbone_layers() const {
  return static_cast<int64_t>(backbone_convs_.size()) + 1;
}

int64_t GeneratorImpl::superres_layers() const { return static_cast<int64_t>(sr_convs_.size()) + 1; }

void GeneratorImpl::check_latent(const LatentCode& latent) const {
  SSSP_CHECK(latent.codes.defined(), ErrorCode::kInvalidArgument, "latent code is empty");
  SSSP_CHECK(latent.dim() == options_.latent_dim, ErrorCode::kShapeMismatch,
             "latent dimension does not match the generator");
  if (latent.mode == LatentMode::kW) {
    SSSP_CHECK(latent.codes.dim() == 2, ErrorCode::kShapeMismatch, "W codes must be [B, d]");
  } else {
    SSSP_CHECK(latent.codes.dim() == 3 && latent.codes.size(1) == num_layers(),
               ErrorCode::kShapeMismatch,
               "W+ codes must be [B, " + std::to_string(num_layers()) + ", d]");
  }
  SSSP_CHECK(torch::isfinite(latent.codes).all().item<bool>(), ErrorCode::kNonFinite,
             "latent code contains non-finite values");
}

torch::Tensor GeneratorImpl::synthesize_planes(const LatentCode& latent) {
  check_latent(latent);
  backbone_calls_.fetch_add(1);
  const int64_t batch = latent.batch();
  torch::Tensor x = constant_.expand({batch, -1, -1, -1}).to(latent.codes.dtype());
  int64_t layer = 0;
  for (size_t i = 0; i < backbone_convs_.size(); ++i) {
    if (i > 0) {
      x = F::interpolate(x, F::InterpolateFuncOptions()
                                .scale_factor(std::vector<double>{2.0, 2.0})
                                .mode(torch::kBilinear)
                                .align_corners(false));
    }
    x = F::leaky_relu(backbone_convs_[i]->forward(x, latent.layer(layer++)),
                      F::LeakyReLUFuncOptions().negative_slope(0.2));
  }
  x = to_planes_->forward(x, latent.layer(layer));
  const int64_t r = options_.triplane_resolution;
  return x.reshape({batch, 3, options_.triplane_channels, r, r});
}

TriPlane GeneratorImpl::synthesize_triplane(const LatentCode& latent) {
  SSSP_CHECK(latent.batch() == 1, ErrorCode::kShapeMismatch, "expected a single latent code");
  return TriPlane(synthesize_planes(latent)[0], options_.extent);
}

torch::Tensor GeneratorImpl::upsample(const torch::Tensor& feature_images, const LatentCode& latent) {
  check_latent(latent);
  SSSP_CHECK(feature_images.dim() == 4 && feature_images.size(1) == options_.feature_channels &&
                 feature_images.size(2) == options_.render_resolution &&
                 feature_images.size(3) == options_.render_resolution,
             ErrorCode::kShapeMismatch, "feature image must be [B, C, h, h]");
  SSSP_CHECK(feature_images.size(0) == latent.batch(), ErrorCode::kShapeMismatch,
             "feature image and latent batch sizes differ");
  const double k = static_cast<double>(options_.upsample_factor);
  auto up = [](const torch::Tensor& t, double factor) {
    return F::interpolate(t, F::InterpolateFuncOptions()
                                 .scale_factor(std::vector<double>{factor, factor})
                                 .mode(torch::kBilinear)
                                 .align_corners(false));
  };
  const torch::Tensor skip = up(feature_images.narrow(1, 0, 3), k);
  int64_t layer = backbone_layers();
  torch::Tensor x = feature_images;
  for (auto& conv : sr_convs_) {
    x = F::leaky_relu(conv->forward(up(x, 2.0), latent.layer(layer++)),
                      F::LeakyReLUFuncOptions().negative_slope(0.2));
  }
  return skip + to_rgb_->forward(x, latent.layer(layer));
}

}  // namespace sssp
