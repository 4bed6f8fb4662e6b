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

#include "sssp/sketch_encoder.hpp"

#include "sssp/error.hpp"

namespace sssp {

namespace F = torch::nn::functional;

namespace {

torch::Tensor lrelu(const torch::Tensor& x) {
  return F::leaky_relu(x, F::LeakyReLUFuncOptions().negative_slope(0.2));
}

}  // namespace

SketchEncoderOptions SketchEncoderOptions::resnet34_preset(int64_t input_resolution, int64_t latent_dim) {
  SketchEncoderOptions o;
  o.input_resolution = input_resolution;
  o.latent_dim = latent_dim;
  o.widths = {64, 128, 256, 512};
  o.blocks = {3, 4, 6, 3};
  o.resnet34 = true;
  return o;
}

ResidualBlockImpl::ResidualBlockImpl(int64_t in_channels, int64_t out_channels, int64_t stride) {
  conv1_ = register_module("conv1", torch::nn::Conv2d(torch::nn::Conv2dOptions(in_channels, out_channels, 3)
                                                          .stride(stride)
                                                          .padding(1)));
  conv2_ = register_module("conv2",
                           torch::nn::Conv2d(torch::nn::Conv2dOptions(out_channels, out_channels, 3).padding(1)));
  if (stride != 1 || in_channels != out_channels) {
    shortcut_ = register_module(
        "shortcut", torch::nn::Conv2d(torch::nn::Conv2dOptions(in_channels, out_channels, 1).stride(stride)));
  }
  // Residual branch starts small so deep stacks behave like identities at init.
  torch::NoGradGuard no_grad;
  conv2_->weight.mul_(0.1);
}

torch::Tensor ResidualBlockImpl::forward(const torch::Tensor& x) {
  const torch::Tensor skip = shortcut_ ? shortcut_(x) : x;
  return lrelu(skip + conv2_(lrelu(conv1_(x))));
}

SketchEncoderImpl::SketchEncoderImpl(const SketchEncoderOptions& options) : options_(options) {
  SSSP_CHECK(!options_.widths.empty() && options_.widths.size() == options_.blocks.size(),
             ErrorCode::kInvalidArgument, "encoder widths and blocks must align");
  SSSP_CHECK(options_.latent_dim >= 1 && options_.input_resolution >= 4, ErrorCode::kInvalidArgument,
             "invalid encoder sizes");
  if (options_.mode == LatentMode::kWPlus) {
    SSSP_CHECK(options_.wplus_layers >= 1, ErrorCode::kInvalidArgument, "W+ needs at least one layer");
  }

  const int64_t w0 = options_.widths.front();
  if (options_.resnet34) {
    stem_ = register_module("stem",
                            torch::nn::Conv2d(torch::nn::Conv2dOptions(1, w0, 7).stride(2).padding(3)));
  } else {
    stem_ = register_module("stem",
                            torch::nn::Conv2d(torch::nn::Conv2dOptions(1, w0, 3).stride(2).padding(1)));
  }

  stages_ = register_module("stages", torch::nn::Sequential());
  int64_t in = w0;
  for (size_t s = 0; s < options_.widths.size(); ++s) {
    for (int64_t b = 0; b < options_.blocks[s]; ++b) {
      const int64_t stride = (b == 0 && (s > 0 || !options_.resnet34)) ? 2 : 1;
      stages_->push_back(ResidualBlock(in, options_.widths[s], stride));
      in = options_.widths[s];
    }
  }

  const int64_t head_count = options_.mode == LatentMode::kW ? 1 : options_.wplus_layers;
  for (int64_t i = 0; i < head_count; ++i) {
    heads_.push_back(register_module("head" + std::to_string(i), torch::nn::Linear(in, options_.latent_dim)));
  }
}

LatentCode SketchEncoderImpl::forward(const torch::Tensor& sketches) {
  SSSP_CHECK(sketches.dim() == 4 && sketches.size(1) == 1 &&
                 sketches.size(2) == options_.input_resolution &&
                 sketches.size(3) == options_.input_resolution,
             ErrorCode::kShapeMismatch,
             "sketch batch must be [B, 1, " + std::to_string(options_.input_resolution) + ", " +
                 std::to_string(options_.input_resolution) + "]");
  calls_.fetch_add(1);
  torch::Tensor x = lrelu(stem_(sketches * 2.0 - 1.0));
  if (options_.resnet34) {
    x = F::max_pool2d(x, F::MaxPool2dFuncOptions(3).stride(2).padding(1));
  }
  x = stages_->forward(x);
  x = x.mean({2, 3});
  if (options_.mode == LatentMode::kW) {
    return {LatentMode::kW, heads_.front()(x)};
  }
  std::vector<torch::Tensor> layers;
  layers.reserve(heads_.size());
  for (auto& head : heads_) {
    layers.push_back(head(x));
  }
  return {LatentMode::kWPlus, torch::stack(layers, 1)};
}

}  // namespace sssp
