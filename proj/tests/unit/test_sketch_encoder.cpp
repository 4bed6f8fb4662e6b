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

#include <gtest/gtest.h>
#include <torch/torch.h>

#include "gradcheck.hpp"
#include "sssp/error.hpp"
#include "sssp/sketch_encoder.hpp"

namespace sssp {
namespace {

SketchEncoderOptions toy(LatentMode mode = LatentMode::kW) {
  SketchEncoderOptions o;
  o.input_resolution = 32;
  o.latent_dim = 8;
  o.mode = mode;
  o.wplus_layers = 5;
  o.widths = {4, 8, 8, 8};
  return o;
}

TEST(SketchEncoder, BlankSketchGivesFiniteCode) {
  SketchEncoder enc(toy());
  torch::NoGradGuard no_grad;
  const LatentCode code = enc->forward(torch::ones({1, 1, 32, 32}));
  EXPECT_EQ(code.mode, LatentMode::kW);
  EXPECT_EQ(code.codes.sizes(), (std::vector<int64_t>{1, 8}));
  EXPECT_TRUE(torch::isfinite(code.codes).all().item<bool>());
}

TEST(SketchEncoder, Deterministic) {
  torch::manual_seed(1);
  SketchEncoder enc(toy());
  enc->eval();
  torch::NoGradGuard no_grad;
  const torch::Tensor s = torch::rand({2, 1, 32, 32});
  EXPECT_TRUE(torch::equal(enc->forward(s).codes, enc->forward(s).codes));
}

TEST(SketchEncoder, WPlusHasOneCodePerLayer) {
  SketchEncoder enc(toy(LatentMode::kWPlus));
  torch::NoGradGuard no_grad;
  const LatentCode code = enc->forward(torch::rand({3, 1, 32, 32}));
  EXPECT_EQ(code.mode, LatentMode::kWPlus);
  EXPECT_EQ(code.codes.sizes(), (std::vector<int64_t>{3, 5, 8}));
  EXPECT_EQ(code.layer(4).sizes(), (std::vector<int64_t>{3, 8}));
}

TEST(SketchEncoder, DefaultLatentLength) {
  SketchEncoderOptions o;
  o.input_resolution = 64;
  SketchEncoder enc(o);
  torch::NoGradGuard no_grad;
  EXPECT_EQ(enc->forward(torch::ones({1, 1, 64, 64})).dim(), 512);
}

TEST(SketchEncoder, ResNet34Preset) {
  const SketchEncoderOptions o = SketchEncoderOptions::resnet34_preset(64, 32);
  EXPECT_TRUE(o.resnet34);
  EXPECT_EQ(o.blocks, (std::vector<int64_t>{3, 4, 6, 3}));
  EXPECT_EQ(o.widths, (std::vector<int64_t>{64, 128, 256, 512}));
  SketchEncoder enc(o);
  torch::NoGradGuard no_grad;
  EXPECT_EQ(enc->forward(torch::ones({1, 1, 64, 64})).codes.sizes(), (std::vector<int64_t>{1, 32}));
}

TEST(SketchEncoder, RejectsWrongInput) {
  SketchEncoder enc(toy());
  torch::NoGradGuard no_grad;
  EXPECT_THROW(enc->forward(torch::ones({1, 1, 16, 16})), Error);
  EXPECT_THROW(enc->forward(torch::ones({1, 3, 32, 32})), Error);
}

TEST(SketchEncoder, ParameterGradientMatchesFiniteDifferences) {
  torch::manual_seed(2);
  SketchEncoderOptions o = toy();
  o.input_resolution = 16;
  SketchEncoder enc(o);
  enc->to(torch::kFloat64);
  enc->eval();
  const torch::Tensor sketches = torch::rand({2, 1, 16, 16}, torch::kFloat64);
  const torch::Tensor w = torch::randn({2, 8}, torch::kFloat64);
  for (const auto& item : enc->named_parameters()) {
    const auto result = testing::check_parameter_gradient(
        [&] { return (enc->forward(sketches).codes * w).sum(); }, item.value(), 4, 3);
    EXPECT_LT(result.max_relative_error, 1e-3) << item.key();
  }
  const auto result = testing::check_parameter_gradient(
      [&] { return (enc->forward(sketches).codes * w).sum(); }, enc->named_parameters().begin()->value(), 20, 4);
  EXPECT_EQ(result.probes, 20);
  EXPECT_LT(result.max_relative_error, 1e-3);
}

}  // namespace
}  // namespace sssp
