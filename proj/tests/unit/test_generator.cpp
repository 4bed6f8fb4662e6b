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
#include "sssp/generator.hpp"

namespace sssp {
namespace {

GeneratorOptions toy_options() {
  GeneratorOptions o;
  o.latent_dim = 16;
  o.triplane_resolution = 16;
  o.triplane_channels = 4;
  o.backbone_channels = 8;
  o.feature_channels = 6;
  o.decoder_hidden = 8;
  o.render_resolution = 8;
  o.upsample_factor = 2;
  o.superres_channels = 8;
  return o;
}

LatentCode w_code(int64_t batch, int64_t dim, uint64_t seed) {
  auto gen = at::make_generator<at::CPUGeneratorImpl>(seed);
  return {LatentMode::kW, torch::randn({batch, dim}, gen)};
}

TEST(Generator, DefaultPlaneShapes) {
  torch::manual_seed(0);
  Generator g(GeneratorOptions{});
  torch::NoGradGuard no_grad;
  const torch::Tensor planes = g->synthesize_planes(w_code(1, 512, 1));
  EXPECT_EQ(planes.sizes(), (std::vector<int64_t>{1, 3, 32, 256, 256}));
  EXPECT_TRUE(torch::isfinite(planes).all().item<bool>());
}

TEST(Generator, DefaultUpsampleShape) {
  torch::manual_seed(0);
  GeneratorOptions o;
  o.triplane_resolution = 16;  // keep the backbone small; the head is what is under test
  Generator g(o);
  torch::NoGradGuard no_grad;
  const torch::Tensor out = g->upsample(torch::rand({1, 32, 128, 128}), w_code(1, 512, 2));
  EXPECT_EQ(out.sizes(), (std::vector<int64_t>{1, 3, 512, 512}));
}

TEST(Generator, DeskScaleUpsampleShape) {
  GeneratorOptions o = toy_options();
  o.render_resolution = 32;
  Generator g(o);
  torch::NoGradGuard no_grad;
  EXPECT_EQ(g->upsample(torch::rand({2, 6, 32, 32}), w_code(2, 16, 3)).sizes(),
            (std::vector<int64_t>{2, 3, 64, 64}));
  EXPECT_THROW(g->upsample(torch::rand({2, 5, 32, 32}), w_code(2, 16, 3)), Error);
}

TEST(Generator, WBroadcastMatchesW) {
  torch::manual_seed(1);
  Generator g(toy_options());
  torch::NoGradGuard no_grad;
  const LatentCode w = w_code(2, 16, 4);
  const LatentCode plus = broadcast_to_wplus(w, g->num_layers());
  EXPECT_EQ(plus.codes.sizes(), (std::vector<int64_t>{2, g->num_layers(), 16}));
  EXPECT_TRUE(torch::equal(g->synthesize_planes(w), g->synthesize_planes(plus)));
  const torch::Tensor feats = torch::rand({2, 6, 8, 8});
  EXPECT_TRUE(torch::equal(g->upsample(feats, w), g->upsample(feats, plus)));
}

TEST(Generator, Deterministic) {
  torch::manual_seed(2);
  Generator g(toy_options());
  torch::NoGradGuard no_grad;
  const LatentCode w = w_code(1, 16, 5);
  EXPECT_TRUE(torch::equal(g->synthesize_planes(w), g->synthesize_planes(w)));
  EXPECT_TRUE(torch::equal(g->synthesize_triplane(w).planes(), g->synthesize_planes(w)[0]));
}

TEST(Generator, RejectsLatentMismatch) {
  Generator g(toy_options());
  torch::NoGradGuard no_grad;
  EXPECT_THROW(g->synthesize_planes(w_code(1, 8, 6)), Error);
  const LatentCode bad{LatentMode::kWPlus, torch::randn({1, g->num_layers() + 1, 16})};
  EXPECT_THROW(g->synthesize_planes(bad), Error);
}

TEST(Generator, CountsBackbonePasses) {
  Generator g(toy_options());
  torch::NoGradGuard no_grad;
  const int64_t before = g->backbone_calls();
  g->synthesize_planes(w_code(1, 16, 7));
  g->upsample(torch::rand({1, 6, 8, 8}), w_code(1, 16, 7));
  EXPECT_EQ(g->backbone_calls(), before + 1);
}

TEST(Generator, GradientsReachLatentAndParameters) {
  torch::manual_seed(3);
  Generator g(toy_options());
  g->to(torch::kFloat64);
  const torch::Tensor code = torch::randn({1, 16}, torch::kFloat64);
  const torch::Tensor w = torch::randn({1, 3, 4, 16, 16}, torch::kFloat64);
  const auto latent_check = testing::check_gradient(
      [&](const torch::Tensor& c) { return (g->synthesize_planes({LatentMode::kW, c}) * w).sum(); }, code, 16, 1);
  EXPECT_EQ(latent_check.probes, 16);
  EXPECT_GT(latent_check.max_abs_gradient, 0.0);
  EXPECT_LT(latent_check.max_relative_error, 1e-3);

  const LatentCode fixed{LatentMode::kW, code};
  g->zero_grad();
  (g->synthesize_planes(fixed) * w).sum().backward();
  int64_t with_grad = 0;
  for (const auto& p : g->backbone().parameters()) {
    with_grad += p.grad().defined() && p.grad().abs().sum().item<double>() > 0.0;
  }
  EXPECT_GT(with_grad, 0);
}

}  // namespace
}  // namespace sssp
