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

#include <cmath>

#include "gradcheck.hpp"
#include "sssp/error.hpp"
#include "sssp/losses.hpp"
#include "sssp/metrics.hpp"

namespace sssp {
namespace {

torch::Tensor blur(const torch::Tensor& img, double sigma) {
  const int64_t radius = static_cast<int64_t>(std::ceil(3 * sigma));
  torch::Tensor x = torch::arange(-radius, radius + 1, torch::kFloat64);
  torch::Tensor k = torch::exp(-x.pow(2) / (2 * sigma * sigma));
  k = k / k.sum();
  namespace F = torch::nn::functional;
  torch::Tensor t = img.view({1, 1, img.size(0), img.size(1)});
  t = F::pad(t, F::PadFuncOptions({radius, radius, radius, radius}).mode(torch::kReplicate));
  t = F::conv2d(F::conv2d(t, k.view({1, 1, 1, -1})), k.view({1, 1, -1, 1}));
  return t.view({img.size(0), img.size(1)});
}

TEST(ReconLoss, IdentityAndSymmetry) {
  PerceptualExtractor ext;
  auto gen = at::make_generator<at::CPUGeneratorImpl>(1);
  const torch::Tensor a = torch::rand({2, 3, 16, 16}, gen);
  const torch::Tensor b = torch::rand({2, 3, 16, 16}, gen);
  EXPECT_EQ(recon_loss(a, a, ext.get()).item<float>(), 0.0f);
  EXPECT_GT(recon_loss(a, b, ext.get()).item<float>(), 0.0f);
  EXPECT_FLOAT_EQ(recon_loss(a, b, ext.get()).item<float>(), recon_loss(b, a, ext.get()).item<float>());
  EXPECT_THROW(recon_loss(a, b.narrow(-1, 0, 8), ext.get()), Error);
}

TEST(ReconLoss, PixelTermWithoutExtractor) {
  const torch::Tensor zero = torch::zeros({3, 8, 8});
  EXPECT_FLOAT_EQ(recon_loss(zero, zero + 0.5, nullptr).item<float>(), 0.5f);
}

TEST(PerceptualExtractor, DeterministicPerSeed) {
  PerceptualExtractor a(3, 3, 7), b(3, 3, 7);
  const torch::Tensor x = torch::rand({1, 3, 16, 16});
  const auto fa = a->forward(x), fb = b->forward(x);
  ASSERT_EQ(fa.size(), 3u);
  for (size_t i = 0; i < fa.size(); ++i) EXPECT_TRUE(torch::equal(fa[i], fb[i]));
}

TEST(RegionLoss, SumOfFourRecons) {
  PerceptualExtractor ext;
  auto gen = at::make_generator<at::CPUGeneratorImpl>(2);
  std::vector<torch::Tensor> r, t;
  for (int i = 0; i < 4; ++i) {
    r.push_back(torch::rand({2, 3, 8, 8}, gen));
    t.push_back(torch::rand({2, 3, 8, 8}, gen));
  }
  EXPECT_EQ(region_loss(r, r, ext.get()).item<float>(), 0.0f);
  double oracle = 0.0;
  for (int i = 0; i < 4; ++i) oracle += recon_loss(r[i], t[i], ext.get()).item<double>();
  EXPECT_NEAR(region_loss(r, t, ext.get()).item<double>(), oracle, 1e-5);
  std::vector<torch::Tensor> mouth_only = r;
  mouth_only[3] = t[3];
  EXPECT_NEAR(region_loss(r, mouth_only, ext.get()).item<double>(), recon_loss(r[3], t[3], ext.get()).item<double>(),
              1e-6);
  EXPECT_THROW(region_loss({r[0], r[1]}, {t[0], t[1]}, ext.get()), Error);
}

TEST(SymmetryLoss, ZerosAndElementwiseOracle) {
  auto gen = at::make_generator<at::CPUGeneratorImpl>(3);
  const TriPlane f(torch::randn({3, 4, 8, 8}, gen));
  EXPECT_EQ(symmetry_loss(f, flip_triplane(f)).item<float>(), 0.0f);
  const TriPlane c(torch::full({3, 4, 8, 8}, 0.3));
  EXPECT_EQ(symmetry_loss(c, c).item<float>(), 0.0f);
  const torch::Tensor a = torch::randn({2, 3, 4, 8, 8}, gen, torch::kFloat64);
  const torch::Tensor b = torch::randn({2, 3, 4, 8, 8}, gen, torch::kFloat64);
  torch::Tensor flipped = b.clone();
  flipped.narrow(1, 0, 2).copy_(b.narrow(1, 0, 2).flip({-1}));
  EXPECT_NEAR(symmetry_loss(a, b).item<double>(), (a - flipped).abs().mean().item<double>(), 1e-14);
  EXPECT_THROW(symmetry_loss(a, b.narrow(-1, 0, 4)), Error);
}

EncoderLossInputs random_inputs(uint64_t seed) {
  auto gen = at::make_generator<at::CPUGeneratorImpl>(seed);
  EncoderLossInputs in;
  in.rgb = torch::rand({2, 3, 8, 8}, gen, torch::kFloat64);
  in.target_low = torch::rand({2, 3, 8, 8}, gen, torch::kFloat64);
  for (int i = 0; i < 4; ++i) {
    in.region_renders.push_back(torch::rand({2, 3, 8, 8}, gen, torch::kFloat64));
    in.region_targets.push_back(torch::rand({2, 3, 8, 8}, gen, torch::kFloat64));
  }
  in.planes = torch::randn({2, 3, 2, 4, 4}, gen, torch::kFloat64);
  in.flipped_planes = torch::randn({2, 3, 2, 4, 4}, gen, torch::kFloat64);
  return in;
}

TEST(TotalEncoderLoss, WeightedSumAndLinearity) {
  PerceptualExtractor ext;
  ext->to(torch::kFloat64);
  const EncoderLossInputs in = random_inputs(4);
  const LossWeights w{0.7, 1.3, 0.2};
  const EncoderLossBreakdown b = total_encoder_loss(in, w, ext.get());
  const double oracle = 0.7 * b.recon.item<double>() + 1.3 * b.region.item<double>() + 0.2 * b.symmetry.item<double>();
  EXPECT_NEAR(b.total.item<double>(), oracle, 1e-12);
  const EncoderLossBreakdown doubled = total_encoder_loss(in, LossWeights{1.4, 2.6, 0.4}, ext.get());
  EXPECT_NEAR(doubled.total.item<double>(), 2 * b.total.item<double>(), 1e-12);
  const EncoderLossBreakdown no_sc = total_encoder_loss(in, LossWeights{0.7, 1.3, 0.0}, ext.get());
  EXPECT_NEAR(no_sc.total.item<double>(), 0.7 * b.recon.item<double>() + 1.3 * b.region.item<double>(), 1e-12);
}

TEST(TotalEncoderLoss, PerfectAndSymmetricIsZero) {
  PerceptualExtractor ext;
  ext->to(torch::kFloat64);
  EncoderLossInputs in = random_inputs(5);
  in.target_low = in.rgb;
  in.region_targets = in.region_renders;
  in.flipped_planes = flip_planes(in.planes);
  EXPECT_EQ(total_encoder_loss(in, LossWeights{}, ext.get()).total.item<double>(), 0.0);
}

TEST(Losses, GradientsMatchFiniteDifferences) {
  PerceptualExtractor ext(2, 3, 9);
  ext->to(torch::kFloat64);
  auto gen = at::make_generator<at::CPUGeneratorImpl>(6);
  const torch::Tensor a = torch::rand({1, 3, 8, 8}, gen, torch::kFloat64);
  const torch::Tensor b = torch::rand({1, 3, 8, 8}, gen, torch::kFloat64);
  const auto recon = testing::check_gradient([&](const torch::Tensor& x) { return recon_loss(x, b, ext.get()); }, a,
                                             20, 1);
  EXPECT_LT(recon.max_relative_error, 1e-3);
  const torch::Tensor p = torch::randn({1, 3, 2, 4, 4}, gen, torch::kFloat64);
  const torch::Tensor q = torch::randn({1, 3, 2, 4, 4}, gen, torch::kFloat64);
  const auto sym = testing::check_gradient([&](const torch::Tensor& x) { return symmetry_loss(x, q); }, p, 20, 2);
  EXPECT_LT(sym.max_relative_error, 1e-3);
}

TEST(Psnr, CapAndAnalyticValue) {
  const torch::Tensor a = torch::rand({3, 8, 8});
  EXPECT_EQ(psnr(a, a), kPsnrCap);
  EXPECT_NEAR(psnr(torch::zeros({3, 8, 8}), torch::ones({3, 8, 8})), 0.0, 1e-12);
  EXPECT_NEAR(psnr(torch::zeros({1, 4, 4}), torch::full({1, 4, 4}, 0.1)), 20.0, 1e-5);
  EXPECT_THROW(psnr(a, torch::rand({3, 8, 4})), Error);
}

TEST(Ssim, IdentityAndDegradation) {
  auto gen = at::make_generator<at::CPUGeneratorImpl>(7);
  const torch::Tensor a = torch::rand({3, 32, 32}, gen);
  EXPECT_NEAR(ssim(a, a), 1.0, 1e-12);
  const torch::Tensor noisy = (a + 0.2 * torch::randn({3, 32, 32}, gen)).clamp(0, 1);
  const double s = ssim(a, noisy);
  EXPECT_LT(s, 1.0);
  EXPECT_GE(s, -1.0);
}

TEST(Cpbd, ConstantImageIsZero) { EXPECT_EQ(cpbd(torch::full({64, 64}, 0.5)), 0.0); }

TEST(Cpbd, StepBeatsBlurredStep) {
  torch::Tensor step = torch::full({96, 96}, 0.1, torch::kFloat64);
  step.narrow(1, 48, 48).fill_(0.9);
  const double sharp = cpbd(step);
  EXPECT_GT(sharp, cpbd(blur(step, 3.0)));
  EXPECT_GE(sharp, 0.0);
  EXPECT_LE(sharp, 1.0);
  double previous = 2.0;
  for (const double sigma : {0.0, 1.0, 2.0, 4.0}) {
    const double score = cpbd(sigma == 0.0 ? step : blur(step, sigma));
    EXPECT_LE(score, previous);
    previous = score;
  }
}

TEST(ToGray, Luminance) {
  torch::Tensor rgb = torch::zeros({3, 2, 2});
  rgb[1].fill_(1.0);
  EXPECT_NEAR(to_gray(rgb)[0][0].item<double>(), 0.587, 1e-6);
}

}  // namespace
}  // namespace sssp
