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
#include "sssp/camera.hpp"
#include "sssp/error.hpp"
#include "sssp/renderer.hpp"

namespace sssp {
namespace {

TEST(Camera, ValidatesIntrinsicsAndPose) {
  Camera cam;
  EXPECT_NO_THROW(cam.validate());
  cam.radius = 0.0;
  EXPECT_THROW(cam.validate(), Error);
  cam = Camera{};
  cam.pitch = M_PI / 2;
  EXPECT_THROW(cam.validate(), Error);
  cam = Camera{};
  cam.fov_y = M_PI;
  EXPECT_THROW(cam.validate(), Error);
}

TEST(MirrorCamera, NegatesYaw) {
  Camera cam;
  EXPECT_EQ(mirror_camera(cam).yaw, 0.0);
  cam.yaw = 0.4;
  cam.pitch = 0.1;
  const Camera m = mirror_camera(cam);
  EXPECT_EQ(m.yaw, -0.4);
  EXPECT_EQ(m.pitch, 0.1);
  EXPECT_EQ(mirror_camera(m).yaw, 0.4);
  const Vec3 p = cam.position(), q = m.position();
  EXPECT_NEAR(q[0], -p[0], 1e-15);
  EXPECT_NEAR(q[1], p[1], 1e-15);
  EXPECT_NEAR(q[2], p[2], 1e-15);
}

TEST(GenerateRays, UnitNormAndPrincipalRay) {
  Camera cam;
  cam.yaw = 0.3;
  cam.pitch = -0.15;
  const RayBundle rays = generate_rays(cam, 9);
  EXPECT_TRUE(torch::allclose(rays.directions.norm(2, 1), torch::ones({81}, torch::kFloat64), 0, 1e-6));
  const Vec3 f = cam.forward();
  const torch::Tensor center = rays.directions[4 * 9 + 4];
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(center[k].item<double>(), f[k], 1e-12);
}

TEST(GenerateRays, MirroredCameraMirrorsRayGrid) {
  Camera cam;
  cam.yaw = 0.35;
  cam.pitch = 0.1;
  const int64_t h = 8;
  const torch::Tensor a = generate_rays(cam, h).directions.view({h, h, 3});
  const torch::Tensor b = generate_rays(mirror_camera(cam), h).directions.view({h, h, 3});
  torch::Tensor mirrored = a.flip({1}).clone();
  mirrored.select(2, 0).neg_();
  EXPECT_TRUE(torch::allclose(b, mirrored, 0, 1e-12));
}

TEST(Composite, EmptySpaceReturnsBackground) {
  const torch::Tensor bg = torch::tensor({0.1, 0.2, 0.3}, torch::kFloat64);
  const CompositeResult r = composite(torch::zeros({5}, torch::kFloat64), torch::rand({5, 3}, torch::kFloat64),
                                      torch::full({5}, 0.1, torch::kFloat64), bg);
  EXPECT_TRUE(torch::equal(r.feature, bg));
  EXPECT_TRUE(torch::equal(r.weights, torch::zeros({5}, torch::kFloat64)));
}

TEST(Composite, HalfOpacitySample) {
  const torch::Tensor feat = torch::tensor({{0.8, 0.4}}, torch::kFloat64);
  const torch::Tensor bg = torch::tensor({0.2, 0.0}, torch::kFloat64);
  const CompositeResult r = composite(torch::tensor({std::log(2.0)}, torch::kFloat64), feat,
                                      torch::ones({1}, torch::kFloat64), bg);
  EXPECT_NEAR(r.weights[0].item<double>(), 0.5, 1e-15);
  EXPECT_NEAR(r.feature[0].item<double>(), 0.5, 1e-15);
  EXPECT_NEAR(r.feature[1].item<double>(), 0.2, 1e-15);
}

TEST(Composite, OpaqueFirstSample) {
  const torch::Tensor feats = torch::rand({4, 3}, torch::kFloat64);
  const CompositeResult r = composite(torch::tensor({50.0, 1.0, 2.0, 3.0}, torch::kFloat64), feats,
                                      torch::ones({4}, torch::kFloat64), torch::ones({3}, torch::kFloat64));
  EXPECT_NEAR(r.weights[0].item<double>(), 1.0, 1e-9);
  EXPECT_TRUE(torch::allclose(r.feature, feats[0], 0, 1e-9));
}

TEST(Composite, MonotoneInDensity) {
  auto gen = at::make_generator<at::CPUGeneratorImpl>(9);
  for (int trial = 0; trial < 50; ++trial) {
    const torch::Tensor sig = torch::rand({8}, gen, torch::kFloat64) * 3;
    const torch::Tensor feats = torch::rand({8, 2}, gen, torch::kFloat64);
    const torch::Tensor deltas = torch::full({8}, 0.2, torch::kFloat64);
    const int64_t j = trial % 8;
    torch::Tensor more = sig.clone();
    more[j] += 1.0;
    const torch::Tensor before = composite(sig, feats, deltas).weights.cumsum(0);
    const torch::Tensor after = composite(more, feats, deltas).weights.cumsum(0);
    for (int64_t k = j; k < 8; ++k) EXPECT_GE(after[k].item<double>(), before[k].item<double>() - 1e-15);
  }
}

TEST(Composite, RejectsBadInputs) {
  const torch::Tensor feats = torch::zeros({2, 1});
  EXPECT_THROW(composite(torch::tensor({-1.0f, 0.0f}), feats, torch::ones({2})), Error);
  EXPECT_THROW(composite(torch::zeros({2}), feats, torch::tensor({0.0f, 1.0f})), Error);
  EXPECT_THROW(composite(torch::zeros({2}), torch::zeros({2}), torch::ones({2})), Error);
}

TEST(NearFar, BoundsTheCube) {
  Camera cam;
  RenderConfig cfg;
  const auto [n, f] = near_far(cam, cfg, 1.0);
  EXPECT_NEAR(n, cam.radius - std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(f, cam.radius + std::sqrt(3.0), 1e-15);
  cam.radius = 1.0;
  EXPECT_EQ(near_far(cam, cfg, 1.0).first, 1e-3);
}

// Zero planes with a zero output layer decode to color 0.5 and density ln 2
// everywhere; density is masked outside the cube. Every pixel then follows
// from the ray's in-cube sample count.
TEST(Render, EmptySpaceMatchesAnalyticComposite) {
  PointDecoder dec(PointDecoderOptions{4, 8, 3});
  dec->zero_output_layer();
  dec->to(torch::kFloat64);
  const TriPlane f = TriPlane::zeros(8, 4, 1.0, torch::kFloat64);
  Camera cam;
  cam.yaw = 0.25;
  cam.pitch = 0.1;
  RenderConfig cfg;
  cfg.resolution = 12;
  cfg.samples_per_ray = 16;
  const torch::Tensor img = render(f, *dec, cam, cfg).features;
  ASSERT_EQ(img.sizes(), (std::vector<int64_t>{3, 12, 12}));

  const auto [near, far] = near_far(cam, cfg, 1.0);
  const double bin = (far - near) / 16.0;
  const double alpha = 1.0 - std::exp(-std::log(2.0) * bin);
  const Vec3 o = cam.position();
  for (int64_t i = 0; i < 12; ++i) {
    for (int64_t j = 0; j < 12; ++j) {
      const Vec3 d = cam.ray_direction(i, j, 12);
      double transmittance = 1.0, value = 0.0;
      for (int s = 0; s < 16; ++s) {
        const double t = near + (s + 0.5) * bin;
        const bool inside = std::abs(o[0] + t * d[0]) <= 1 && std::abs(o[1] + t * d[1]) <= 1 &&
                            std::abs(o[2] + t * d[2]) <= 1;
        if (!inside) continue;
        value += transmittance * alpha * 0.5;
        transmittance *= 1.0 - alpha;
      }
      for (int64_t c = 0; c < 3; ++c) EXPECT_NEAR(img[c][i][j].item<double>(), value, 1e-12);
    }
  }
}

TEST(Render, DefaultShapeAndDeterminism) {
  torch::manual_seed(2);
  PointDecoder dec(PointDecoderOptions{32, 16, 32});
  const TriPlane f(torch::randn({3, 32, 16, 16}) * 0.1);
  RenderConfig cfg;
  cfg.samples_per_ray = 4;
  const FeatureImage a = render(f, *dec, Camera{}, cfg);
  EXPECT_EQ(a.features.sizes(), (std::vector<int64_t>{32, 128, 128}));
  EXPECT_EQ(a.rgb().size(0), 3);
  cfg.resolution = 16;
  EXPECT_TRUE(torch::equal(render(f, *dec, Camera{}, cfg).features, render(f, *dec, Camera{}, cfg).features));
}

TEST(Render, MirrorEquivalence) {
  torch::manual_seed(3);
  PointDecoder dec(PointDecoderOptions{6, 16, 5});
  RenderConfig cfg;
  cfg.resolution = 16;
  cfg.samples_per_ray = 24;
  for (int i = 0; i < 5; ++i) {
    const TriPlane f(torch::randn({3, 6, 16, 16}) * 0.5);
    Camera cam;
    cam.yaw = -0.4 + 0.2 * i;
    cam.pitch = 0.05 * i;
    const torch::Tensor lhs = hflip(render(f, *dec, cam, cfg).features);
    const torch::Tensor rhs = render(flip_triplane(f), *dec, mirror_camera(cam), cfg).features;
    EXPECT_LE((lhs - rhs).abs().max().item<double>(), 1e-4);
  }
}

TEST(RegionCamera, FullImageRegionKeepsRays) {
  Camera cam;
  cam.yaw = 0.2;
  const Camera same = region_camera(cam, RegionSpec{RegionName::kNose, 0.5, 0.5, 1.0});
  EXPECT_TRUE(torch::allclose(generate_rays(same, 8).directions, generate_rays(cam, 8).directions, 0, 1e-15));
}

TEST(RegionCamera, RejectsBoxOutsideImage) {
  EXPECT_THROW(region_camera(Camera{}, RegionSpec{RegionName::kMouth, 0.9, 0.5, 0.25}), Error);
  EXPECT_FALSE((RegionSpec{RegionName::kMouth, 0.9, 0.5, 0.25}).inside_image());
  EXPECT_TRUE((RegionSpec{RegionName::kMouth, 0.875, 0.5, 0.25}).inside_image());
}

TEST(RegionCamera, GridAlignedCropIsBitIdentical) {
  torch::manual_seed(4);
  PointDecoder dec(PointDecoderOptions{4, 8, 4});
  const TriPlane f(torch::randn({3, 4, 16, 16}) * 0.5);
  Camera cam;
  cam.yaw = -0.3;
  RenderConfig full;
  full.resolution = 64;
  full.samples_per_ray = 12;
  RenderConfig part = full;
  part.resolution = 16;
  const torch::Tensor img = render(f, *dec, cam, full).features;
  const RegionSpec box{RegionName::kRightEye, 24.0 / 64, 40.0 / 64, 0.25};
  const torch::Tensor reg = render(f, *dec, region_camera(cam, box), part).features;
  EXPECT_TRUE(torch::equal(reg, img.narrow(1, 32, 16).narrow(2, 16, 16)));
}

TEST(Render, GradientMatchesFiniteDifferences) {
  torch::manual_seed(5);
  PointDecoder dec(PointDecoderOptions{3, 8, 3});
  dec->to(torch::kFloat64);
  RenderConfig cfg;
  cfg.resolution = 8;
  cfg.samples_per_ray = 8;
  Camera cam;
  cam.yaw = 0.15;
  const torch::Tensor planes = torch::randn({3, 3, 16, 16}, torch::kFloat64);
  const torch::Tensor w = torch::randn({3, 8, 8}, torch::kFloat64);
  const auto result = testing::check_gradient(
      [&](const torch::Tensor& p) { return (render(TriPlane(p), *dec, cam, cfg).features * w).sum(); }, planes, 20,
      7, /*nonzero_only=*/true, /*step=*/1e-4);
  EXPECT_EQ(result.probes, 20);
  EXPECT_LT(result.max_relative_error, 1e-3);
}

}  // namespace
}  // namespace sssp
