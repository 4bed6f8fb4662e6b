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

#include "sssp/renderer.hpp"

#include <cmath>
#include <numbers>

#include "sssp/error.hpp"

namespace sssp {

namespace {

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 normalized(const Vec3& v) {
  const double n = std::sqrt(dot(v, v));
  return {v[0] / n, v[1] / n, v[2] / n};
}

// Offset of pixel `index` from the optical axis in units of tan(fov/2).
// Kept as integer-valued numerators where possible so that cameras sharing a
// virtual grid produce bit-identical rays.
double pixel_offset(double window_origin, double window_size, int64_t index, int64_t h) {
  const double virtual_res = static_cast<double>(h) / window_size;
  const double origin = window_origin * virtual_res;
  return (2.0 * (origin + static_cast<double>(index)) + 1.0 - virtual_res) / virtual_res;
}

}  // namespace

void Camera::validate() const {
  SSSP_CHECK(radius > 0.0 && std::isfinite(radius), ErrorCode::kInvalidArgument,
             "camera radius must be positive");
  SSSP_CHECK(std::abs(pitch) < std::numbers::pi / 2, ErrorCode::kInvalidArgument,
             "camera pitch must lie in (-pi/2, pi/2)");
  SSSP_CHECK(fov_y > 0.0 && fov_y < std::numbers::pi, ErrorCode::kInvalidArgument,
             "camera fov must lie in (0, pi)");
  SSSP_CHECK(std::isfinite(yaw), ErrorCode::kInvalidArgument, "camera yaw must be finite");
  SSSP_CHECK(window_size > 0.0 && window_size <= 1.0, ErrorCode::kInvalidArgument,
             "camera window size must lie in (0, 1]");
}

Vec3 Camera::position() const {
  return {radius * std::sin(yaw) * std::cos(pitch), radius * std::cos(yaw) * std::cos(pitch),
          radius * std::sin(pitch)};
}

Vec3 Camera::forward() const {
  const Vec3 p = position();
  return normalized({-p[0], -p[1], -p[2]});
}

Vec3 Camera::right() const { return normalized(cross(forward(), {0.0, 0.0, 1.0})); }

Vec3 Camera::up() const { return cross(right(), forward()); }

Vec3 Camera::ray_direction(int64_t row, int64_t col, int64_t h) const {
  const double t = std::tan(fov_y / 2.0);
  const double sx = pixel_offset(window_x0, window_size, col, h) * t;
  const double sy = -pixel_offset(window_y0, window_size, row, h) * t;
  const Vec3 f = forward();
  const Vec3 r = right();
  const Vec3 u = up();
  return normalized({f[0] + sx * r[0] + sy * u[0], f[1] + sx * r[1] + sy * u[1],
                     f[2] + sx * r[2] + sy * u[2]});
}

std::array<double, 2> Camera::project(const Vec3& world) const {
  const Vec3 p = position();
  const Vec3 d{world[0] - p[0], world[1] - p[1], world[2] - p[2]};
  const double depth = dot(d, forward());
  const double t = std::tan(fov_y / 2.0);
  const double sx = dot(d, right()) / depth / t;
  const double sy = dot(d, up()) / depth / t;
  return {(sx + 1.0) / 2.0, (1.0 - sy) / 2.0};
}

Camera mirror_camera(const Camera& camera) {
  Camera m = camera;
  m.yaw = -camera.yaw;
  m.window_x0 = 1.0 - camera.window_x0 - camera.window_size;
  return m;
}

std::string region_name(RegionName name) {
  switch (name) {
    case RegionName::kLeftEye: return "left_eye";
    case RegionName::kRightEye: return "right_eye";
    case RegionName::kNose: return "nose";
    case RegionName::kMouth: return "mouth";
  }
  return "unknown";
}

RegionName region_from_string(const std::string& name) {
  if (name == "left_eye") return RegionName::kLeftEye;
  if (name == "right_eye") return RegionName::kRightEye;
  if (name == "nose") return RegionName::kNose;
  if (name == "mouth") return RegionName::kMouth;
  throw Error(ErrorCode::kInvalidArgument, "unknown region name: " + name);
}

bool RegionSpec::inside_image() const {
  constexpr double kSlack = 1e-12;
  const double half = scale / 2.0;
  return scale > 0.0 && scale <= 1.0 && cx - half >= -kSlack && cx + half <= 1.0 + kSlack &&
         cy - half >= -kSlack && cy + half <= 1.0 + kSlack;
}

double default_region_scale(RegionName name) {
  return (name == RegionName::kLeftEye || name == RegionName::kRightEye) ? 0.25 : 0.30;
}

Camera region_camera(const Camera& camera, const RegionSpec& region) {
  camera.validate();
  SSSP_CHECK(region.inside_image(), ErrorCode::kOutOfRange,
             "region box for " + region_name(region.name) + " leaves the image");
  Camera c = camera;
  c.window_x0 = camera.window_x0 + (region.cx - region.scale / 2.0) * camera.window_size;
  c.window_y0 = camera.window_y0 + (region.cy - region.scale / 2.0) * camera.window_size;
  c.window_size = camera.window_size * region.scale;
  return c;
}

void RenderConfig::validate() const {
  SSSP_CHECK(resolution >= 1, ErrorCode::kInvalidArgument, "render resolution must be >= 1");
  SSSP_CHECK(samples_per_ray >= 1, ErrorCode::kInvalidArgument, "samples_per_ray must be >= 1");
  if (near > 0.0 || far > 0.0) {
    SSSP_CHECK(near > 0.0 && near < far, ErrorCode::kInvalidArgument, "need 0 < near < far");
  }
}

RayBundle generate_rays(const Camera& camera, int64_t resolution) {
  camera.validate();
  SSSP_CHECK(resolution >= 1, ErrorCode::kInvalidArgument, "ray grid resolution must be >= 1");
  const int64_t n = resolution * resolution;
  torch::Tensor dirs = torch::empty({n, 3}, torch::kFloat64);
  auto acc = dirs.accessor<double, 2>();
  for (int64_t i = 0; i < resolution; ++i) {
    for (int64_t j = 0; j < resolution; ++j) {
      const Vec3 d = camera.ray_direction(i, j, resolution);
      const int64_t k = i * resolution + j;
      acc[k][0] = d[0];
      acc[k][1] = d[1];
      acc[k][2] = d[2];
    }
  }
  const Vec3 p = camera.position();
  torch::Tensor origins = torch::tensor({p[0], p[1], p[2]}, torch::kFloat64).expand({n, 3}).clone();
  return {origins, dirs};
}

CompositeResult composite(const torch::Tensor& sigmas, const torch::Tensor& features,
                          const torch::Tensor& deltas, const torch::Tensor& background) {
  SSSP_CHECK(features.dim() == sigmas.dim() + 1, ErrorCode::kShapeMismatch,
             "features must have one more axis than sigmas");
  SSSP_CHECK((sigmas >= 0).all().item<bool>(), ErrorCode::kInvalidArgument,
             "densities must be non-negative");
  SSSP_CHECK((deltas > 0).all().item<bool>(), ErrorCode::kInvalidArgument,
             "sample spacings must be positive");

  const torch::Tensor optical = sigmas * deltas;
  const torch::Tensor alpha = -torch::expm1(-optical);
  const torch::Tensor accumulated = torch::cumsum(optical, -1);
  const torch::Tensor shifted =
      torch::cat({torch::zeros_like(accumulated.narrow(-1, 0, 1)),
                  accumulated.narrow(-1, 0, accumulated.size(-1) - 1)},
                 -1);
  const torch::Tensor transmittance = torch::exp(-shifted);
  const torch::Tensor weights = transmittance * alpha;

  torch::Tensor feature = (weights.unsqueeze(-1) * features).sum(-2);
  if (background.defined()) {
    SSSP_CHECK(background.dim() == 1 && background.size(0) == features.size(-1),
               ErrorCode::kShapeMismatch, "background must be [C]");
    const torch::Tensor remaining = 1.0 - weights.sum(-1, /*keepdim=*/true);
    feature = feature + remaining * background.to(feature.dtype());
  }
  return {feature, weights};
}

std::pair<double, double> near_far(const Camera& camera, const RenderConfig& config, double extent) {
  if (config.near > 0.0 && config.far > config.near) {
    return {config.near, config.far};
  }
  const double reach = std::sqrt(3.0) * extent;
  const double near = std::max(camera.radius - reach, 1e-3);
  return {near, camera.radius + reach};
}

FeatureImage render(const TriPlane& planes, PointDecoderImpl& decoder, const Camera& camera,
                    const RenderConfig& config) {
  config.validate();
  const int64_t h = config.resolution;
  const int64_t ns = config.samples_per_ray;
  const auto dtype = planes.planes().scalar_type();
  const auto [near, far] = near_far(camera, config, planes.extent());
  const double bin = (far - near) / static_cast<double>(ns);

  const RayBundle rays = generate_rays(camera, h);
  torch::Tensor depths = near + (torch::arange(ns, torch::kFloat64) + 0.5) * bin;
  depths = depths.expand({h * h, ns});
  if (config.jitter) {
    auto gen = at::make_generator<at::CPUGeneratorImpl>(config.seed);
    const torch::Tensor u = torch::rand({h * h, ns}, gen, torch::kFloat64);
    depths = near + (torch::arange(ns, torch::kFloat64) + u) * bin;
  }
  const torch::Tensor points =
      (rays.origins.unsqueeze(1) + rays.directions.unsqueeze(1) * depths.unsqueeze(-1)).reshape({-1, 3});
  const torch::Tensor inside = (points.abs() <= planes.extent()).all(-1).to(dtype);

  const torch::Tensor feats = query_triplane(planes, points.to(dtype));
  const DecodedPoints decoded = decoder.forward(feats);
  const torch::Tensor sigma = (decoded.sigma * inside).reshape({h * h, ns});
  const torch::Tensor color = decoded.color.reshape({h * h, ns, -1});
  const torch::Tensor deltas = torch::full({ns}, bin, torch::dtype(dtype));

  torch::Tensor background = config.background;
  if (!background.defined()) {
    background = torch::zeros({color.size(-1)}, torch::dtype(dtype));
  }
  const CompositeResult out = composite(sigma, color, deltas, background);
  return {out.feature.transpose(0, 1).reshape({-1, h, h})};
}

torch::Tensor hflip(const torch::Tensor& image) { return image.flip({-1}); }

}  // namespace sssp
