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

#include <array>
#include <cstdint>

namespace sssp {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

using PlaneUV = std::array<double, 2>;

struct PlaneProjection {
  PlaneUV xy;
  PlaneUV xz;
  PlaneUV yz;
};

PlaneProjection project_point(const Point3& p);

/// Reflection about the yz-plane.
Point3 mirror_point(const Point3& p);

enum class Plane : int64_t { kXY = 0, kXZ = 1, kYZ = 2 };

/// Three axis-aligned feature grids spanning the cube [-extent, extent]^3.
///
/// Storage is a single [3, C, R, R] tensor ordered (xy, xz, yz). On each plane
/// the first projected coordinate runs along the column axis and the second
/// along the row axis, and grid samples sit at pixel centers, so texel i covers
/// [-e + i*2e/R, -e + (i+1)*2e/R).
class TriPlane {
 public:
  TriPlane() = default;
  explicit TriPlane(torch::Tensor planes, double extent = 1.0);

  static TriPlane zeros(int64_t resolution, int64_t channels, double extent = 1.0,
                        torch::Dtype dtype = torch::kFloat32);

  const torch::Tensor& planes() const { return planes_; }
  torch::Tensor plane(Plane which) const { return planes_[static_cast<int64_t>(which)]; }
  int64_t resolution() const { return planes_.size(-1); }
  int64_t channels() const { return planes_.size(1); }
  double extent() const { return extent_; }

 private:
  torch::Tensor planes_;
  double extent_ = 1.0;
};

/// Bilinear lookup on each plane (edge-clamped inside the cube, zero outside
/// it) summed over the three planes.
///
/// `points` is [N, 3]; the result is [N, C] in the planes' dtype and is
/// differentiable with respect to the plane features.
torch::Tensor query_triplane(const TriPlane& planes, const torch::Tensor& points);

/// Single-point convenience overload; returns [C].
torch::Tensor query_triplane(const TriPlane& planes, const Point3& p);

/// Reverses the x axis of the xy and xz planes; yz is untouched.
TriPlane flip_triplane(const TriPlane& planes);

/// Same flip on a raw [..., 3, C, R, R] tensor, usable on batches.
torch::Tensor flip_planes(const torch::Tensor& planes);

struct DecodedPoints {
  torch::Tensor color;  // [N, C]
  torch::Tensor sigma;  // [N], non-negative
};

struct PointDecoderOptions {
  int64_t input_channels = 32;
  int64_t hidden = 64;
  int64_t feature_channels = 32;
};

/// Two softplus hidden layers mapping an aggregated tri-plane feature to a
/// color feature (sigmoid) and a density (softplus of a raw logit).
class PointDecoderImpl : public torch::nn::Module {
 public:
  explicit PointDecoderImpl(const PointDecoderOptions& options = {});

  DecodedPoints forward(const torch::Tensor& features);

  /// Zeroes the output layer: every input then decodes to color 0.5 and
  /// density softplus(0).
  void zero_output_layer();

  const PointDecoderOptions& options() const { return options_; }

 private:
  PointDecoderOptions options_;
  torch::nn::Linear fc1_{nullptr};
  torch::nn::Linear fc2_{nullptr};
  torch::nn::Linear out_{nullptr};
};
TORCH_MODULE(PointDecoder);

}  // namespace sssp
