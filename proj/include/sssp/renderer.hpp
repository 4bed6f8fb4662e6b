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

#include <cstdint>

#include "sssp/camera.hpp"
#include "sssp/triplane.hpp"

namespace sssp {

struct RenderConfig {
  int64_t resolution = 128;
  int64_t samples_per_ray = 48;
  /// Non-positive near/far select the cube-bounding defaults
  /// radius -/+ sqrt(3) * extent (near clamped positive).
  double near = 0.0;
  double far = 0.0;
  /// [C] feature composited behind the last sample; undefined means zeros.
  torch::Tensor background;
  /// Stratified jitter inside each depth bin; midpoints when off.
  bool jitter = false;
  uint64_t seed = 0;

  void validate() const;
};

struct RayBundle {
  torch::Tensor origins;     // [h*h, 3]
  torch::Tensor directions;  // [h*h, 3], unit length
};

/// Pinhole rays for every pixel, row-major, computed in double precision.
RayBundle generate_rays(const Camera& camera, int64_t resolution);

struct CompositeResult {
  torch::Tensor feature;  // [..., C]
  torch::Tensor weights;  // [..., N_s]
};

/// Emission-absorption quadrature along the last sample axis.
///
/// sigmas [..., N_s] >= 0, features [..., N_s, C], deltas broadcastable to
/// sigmas and > 0, background [C] (undefined means zeros).
CompositeResult composite(const torch::Tensor& sigmas, const torch::Tensor& features,
                          const torch::Tensor& deltas, const torch::Tensor& background = {});

/// Accumulated C-channel render; channels 0..2 are the RGB image.
struct FeatureImage {
  torch::Tensor features;  // [C, h, h]

  torch::Tensor rgb() const { return features.narrow(0, 0, 3); }
  int64_t resolution() const { return features.size(-1); }
  int64_t channels() const { return features.size(0); }
};

std::pair<double, double> near_far(const Camera& camera, const RenderConfig& config, double extent);

/// Ray-marches the tri-plane from `camera`. Samples outside the cube carry no
/// density, so rays that miss it return the background.
FeatureImage render(const TriPlane& planes, PointDecoderImpl& decoder, const Camera& camera,
                    const RenderConfig& config);

/// Mirrors a [..., W] image about its vertical centerline.
torch::Tensor hflip(const torch::Tensor& image);

}  // namespace sssp
