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
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sssp/camera.hpp"

namespace sssp {

/// Procedural cartoon head. Lengths are in world units with the head centered
/// at the origin facing +y. The four asym_* terms are the only sources of
/// left/right asymmetry; negating them mirrors the scene about x = 0.
struct FaceParams {
  double head_rx = 0.55, head_ry = 0.6, head_rz = 0.74;
  double eye_spacing = 0.2, eye_height = 0.12, eye_radius = 0.085, pupil_radius = 0.038;
  double brow_raise = 0.12, brow_length = 0.1;
  double nose_height = -0.08, nose_length = 0.11, nose_radius = 0.06;
  double mouth_height = -0.33, mouth_width = 0.16, mouth_thickness = 0.04;
  double ear_size = 0.13;
  double hair_volume = 1.06, hair_line = 0.35;
  double asym_eye_dz = 0.0, asym_brow_dz = 0.0, asym_mouth_dx = 0.0, asym_hair_dx = 0.0;
  std::array<double, 3> skin_color{0.86, 0.67, 0.56};
  std::array<double, 3> hair_color{0.25, 0.16, 0.1};
  bool symmetric = true;

  /// Draws every field from its documented range; asymmetry terms are zero
  /// when `symmetric`.
  static FaceParams sample(std::mt19937_64& rng, bool symmetric);

  FaceParams mirrored() const;

  nlohmann::json to_json() const;
  static FaceParams from_json(const nlohmann::json& j);
};

/// Per-pixel output of the analytic ray caster.
struct SceneRender {
  torch::Tensor image;  // [3, H, W] in [0, 1]
  torch::Tensor ids;    // [H, W] int32 primitive ids, 0 = background
  torch::Tensor depth;  // [H, W] float64 hit distance, +inf on background
};

SceneRender render_face(const FaceParams& face, const Camera& camera, int64_t resolution);

/// Line drawing from primitive boundaries: a pixel is ink (0) when a 4-neighbor
/// belongs to another primitive lying behind it or to the background.
torch::Tensor sketch_from_render(const SceneRender& render);

/// Keeps the ink of strokes whose thinned length reaches
/// `length_fraction * H`; everything else becomes background (1). The result never
/// has more ink than the input.
torch::Tensor simplify_sketch(const torch::Tensor& sketch, double length_fraction = 0.15);

/// Eye/nose/mouth boxes from the projected feature centers, shifted to fit the image.
std::array<RegionSpec, 4> face_regions(const FaceParams& face, const Camera& camera);

struct CameraDistribution {
  double yaw_range = 0.5;
  double pitch_range = 0.2;
  double radius = 2.7;
  double fov_y = 0.7;

  Camera sample(std::mt19937_64& rng) const;
  Camera frontal() const;
};

struct Sample {
  uint64_t seed = 0;
  FaceParams face;
  Camera camera;
  torch::Tensor image;    // [3, H, H], 8-bit quantized
  torch::Tensor sketch;   // [H, H], 0 = ink, 1 = background
  torch::Tensor contour;  // [H, H]
  std::array<RegionSpec, 4> regions;
};

Sample generate_sample(uint64_t seed, int64_t resolution, const CameraDistribution& cameras = {});

/// Builds a sample from explicit face and camera (used for symmetric pairs and
/// novel-view ground truth).
Sample make_sample(const FaceParams& face, const Camera& camera, int64_t resolution, uint64_t seed = 0);

enum class Split { kTrain, kVal };

std::string split_name(Split split);
Split split_from_string(const std::string& name);

/// Seeds of the two splits never collide: the low bit encodes the split.
uint64_t sample_seed(Split split, uint64_t base_seed, int64_t index);

void write_sample_cache(const std::filesystem::path& dir, const Sample& sample);
Sample read_sample_cache(const std::filesystem::path& dir);

/// Fixed-order collection of samples for one split. When a cache directory is
/// given (or SSSP_CACHE_DIR is set) samples are read from and written to it.
class Dataset {
 public:
  Dataset(Split split, int64_t size, uint64_t base_seed, int64_t resolution,
          const CameraDistribution& cameras = {}, std::optional<std::filesystem::path> cache_dir = std::nullopt);

  int64_t size() const { return static_cast<int64_t>(samples_.size()); }
  const Sample& operator[](int64_t i) const { return samples_.at(static_cast<size_t>(i)); }
  std::vector<Sample>::const_iterator begin() const { return samples_.begin(); }
  std::vector<Sample>::const_iterator end() const { return samples_.end(); }

  Split split() const { return split_; }
  int64_t resolution() const { return resolution_; }

 private:
  Split split_;
  int64_t resolution_;
  std::vector<Sample> samples_;
};

}  // namespace sssp
