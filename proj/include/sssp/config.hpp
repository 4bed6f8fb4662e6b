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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sssp/generator.hpp"
#include "sssp/losses.hpp"
#include "sssp/renderer.hpp"
#include "sssp/sketch_encoder.hpp"
#include "sssp/vq_sketch.hpp"

namespace sssp {

enum class Stage { kVq, kContour, kSssp };

std::string stage_name(Stage stage);
Stage stage_from_string(const std::string& name);

/// Everything a training run needs. Serialized as a flat JSON object; unknown
/// keys are rejected so typos fail loudly.
struct TrainConfig {
  Stage stage = Stage::kSssp;
  uint64_t seed = 0;

  // Data.
  int64_t train_samples = 256;
  int64_t val_samples = 32;
  uint64_t data_seed = 7;
  double yaw_range = 0.5;
  double pitch_range = 0.2;

  // Portrait model. The sketch and final image share the resolution
  // render_resolution * upsample_factor.
  int64_t render_resolution = 128;
  int64_t upsample_factor = 4;
  int64_t triplane_resolution = 256;
  int64_t triplane_channels = 32;
  int64_t latent_dim = 512;
  int64_t backbone_channels = 64;
  int64_t feature_channels = 32;
  int64_t decoder_hidden = 64;
  int64_t superres_channels = 32;
  int64_t samples_per_ray = 48;
  LatentMode latent_mode = LatentMode::kW;
  bool resnet34 = false;
  std::vector<int64_t> encoder_widths{16, 32, 64, 128};
  std::vector<int64_t> encoder_blocks{1, 1, 1, 1};

  // Sketch codec.
  int64_t vq_resolution = 64;
  int64_t codebook_size = 512;
  int64_t codebook_dim = 64;
  int64_t vq_downsample = 8;
  int64_t vq_hidden = 64;
  double commitment_beta = 0.25;
  FeatureDistance contour_distance = FeatureDistance::kL2;
  double contour_distance_weight = 1.0;
  bool clone_teacher = false;

  // Losses.
  LossWeights weights;
  /// Weight of the L1 term on the upsampled output; 0 leaves the
  /// super-resolution head untrained.
  double superres_weight = 1.0;
  int64_t perceptual_stages = 3;

  // Optimization.
  double learning_rate = 2e-4;
  int64_t steps = 2000;
  int64_t batch = 8;
  int64_t log_every = 10;
  bool frozen_generator = false;
  /// Optional checkpoint whose generator (and encoder, when present) seeds
  /// the sssp stage.
  std::string init_checkpoint;

  int64_t final_resolution() const { return render_resolution * upsample_factor; }

  /// Cross-module shape checks. Throws kInvalidArgument.
  void validate() const;

  GeneratorOptions generator_options() const;
  SketchEncoderOptions encoder_options() const;
  VqOptions vq_options() const;
  RenderConfig render_config() const;

  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
  static TrainConfig load(const std::filesystem::path& path);
};

}  // namespace sssp
