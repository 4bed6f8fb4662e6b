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

#include <memory>

#include "sssp/camera.hpp"
#include "sssp/checkpoint.hpp"
#include "sssp/config.hpp"
#include "sssp/generator.hpp"
#include "sssp/renderer.hpp"
#include "sssp/sketch_encoder.hpp"
#include "sssp/triplane.hpp"
#include "sssp/vq_sketch.hpp"

namespace sssp {

/// Sketch encoder plus generator. Inference methods run without autograd and
/// may be called concurrently once loading is done.
class PortraitModel {
 public:
  /// Fresh parameters drawn from `config.seed`.
  explicit PortraitModel(const TrainConfig& config);

  /// Restores "generator.*" and "encoder.sketch.*" entries.
  static std::shared_ptr<PortraitModel> from_checkpoint(const Checkpoint& ckpt);
  void store(Checkpoint& ckpt) const;

  const TrainConfig& config() const { return config_; }
  Generator& generator() { return generator_; }
  SketchEncoder& encoder() { return encoder_; }

  int64_t sketch_resolution() const { return config_.final_resolution(); }

  /// Camera with the given pose and the training radius / field of view.
  Camera camera(double yaw, double pitch) const;

  /// [H, H] sketch in [0, 1] to a batch-1 latent.
  LatentCode encode(const torch::Tensor& sketch);
  TriPlane synthesize(const LatentCode& latent);
  FeatureImage render_features(const TriPlane& planes, const Camera& camera);
  /// Final [3, H, H] portrait clamped to [0, 1].
  torch::Tensor render_portrait(const TriPlane& planes, const LatentCode& latent, const Camera& camera);

  int64_t encoder_calls() const { return encoder_->calls(); }
  int64_t backbone_calls() const { return generator_->backbone_calls(); }

 private:
  TrainConfig config_;
  Generator generator_{nullptr};
  SketchEncoder encoder_{nullptr};
};

/// Contour-to-sketch codec restored from "vq.*" entries.
class SketchCodec {
 public:
  explicit SketchCodec(const TrainConfig& config);
  static std::shared_ptr<SketchCodec> from_checkpoint(const Checkpoint& ckpt);
  void store(Checkpoint& ckpt) const;

  const TrainConfig& config() const { return config_; }
  VqSketchModel& model() { return model_; }
  int64_t resolution() const { return config_.vq_resolution; }

  /// [H, H] contour to [H, H] sketch, both in [0, 1].
  torch::Tensor contour_to_sketch(const torch::Tensor& contour);

 private:
  TrainConfig config_;
  VqSketchModel model_{nullptr};
};

}  // namespace sssp
