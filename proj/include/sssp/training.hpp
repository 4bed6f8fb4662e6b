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

#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "sssp/checkpoint.hpp"
#include "sssp/config.hpp"
#include "sssp/data_synth.hpp"
#include "sssp/pipeline.hpp"

namespace sssp {

/// Receives one JSON object per logged step ({"stage", "step", loss terms...}).
using LogFn = std::function<void(const nlohmann::json&)>;

struct TrainResult {
  Checkpoint checkpoint;
  /// Stage-specific summary: probe losses before/after for sssp, validation
  /// reconstruction L1 for vq, held-out token accuracy for contour.
  nlohmann::json summary = nlohmann::json::object();
};

TrainResult train_vq(const TrainConfig& config, const LogFn& log = {});

/// Trains the contour encoder against the frozen tokenizer and codebook of
/// `vq_ckpt`. The result carries every "vq.*" entry.
TrainResult train_contour(const TrainConfig& config, const Checkpoint& vq_ckpt, const LogFn& log = {});

TrainResult train_sssp(const TrainConfig& config, const LogFn& log = {});

/// Dispatches on `config.stage`; the contour stage needs `vq_ckpt`.
TrainResult train(const TrainConfig& config, const Checkpoint* vq_ckpt, const LogFn& log = {});

/// Stacked sketches of `samples` as [B, 1, H, H].
torch::Tensor stack_sketches(const std::vector<const Sample*>& samples);

/// Mean L1 between sketches and their VQ reconstructions.
double vq_reconstruction_l1(VqSketchModelImpl& model, const Dataset& data);

/// Fraction of grid cells whose contour token equals the teacher token.
double contour_token_accuracy(VqSketchModelImpl& model, const Dataset& data);

/// Frontal-yaw sweep of symmetric faces: each sample's face has no asymmetry
/// terms, so its horizontally flipped sketch is the sketch of the mirrored view.
std::vector<Sample> symmetric_samples(int64_t count, uint64_t seed, int64_t resolution,
                                      const CameraDistribution& cameras);

/// Mean L1 between render(T(flip S), mirror(cam)) and hflip(render(T(S), cam))
/// on the low-resolution RGB images.
double flip_consistency(PortraitModel& model, const std::vector<Sample>& samples);

/// Per-sample PSNR / SSIM / CPBD of `predictions` against `targets`
/// ([3, H, W] each) plus their means under "aggregate".
nlohmann::json image_metrics_report(const std::vector<torch::Tensor>& predictions,
                                    const std::vector<torch::Tensor>& targets);

struct EvalOptions {
  int64_t samples = 16;
  uint64_t data_seed = 1001;
  std::vector<double> yaw_sweep{-0.4, -0.2, 0.0, 0.2, 0.4};
  int64_t symmetric_samples = 8;
};

/// JSON report: "samples"/"aggregate" for the input views, "views" for the yaw
/// sweep against analytic ground truth, and "flip_consistency".
nlohmann::json evaluate(PortraitModel& model, const EvalOptions& options = {});

}  // namespace sssp
