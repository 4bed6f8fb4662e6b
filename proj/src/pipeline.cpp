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

#include "sssp/pipeline.hpp"

#include "sssp/data_synth.hpp"
#include "sssp/error.hpp"

namespace sssp {

namespace {

torch::Tensor as_batch(const torch::Tensor& image, int64_t resolution) {
  SSSP_CHECK(image.dim() == 2 && image.size(0) == resolution && image.size(1) == resolution,
             ErrorCode::kShapeMismatch,
             "expected a " + std::to_string(resolution) + "x" + std::to_string(resolution) + " image");
  return image.to(torch::kFloat32).view({1, 1, resolution, resolution});
}

TrainConfig config_of(const Checkpoint& ckpt) {
  SSSP_CHECK(!ckpt.config.empty(), ErrorCode::kInvalidArgument, "checkpoint carries no config");
  return TrainConfig::from_json(ckpt.config);
}

}  // namespace

PortraitModel::PortraitModel(const TrainConfig& config) : config_(config) {
  config_.validate();
  torch::manual_seed(config_.seed);
  generator_ = Generator(config_.generator_options());
  encoder_ = SketchEncoder(config_.encoder_options());
}

std::shared_ptr<PortraitModel> PortraitModel::from_checkpoint(const Checkpoint& ckpt) {
  auto model = std::make_shared<PortraitModel>(config_of(ckpt));
  restore_module(ckpt, "generator", *model->generator_);
  restore_module(ckpt, "encoder.sketch", *model->encoder_);
  model->generator_->eval();
  model->encoder_->eval();
  return model;
}

void PortraitModel::store(Checkpoint& ckpt) const {
  store_module(ckpt, "generator", *generator_);
  store_module(ckpt, "encoder.sketch", *encoder_);
}

Camera PortraitModel::camera(double yaw, double pitch) const {
  Camera c = CameraDistribution{}.frontal();
  c.yaw = yaw;
  c.pitch = pitch;
  return c;
}

LatentCode PortraitModel::encode(const torch::Tensor& sketch) {
  torch::NoGradGuard no_grad;
  return encoder_->forward(as_batch(sketch, sketch_resolution()));
}

TriPlane PortraitModel::synthesize(const LatentCode& latent) {
  torch::NoGradGuard no_grad;
  return generator_->synthesize_triplane(latent);
}

FeatureImage PortraitModel::render_features(const TriPlane& planes, const Camera& camera) {
  torch::NoGradGuard no_grad;
  return render(planes, generator_->decoder(), camera, config_.render_config());
}

torch::Tensor PortraitModel::render_portrait(const TriPlane& planes, const LatentCode& latent,
                                             const Camera& camera) {
  torch::NoGradGuard no_grad;
  const FeatureImage features = render_features(planes, camera);
  return generator_->upsample(features.features.unsqueeze(0), latent)[0].clamp(0.0, 1.0);
}

SketchCodec::SketchCodec(const TrainConfig& config) : config_(config) {
  config_.validate();
  torch::manual_seed(config_.seed);
  model_ = VqSketchModel(config_.vq_options());
}

std::shared_ptr<SketchCodec> SketchCodec::from_checkpoint(const Checkpoint& ckpt) {
  auto codec = std::make_shared<SketchCodec>(config_of(ckpt));
  restore_module(ckpt, "vq", *codec->model_);
  codec->model_->eval();
  return codec;
}

void SketchCodec::store(Checkpoint& ckpt) const { store_module(ckpt, "vq", *model_); }

torch::Tensor SketchCodec::contour_to_sketch(const torch::Tensor& contour) {
  torch::NoGradGuard no_grad;
  return model_->contour_to_sketch(as_batch(contour, resolution()))[0][0];
}

}  // namespace sssp
