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

#include "sssp/config.hpp"

#include <bit>

#include "sssp/error.hpp"
#include "sssp/image.hpp"

namespace sssp {

std::string stage_name(Stage stage) {
  switch (stage) {
    case Stage::kVq: return "vq";
    case Stage::kContour: return "contour";
    case Stage::kSssp: return "sssp";
  }
  return "sssp";
}

Stage stage_from_string(const std::string& name) {
  if (name == "vq") return Stage::kVq;
  if (name == "contour") return Stage::kContour;
  if (name == "sssp") return Stage::kSssp;
  throw Error(ErrorCode::kInvalidArgument, "unknown stage: " + name);
}

void TrainConfig::validate() const {
  generator_options().validate();
  vq_options().validate();
  SSSP_CHECK(train_samples >= 1 && val_samples >= 1, ErrorCode::kInvalidArgument, "sample counts must be >= 1");
  SSSP_CHECK(yaw_range >= 0.0 && pitch_range >= 0.0 && pitch_range < 1.5, ErrorCode::kInvalidArgument,
             "invalid camera ranges");
  SSSP_CHECK(samples_per_ray >= 1, ErrorCode::kInvalidArgument, "samples_per_ray must be >= 1");
  SSSP_CHECK(encoder_widths.size() == encoder_blocks.size() && !encoder_widths.empty(),
             ErrorCode::kInvalidArgument, "encoder widths and blocks must have equal, nonzero length");
  SSSP_CHECK(learning_rate > 0.0, ErrorCode::kInvalidArgument, "learning_rate must be positive");
  SSSP_CHECK(steps >= 0 && batch >= 1 && log_every >= 1, ErrorCode::kInvalidArgument,
             "steps, batch and log_every must be positive");
  SSSP_CHECK(weights.recon >= 0.0 && weights.region >= 0.0 && weights.symmetry >= 0.0 && superres_weight >= 0.0,
             ErrorCode::kInvalidArgument, "loss weights must be >= 0");
  SSSP_CHECK(contour_distance_weight >= 0.0, ErrorCode::kInvalidArgument, "contour distance weight must be >= 0");
  SSSP_CHECK(perceptual_stages >= 0, ErrorCode::kInvalidArgument, "perceptual_stages must be >= 0");
  // Region renders reuse the working resolution, so the boxes need at least a
  // few pixels of the final image.
  SSSP_CHECK(final_resolution() >= 8, ErrorCode::kInvalidArgument, "final resolution must be >= 8");
}

GeneratorOptions TrainConfig::generator_options() const {
  GeneratorOptions g;
  g.latent_dim = latent_dim;
  g.triplane_resolution = triplane_resolution;
  g.triplane_channels = triplane_channels;
  g.backbone_channels = backbone_channels;
  g.feature_channels = feature_channels;
  g.decoder_hidden = decoder_hidden;
  g.render_resolution = render_resolution;
  g.upsample_factor = upsample_factor;
  g.superres_channels = superres_channels;
  return g;
}

SketchEncoderOptions TrainConfig::encoder_options() const {
  SketchEncoderOptions e = resnet34 ? SketchEncoderOptions::resnet34_preset(final_resolution(), latent_dim)
                                    : SketchEncoderOptions{};
  e.input_resolution = final_resolution();
  e.latent_dim = latent_dim;
  e.mode = latent_mode;
  if (!resnet34) {
    e.widths = encoder_widths;
    e.blocks = encoder_blocks;
  }
  // Backbone: const conv + one per doubling + to_planes; head: one per doubling + to_rgb.
  const int64_t n_up = std::bit_width(static_cast<uint64_t>(triplane_resolution / 4)) - 1;
  const int64_t n_sr = std::bit_width(static_cast<uint64_t>(upsample_factor)) - 1;
  e.wplus_layers = (n_up + 2) + (n_sr + 1);
  return e;
}

VqOptions TrainConfig::vq_options() const {
  VqOptions v;
  v.image_resolution = vq_resolution;
  v.codebook_size = codebook_size;
  v.codebook_dim = codebook_dim;
  v.downsample = vq_downsample;
  v.hidden = vq_hidden;
  v.commitment_beta = commitment_beta;
  return v;
}

RenderConfig TrainConfig::render_config() const {
  RenderConfig r;
  r.resolution = render_resolution;
  r.samples_per_ray = samples_per_ray;
  return r;
}

nlohmann::json TrainConfig::to_json() const {
  return {
      {"stage", stage_name(stage)},
      {"seed", seed},
      {"train_samples", train_samples},
      {"val_samples", val_samples},
      {"data_seed", data_seed},
      {"yaw_range", yaw_range},
      {"pitch_range", pitch_range},
      {"render_resolution", render_resolution},
      {"upsample_factor", upsample_factor},
      {"triplane_resolution", triplane_resolution},
      {"triplane_channels", triplane_channels},
      {"latent_dim", latent_dim},
      {"backbone_channels", backbone_channels},
      {"feature_channels", feature_channels},
      {"decoder_hidden", decoder_hidden},
      {"superres_channels", superres_channels},
      {"samples_per_ray", samples_per_ray},
      {"latent_mode", latent_mode_name(latent_mode)},
      {"resnet34", resnet34},
      {"encoder_widths", encoder_widths},
      {"encoder_blocks", encoder_blocks},
      {"vq_resolution", vq_resolution},
      {"codebook_size", codebook_size},
      {"codebook_dim", codebook_dim},
      {"vq_downsample", vq_downsample},
      {"vq_hidden", vq_hidden},
      {"commitment_beta", commitment_beta},
      {"contour_distance", contour_distance == FeatureDistance::kL2 ? "l2" : "l1"},
      {"contour_distance_weight", contour_distance_weight},
      {"clone_teacher", clone_teacher},
      {"lambda_recon", weights.recon},
      {"lambda_region", weights.region},
      {"lambda_symmetry", weights.symmetry},
      {"superres_weight", superres_weight},
      {"perceptual_stages", perceptual_stages},
      {"learning_rate", learning_rate},
      {"steps", steps},
      {"batch", batch},
      {"log_every", log_every},
      {"frozen_generator", frozen_generator},
      {"init_checkpoint", init_checkpoint},
  };
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  SSSP_CHECK(j.is_object(), ErrorCode::kInvalidArgument, "config must be a JSON object");
  TrainConfig c;
  const nlohmann::json known = c.to_json();
  for (const auto& [key, value] : j.items()) {
    SSSP_CHECK(known.contains(key), ErrorCode::kInvalidArgument, "unknown config key: " + key);
  }
  try {
    if (j.contains("stage")) c.stage = stage_from_string(j.at("stage").get<std::string>());
    if (j.contains("latent_mode")) c.latent_mode = latent_mode_from_string(j.at("latent_mode").get<std::string>());
    if (j.contains("contour_distance")) {
      const auto d = j.at("contour_distance").get<std::string>();
      SSSP_CHECK(d == "l1" || d == "l2", ErrorCode::kInvalidArgument, "contour_distance must be l1 or l2");
      c.contour_distance = d == "l1" ? FeatureDistance::kL1 : FeatureDistance::kL2;
    }
#define SSSP_CFG(key, field) \
  if (j.contains(key)) j.at(key).get_to(field)
    SSSP_CFG("seed", c.seed);
    SSSP_CFG("train_samples", c.train_samples);
    SSSP_CFG("val_samples", c.val_samples);
    SSSP_CFG("data_seed", c.data_seed);
    SSSP_CFG("yaw_range", c.yaw_range);
    SSSP_CFG("pitch_range", c.pitch_range);
    SSSP_CFG("render_resolution", c.render_resolution);
    SSSP_CFG("upsample_factor", c.upsample_factor);
    SSSP_CFG("triplane_resolution", c.triplane_resolution);
    SSSP_CFG("triplane_channels", c.triplane_channels);
    SSSP_CFG("latent_dim", c.latent_dim);
    SSSP_CFG("backbone_channels", c.backbone_channels);
    SSSP_CFG("feature_channels", c.feature_channels);
    SSSP_CFG("decoder_hidden", c.decoder_hidden);
    SSSP_CFG("superres_channels", c.superres_channels);
    SSSP_CFG("samples_per_ray", c.samples_per_ray);
    SSSP_CFG("resnet34", c.resnet34);
    SSSP_CFG("encoder_widths", c.encoder_widths);
    SSSP_CFG("encoder_blocks", c.encoder_blocks);
    SSSP_CFG("vq_resolution", c.vq_resolution);
    SSSP_CFG("codebook_size", c.codebook_size);
    SSSP_CFG("codebook_dim", c.codebook_dim);
    SSSP_CFG("vq_downsample", c.vq_downsample);
    SSSP_CFG("vq_hidden", c.vq_hidden);
    SSSP_CFG("commitment_beta", c.commitment_beta);
    SSSP_CFG("contour_distance_weight", c.contour_distance_weight);
    SSSP_CFG("clone_teacher", c.clone_teacher);
    SSSP_CFG("lambda_recon", c.weights.recon);
    SSSP_CFG("lambda_region", c.weights.region);
    SSSP_CFG("lambda_symmetry", c.weights.symmetry);
    SSSP_CFG("superres_weight", c.superres_weight);
    SSSP_CFG("perceptual_stages", c.perceptual_stages);
    SSSP_CFG("learning_rate", c.learning_rate);
    SSSP_CFG("steps", c.steps);
    SSSP_CFG("batch", c.batch);
    SSSP_CFG("log_every", c.log_every);
    SSSP_CFG("frozen_generator", c.frozen_generator);
    SSSP_CFG("init_checkpoint", c.init_checkpoint);
#undef SSSP_CFG
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

TrainConfig TrainConfig::load(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, "cannot parse " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace sssp
