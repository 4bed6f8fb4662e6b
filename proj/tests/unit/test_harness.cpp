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

#include <filesystem>

#include <nlohmann/json.hpp>

#include "sssp/checkpoint.hpp"
#include "sssp/config.hpp"
#include "sssp/error.hpp"
#include "sssp/metrics.hpp"
#include "sssp/pipeline.hpp"
#include "sssp/training.hpp"

namespace sssp {
namespace {

using json = nlohmann::json;

TrainConfig tiny_sssp() {
  return TrainConfig::from_json(json{{"stage", "sssp"},
                                     {"seed", 5},
                                     {"train_samples", 4},
                                     {"val_samples", 2},
                                     {"render_resolution", 8},
                                     {"upsample_factor", 2},
                                     {"triplane_resolution", 8},
                                     {"triplane_channels", 4},
                                     {"latent_dim", 16},
                                     {"backbone_channels", 8},
                                     {"feature_channels", 4},
                                     {"decoder_hidden", 8},
                                     {"superres_channels", 8},
                                     {"samples_per_ray", 6},
                                     {"encoder_widths", {4, 8}},
                                     {"encoder_blocks", {1, 1}},
                                     {"perceptual_stages", 1},
                                     {"steps", 3},
                                     {"batch", 2},
                                     {"log_every", 1}});
}

TrainConfig tiny_vq() {
  return TrainConfig::from_json(json{{"stage", "vq"},
                                     {"seed", 2},
                                     {"train_samples", 4},
                                     {"val_samples", 2},
                                     {"vq_resolution", 32},
                                     {"codebook_size", 8},
                                     {"codebook_dim", 4},
                                     {"vq_downsample", 4},
                                     {"vq_hidden", 8},
                                     {"steps", 2},
                                     {"batch", 2}});
}

TEST(TrainConfig, DefaultsMatchFullScale) {
  const TrainConfig cfg;
  EXPECT_EQ(cfg.final_resolution(), 512);
  EXPECT_EQ(cfg.render_resolution, 128);
  EXPECT_EQ(cfg.triplane_resolution, 256);
  EXPECT_EQ(cfg.triplane_channels, 32);
  EXPECT_EQ(cfg.latent_dim, 512);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(TrainConfig, JsonRoundTripAndErrors) {
  const TrainConfig cfg = tiny_sssp();
  EXPECT_EQ(TrainConfig::from_json(cfg.to_json()).to_json(), cfg.to_json());
  EXPECT_THROW(TrainConfig::from_json(json{{"no_such_key", 1}}), Error);
  EXPECT_THROW(TrainConfig::from_json(json{{"stage", "gan"}}), Error);
  EXPECT_THROW(TrainConfig::from_json(json{{"vq_resolution", 60}}), Error);
  EXPECT_THROW(TrainConfig::from_json(json{{"encoder_widths", {4, 8}}, {"encoder_blocks", {1}}}), Error);
  EXPECT_THROW(TrainConfig::load("/nonexistent/cfg.json"), Error);
}

TEST(TrainConfig, ShippedConfigsLoad) {
  for (const char* name : {"smoke_vq.json", "smoke_contour.json", "smoke_sssp.json", "full_scale.json"}) {
    EXPECT_NO_THROW(TrainConfig::load(std::filesystem::path(SSSP_SOURCE_DIR) / "configs" / name)) << name;
  }
  const TrainConfig smoke = TrainConfig::load(std::filesystem::path(SSSP_SOURCE_DIR) / "configs" / "smoke_sssp.json");
  EXPECT_EQ(smoke.render_resolution, 16);
  EXPECT_LE(smoke.steps, 2000);
}

TEST(TrainConfig, WPlusLayerCountMatchesGenerator) {
  TrainConfig cfg = tiny_sssp();
  cfg.latent_mode = LatentMode::kWPlus;
  PortraitModel model(cfg);
  EXPECT_EQ(cfg.encoder_options().wplus_layers, model.generator()->num_layers());
  torch::NoGradGuard no_grad;
  const LatentCode code = model.encode(torch::ones({16, 16}));
  EXPECT_EQ(code.codes.size(1), model.generator()->num_layers());
}

TEST(Checkpoint, BytesRoundTrip) {
  Checkpoint ckpt;
  ckpt.step = 17;
  ckpt.config = tiny_sssp().to_json();
  ckpt.tensors["a.f32"] = torch::randn({2, 3});
  ckpt.tensors["b.f64"] = torch::randn({4}, torch::kFloat64);
  ckpt.tensors["c.i64"] = torch::arange(5);
  ckpt.tensors["d.u8"] = torch::randint(0, 255, {2, 2}, torch::kUInt8);
  ckpt.tensors["e.scalar"] = torch::tensor(3.5f);
  const std::string bytes = ckpt.serialize();
  const Checkpoint back = Checkpoint::deserialize(bytes);
  EXPECT_EQ(back.step, 17u);
  EXPECT_EQ(back.config, ckpt.config);
  ASSERT_EQ(back.tensors.size(), ckpt.tensors.size());
  for (const auto& [name, t] : ckpt.tensors) EXPECT_TRUE(torch::equal(back.tensors.at(name), t)) << name;
  EXPECT_EQ(back.serialize(), bytes);

  const auto path = std::filesystem::temp_directory_path() / "sssp_test.ckpt";
  ckpt.save(path);
  const Checkpoint loaded = Checkpoint::load(path);
  loaded.save(path);
  EXPECT_EQ(Checkpoint::load(path).serialize(), bytes);
  std::filesystem::remove(path);
}

TEST(Checkpoint, RejectsCorruptInput) {
  Checkpoint ckpt;
  ckpt.tensors["x"] = torch::ones({3});
  const std::string bytes = ckpt.serialize();
  EXPECT_THROW(Checkpoint::deserialize(bytes.substr(0, bytes.size() - 2)), Error);
  EXPECT_THROW(Checkpoint::deserialize("NOTACKPT"), Error);
  std::string wrong_version = bytes;
  wrong_version[8] = 9;
  EXPECT_THROW(Checkpoint::deserialize(wrong_version), Error);
  try {
    Checkpoint::load("/nonexistent/x.ckpt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(Checkpoint, ModuleRestoreChecksShapes) {
  torch::nn::Linear a(3, 2), b(3, 2), c(4, 2);
  Checkpoint ckpt;
  store_module(ckpt, "m", *a);
  EXPECT_EQ(ckpt.names_with_prefix("m.").size(), 2u);
  restore_module(ckpt, "m", *b);
  EXPECT_TRUE(torch::equal(a->weight, b->weight));
  EXPECT_THROW(restore_module(ckpt, "m", *c), Error);
  EXPECT_THROW(restore_module(ckpt, "other", *b), Error);
}

TEST(PortraitModel, CheckpointRestoresOutputs) {
  const TrainConfig cfg = tiny_sssp();
  PortraitModel model(cfg);
  Checkpoint ckpt;
  ckpt.config = cfg.to_json();
  model.store(ckpt);
  auto restored = PortraitModel::from_checkpoint(ckpt);
  model.encoder()->eval();
  model.generator()->eval();
  const torch::Tensor sketch = torch::rand({16, 16});
  const LatentCode a = model.encode(sketch);
  const LatentCode b = restored->encode(sketch);
  EXPECT_TRUE(torch::equal(a.codes, b.codes));
  const torch::Tensor img = restored->render_portrait(restored->synthesize(b), b, restored->camera(0.1, 0.0));
  EXPECT_EQ(img.sizes(), (std::vector<int64_t>{3, 16, 16}));
  EXPECT_GE(img.min().item<float>(), 0.0f);
  EXPECT_LE(img.max().item<float>(), 1.0f);
  EXPECT_THROW(model.encode(torch::rand({8, 8})), Error);
}

TEST(TrainSssp, DeterministicAndLogsTerms) {
  std::vector<json> logs;
  const TrainResult a = train_sssp(tiny_sssp(), [&](const json& line) { logs.push_back(line); });
  const TrainResult b = train_sssp(tiny_sssp());
  EXPECT_EQ(a.checkpoint.serialize(), b.checkpoint.serialize());
  ASSERT_EQ(logs.size(), 3u);
  for (const char* key : {"step", "total", "recon", "region", "symmetry"}) EXPECT_TRUE(logs[0].contains(key)) << key;
  EXPECT_TRUE(a.summary["initial"].contains("total"));
  EXPECT_TRUE(a.summary["final"].contains("total"));
}

TEST(TrainSssp, FrozenGeneratorKeepsWeights) {
  TrainConfig cfg = tiny_sssp();
  cfg.frozen_generator = true;
  Checkpoint fresh;
  PortraitModel(cfg).store(fresh);
  const TrainResult r = train_sssp(cfg);
  const auto names = fresh.names_with_prefix("generator.");
  ASSERT_FALSE(names.empty());
  for (const auto& name : names) EXPECT_TRUE(torch::equal(fresh.tensors.at(name), r.checkpoint.tensors.at(name))) << name;
  bool encoder_moved = false;
  for (const auto& name : fresh.names_with_prefix("encoder.")) {
    encoder_moved = encoder_moved || !torch::equal(fresh.tensors.at(name), r.checkpoint.tensors.at(name));
  }
  EXPECT_TRUE(encoder_moved);
}

TEST(TrainContour, CloneTeacherStartsAtZeroDistance) {
  const TrainResult vq = train_vq(tiny_vq());
  EXPECT_TRUE(vq.summary.contains("train_reconstruction_l1"));
  TrainConfig cfg = tiny_vq();
  cfg.stage = Stage::kContour;
  cfg.clone_teacher = true;
  const TrainResult contour = train_contour(cfg, vq.checkpoint);
  EXPECT_TRUE(contour.summary.contains("initial_distance"));
  EXPECT_TRUE(contour.summary.contains("val_token_accuracy"));

  // A cloned contour encoder reproduces the teacher features on the
  // teacher's inputs, so the distance term starts at zero.
  auto codec = SketchCodec::from_checkpoint(vq.checkpoint);
  auto& model = *codec->model();
  model.clone_tokenizer_into_contour_encoder();
  torch::NoGradGuard no_grad;
  const torch::Tensor sketches = torch::rand({2, 1, 32, 32});
  const torch::Tensor teacher = model.tokenize(sketches);
  const ContourLossTerms terms = contour_training_losses(model.codebook, model.encode_contour(sketches),
                                                         quantize(model.codebook, teacher).tokens, teacher);
  EXPECT_EQ(terms.distance.item<double>(), 0.0);
  // The teacher is frozen.
  for (const auto& name : vq.checkpoint.names_with_prefix("vq.tokenizer.")) {
    EXPECT_TRUE(torch::equal(vq.checkpoint.tensors.at(name), contour.checkpoint.tensors.at(name))) << name;
  }
  EXPECT_TRUE(torch::equal(vq.checkpoint.tensors.at("vq.codebook"), contour.checkpoint.tensors.at("vq.codebook")));

  TrainConfig mismatched = cfg;
  mismatched.codebook_size = 16;
  EXPECT_THROW(train_contour(mismatched, vq.checkpoint), Error);
  EXPECT_THROW(train(cfg, nullptr), Error);
}

TEST(Evaluate, ReportSchemaAndAggregates) {
  auto model = std::make_shared<PortraitModel>(tiny_sssp());
  EvalOptions opts;
  opts.samples = 3;
  opts.symmetric_samples = 2;
  const json report = evaluate(*model, opts);
  ASSERT_EQ(report["samples"].size(), 3u);
  for (const char* key : {"psnr", "ssim", "cpbd"}) {
    double sum = 0.0;
    for (const auto& s : report["samples"]) sum += s[key].get<double>();
    EXPECT_NEAR(report["aggregate"][key].get<double>(), sum / 3.0, 1e-12) << key;
  }
  EXPECT_EQ(report["views"].size(), opts.yaw_sweep.size());
  EXPECT_TRUE(report.contains("flip_consistency"));

  const torch::Tensor gt = torch::rand({3, 16, 16});
  const json self = image_metrics_report({gt}, {gt});
  EXPECT_NEAR(self["aggregate"]["ssim"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(self["aggregate"]["psnr"].get<double>(), kPsnrCap);
}

}  // namespace
}  // namespace sssp
