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

#include "sssp/training.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "sssp/error.hpp"
#include "sssp/image.hpp"
#include "sssp/losses.hpp"
#include "sssp/metrics.hpp"
#include "sssp/renderer.hpp"

namespace sssp {

namespace {

constexpr int64_t kDeadCodeWindow = 50;

CameraDistribution cameras_of(const TrainConfig& config) {
  CameraDistribution c;
  c.yaw_range = config.yaw_range;
  c.pitch_range = config.pitch_range;
  return c;
}

/// Epoch-shuffled index stream.
class BatchSampler {
 public:
  BatchSampler(int64_t size, int64_t batch, uint64_t seed) : order_(static_cast<size_t>(size)), batch_(batch), rng_(seed) {
    std::iota(order_.begin(), order_.end(), 0);
    std::shuffle(order_.begin(), order_.end(), rng_);
  }

  std::vector<int64_t> next() {
    std::vector<int64_t> out;
    while (static_cast<int64_t>(out.size()) < batch_) {
      if (cursor_ == order_.size()) {
        std::shuffle(order_.begin(), order_.end(), rng_);
        cursor_ = 0;
      }
      out.push_back(order_[cursor_++]);
    }
    return out;
  }

 private:
  std::vector<int64_t> order_;
  int64_t batch_;
  std::mt19937_64 rng_;
  size_t cursor_ = 0;
};

std::vector<const Sample*> gather(const Dataset& data, const std::vector<int64_t>& idx) {
  std::vector<const Sample*> out;
  out.reserve(idx.size());
  for (const int64_t i : idx) out.push_back(&data[i]);
  return out;
}

std::vector<const Sample*> all_of(const Dataset& data) {
  std::vector<const Sample*> out;
  for (const auto& s : data) out.push_back(&s);
  return out;
}

torch::Tensor stack_contours(const std::vector<const Sample*>& samples) {
  std::vector<torch::Tensor> t;
  for (const auto* s : samples) t.push_back(s->contour);
  return torch::stack(t).unsqueeze(1);
}

torch::Tensor stack_images(const std::vector<const Sample*>& samples) {
  std::vector<torch::Tensor> t;
  for (const auto* s : samples) t.push_back(s->image);
  return torch::stack(t);
}

void check_finite(const torch::Tensor& loss, const std::string& stage, int64_t step, const nlohmann::json& terms) {
  if (!std::isfinite(loss.item<double>())) {
    throw Error(ErrorCode::kNonFinite,
                stage + " loss became non-finite at step " + std::to_string(step) + ": " + terms.dump());
  }
}

template <typename Fn>
void for_chunks(int64_t n, int64_t chunk, Fn&& fn) {
  for (int64_t start = 0; start < n; start += chunk) fn(start, std::min(chunk, n - start));
}

// ---------------------------------------------------------------------------
// Portrait stage.

struct SsspBatch {
  torch::Tensor sketches;  // [B, 1, H, H]
  torch::Tensor images;    // [B, 3, H, H]
  torch::Tensor targets;   // [B, 3, h, h]
  std::vector<Camera> cameras;
  std::vector<std::array<RegionSpec, 4>> regions;
  std::vector<torch::Tensor> region_targets;  // 4 x [B, 3, h, h]
};

SsspBatch make_sssp_batch(const std::vector<const Sample*>& samples, const TrainConfig& config) {
  SsspBatch b;
  b.sketches = stack_sketches(samples);
  b.images = stack_images(samples);
  b.targets = area_downsample(b.images, config.upsample_factor);
  std::array<std::vector<torch::Tensor>, 4> crops;
  for (const auto* s : samples) {
    b.cameras.push_back(s->camera);
    b.regions.push_back(s->regions);
    for (size_t r = 0; r < 4; ++r) {
      crops[r].push_back(crop_resize(s->image, s->regions[r], config.render_resolution));
    }
  }
  for (auto& c : crops) b.region_targets.push_back(torch::stack(c));
  return b;
}

struct SsspTerms {
  EncoderLossBreakdown encoder;
  torch::Tensor superres;
  torch::Tensor total;  // encoder total + superres
};

SsspTerms sssp_losses(PortraitModel& model, const SsspBatch& batch, const TrainConfig& config,
                      PerceptualExtractorImpl* extractor) {
  auto& gen = *model.generator();
  const RenderConfig rc = config.render_config();
  const double extent = gen.options().extent;
  const int64_t n = batch.sketches.size(0);

  const LatentCode latent = model.encoder()->forward(batch.sketches);
  const torch::Tensor planes = gen.synthesize_planes(latent);

  std::vector<torch::Tensor> features;
  std::array<std::vector<torch::Tensor>, 4> region_rgb;
  for (int64_t i = 0; i < n; ++i) {
    const TriPlane tp(planes[i], extent);
    const Camera& cam = batch.cameras[static_cast<size_t>(i)];
    features.push_back(render(tp, gen.decoder(), cam, rc).features);
    if (config.weights.region > 0.0) {
      for (size_t r = 0; r < 4; ++r) {
        const Camera rcam = region_camera(cam, batch.regions[static_cast<size_t>(i)][r]);
        region_rgb[r].push_back(render(tp, gen.decoder(), rcam, rc).rgb());
      }
    }
  }
  const torch::Tensor feature_images = torch::stack(features);

  EncoderLossInputs in;
  in.rgb = feature_images.narrow(1, 0, 3);
  in.target_low = batch.targets;
  if (config.weights.region > 0.0) {
    for (auto& r : region_rgb) in.region_renders.push_back(torch::stack(r));
    in.region_targets = batch.region_targets;
  }
  if (config.weights.symmetry > 0.0) {
    const LatentCode flipped = model.encoder()->forward(hflip(batch.sketches));
    in.planes = planes;
    in.flipped_planes = gen.synthesize_planes(flipped);
  }
  SsspTerms t;
  t.encoder = total_encoder_loss(in, config.weights, extractor);
  if (config.superres_weight > 0.0) {
    const torch::Tensor up = gen.upsample(feature_images.detach(), latent);
    t.superres = (up - batch.images).abs().mean();
  } else {
    t.superres = torch::zeros({});
  }
  t.total = t.encoder.total + config.superres_weight * t.superres;
  return t;
}

nlohmann::json sssp_terms_json(const SsspTerms& t) {
  return {{"total", t.encoder.total.item<double>()},
          {"recon", t.encoder.recon.item<double>()},
          {"region", t.encoder.region.item<double>()},
          {"symmetry", t.encoder.symmetry.item<double>()},
          {"superres", t.superres.item<double>()}};
}

}  // namespace

torch::Tensor stack_sketches(const std::vector<const Sample*>& samples) {
  SSSP_CHECK(!samples.empty(), ErrorCode::kInvalidArgument, "empty batch");
  std::vector<torch::Tensor> t;
  for (const auto* s : samples) t.push_back(s->sketch);
  return torch::stack(t).unsqueeze(1);
}

// ---------------------------------------------------------------------------
// Sketch codec.

TrainResult train_vq(const TrainConfig& config, const LogFn& log) {
  config.validate();
  torch::manual_seed(config.seed);
  SketchCodec codec(config);
  auto& vq = *codec.model();
  const Dataset data(Split::kTrain, config.train_samples, config.data_seed, config.vq_resolution,
                     cameras_of(config));
  const Dataset val(Split::kVal, config.val_samples, config.data_seed, config.vq_resolution, cameras_of(config));
  const torch::Tensor all = stack_sketches(all_of(data));

  // Seed the codebook with encoder outputs so no entry starts far from the data.
  auto gen = at::make_generator<at::CPUGeneratorImpl>(config.seed + 1);
  auto reset_entries = [&](const torch::Tensor& cells, const torch::Tensor& which) {
    torch::NoGradGuard no_grad;
    const torch::Tensor pick = torch::randint(cells.size(0), {which.size(0)}, gen, torch::kLong);
    vq.codebook.index_copy_(0, which, cells.index_select(0, pick) + 1e-3 * torch::randn({which.size(0), cells.size(1)}, gen));
  };
  auto latent_cells = [&](const torch::Tensor& sketches) {
    torch::NoGradGuard no_grad;
    const torch::Tensor z = vq.tokenize(sketches);
    return z.permute({0, 2, 3, 1}).reshape({-1, z.size(1)});
  };
  reset_entries(latent_cells(all), torch::arange(config.codebook_size));

  torch::optim::Adam opt(vq.parameters(), torch::optim::AdamOptions(config.learning_rate));
  BatchSampler sampler(data.size(), config.batch, config.seed);
  torch::Tensor usage = torch::zeros({config.codebook_size}, torch::kLong);
  for (int64_t step = 0; step < config.steps; ++step) {
    const torch::Tensor s = stack_sketches(gather(data, sampler.next()));
    const torch::Tensor z = vq.tokenize(s);
    const Quantized q = quantize(vq.codebook, z);
    const torch::Tensor recon = vq.decode_sketch(q.straight_through);
    const VqLossTerms t = vq_training_losses(s, recon, z, q.features, config.commitment_beta);
    const nlohmann::json terms{{"total", t.total.item<double>()},
                               {"reconstruction", t.reconstruction.item<double>()},
                               {"codebook", t.codebook.item<double>()},
                               {"commitment", t.commitment.item<double>()}};
    check_finite(t.total, "vq", step, terms);
    opt.zero_grad();
    t.total.backward();
    opt.step();

    usage.index_add_(0, q.tokens.flatten(), torch::ones({q.tokens.numel()}, torch::kLong));
    if ((step + 1) % kDeadCodeWindow == 0) {
      const torch::Tensor dead = (usage == 0).nonzero().flatten();
      if (dead.numel() > 0) reset_entries(latent_cells(s), dead);
      usage.zero_();
    }
    if (log && (step % config.log_every == 0 || step + 1 == config.steps)) {
      nlohmann::json line = terms;
      line["stage"] = "vq";
      line["step"] = step;
      log(line);
    }
  }
  vq.eval();
  TrainResult result;
  result.summary = {{"train_reconstruction_l1", vq_reconstruction_l1(vq, data)},
                    {"val_reconstruction_l1", vq_reconstruction_l1(vq, val)}};
  result.checkpoint.step = static_cast<uint64_t>(config.steps);
  result.checkpoint.config = config.to_json();
  codec.store(result.checkpoint);
  return result;
}

double vq_reconstruction_l1(VqSketchModelImpl& model, const Dataset& data) {
  torch::NoGradGuard no_grad;
  const torch::Tensor s = stack_sketches(all_of(data));
  double sum = 0.0;
  for_chunks(s.size(0), 64, [&](int64_t start, int64_t len) {
    const torch::Tensor x = s.narrow(0, start, len);
    sum += (model.reconstruct(x) - x).abs().sum().item<double>();
  });
  return sum / static_cast<double>(s.numel());
}

double contour_token_accuracy(VqSketchModelImpl& model, const Dataset& data) {
  torch::NoGradGuard no_grad;
  const auto samples = all_of(data);
  const torch::Tensor teacher = quantize(model.codebook, model.tokenize(stack_sketches(samples))).tokens;
  const torch::Tensor student = quantize(model.codebook, model.encode_contour(stack_contours(samples))).tokens;
  return (teacher == student).to(torch::kFloat64).mean().item<double>();
}

TrainResult train_contour(const TrainConfig& config, const Checkpoint& vq_ckpt, const LogFn& log) {
  config.validate();
  torch::manual_seed(config.seed);
  auto codec = SketchCodec::from_checkpoint(vq_ckpt);
  const VqOptions have = codec->config().vq_options();
  const VqOptions want = config.vq_options();
  SSSP_CHECK(have.image_resolution == want.image_resolution && have.codebook_size == want.codebook_size &&
                 have.codebook_dim == want.codebook_dim && have.downsample == want.downsample &&
                 have.hidden == want.hidden,
             ErrorCode::kShapeMismatch, "contour config does not match the sketch codec checkpoint");
  auto& vq = *codec->model();
  vq.train();
  // Teacher (tokenizer, decoder, codebook) stays frozen.
  for (auto& p : vq.parameters()) p.set_requires_grad(false);
  if (config.clone_teacher) vq.clone_tokenizer_into_contour_encoder();
  for (auto& p : vq.contour_encoder->parameters()) p.set_requires_grad(true);

  const Dataset data(Split::kTrain, config.train_samples, config.data_seed, config.vq_resolution,
                     cameras_of(config));
  const Dataset val(Split::kVal, config.val_samples, config.data_seed, config.vq_resolution, cameras_of(config));
  // Student targets: the teacher's tokens and its continuous features.
  torch::Tensor teacher_tokens;
  torch::Tensor teacher_latent;
  {
    torch::NoGradGuard no_grad;
    teacher_latent = vq.tokenize(stack_sketches(all_of(data)));
    teacher_tokens = quantize(vq.codebook, teacher_latent).tokens;
  }

  torch::optim::Adam opt(vq.contour_encoder->parameters(), torch::optim::AdamOptions(config.learning_rate));
  BatchSampler sampler(data.size(), config.batch, config.seed);
  TrainResult result;
  for (int64_t step = 0; step < config.steps; ++step) {
    const std::vector<int64_t> idx = sampler.next();
    const torch::Tensor rows = torch::tensor(idx, torch::kLong);
    const torch::Tensor tokens = teacher_tokens.index_select(0, rows);
    const torch::Tensor features = teacher_latent.index_select(0, rows);
    const torch::Tensor z = vq.encode_contour(stack_contours(gather(data, idx)));
    const ContourLossTerms t = contour_training_losses(vq.codebook, z, tokens, features, config.contour_distance,
                                                       config.contour_distance_weight);
    const nlohmann::json terms{{"total", t.total.item<double>()},
                               {"cross_entropy", t.cross_entropy.item<double>()},
                               {"distance", t.distance.item<double>()}};
    check_finite(t.total, "contour", step, terms);
    if (step == 0) result.summary["initial_distance"] = terms["distance"];
    opt.zero_grad();
    t.total.backward();
    opt.step();
    if (log && (step % config.log_every == 0 || step + 1 == config.steps)) {
      nlohmann::json line = terms;
      line["stage"] = "contour";
      line["step"] = step;
      log(line);
    }
  }
  for (auto& p : vq.parameters()) p.set_requires_grad(true);
  vq.eval();
  result.summary["train_token_accuracy"] = contour_token_accuracy(vq, data);
  result.summary["val_token_accuracy"] = contour_token_accuracy(vq, val);
  result.checkpoint.step = static_cast<uint64_t>(config.steps);
  result.checkpoint.config = config.to_json();
  codec->store(result.checkpoint);
  return result;
}

// ---------------------------------------------------------------------------
// Portrait encoder and generator.

TrainResult train_sssp(const TrainConfig& config, const LogFn& log) {
  config.validate();
  torch::manual_seed(config.seed);
  PortraitModel model(config);
  if (!config.init_checkpoint.empty()) {
    const Checkpoint init = Checkpoint::load(config.init_checkpoint);
    restore_module(init, "generator", *model.generator());
    if (!init.names_with_prefix("encoder.sketch.").empty()) {
      restore_module(init, "encoder.sketch", *model.encoder());
    }
  }
  std::vector<torch::Tensor> params = model.encoder()->parameters();
  if (config.frozen_generator) {
    for (auto& p : model.generator()->parameters()) p.set_requires_grad(false);
  } else {
    for (auto& p : model.generator()->parameters()) params.push_back(p);
  }
  PerceptualExtractor extractor{nullptr};
  if (config.perceptual_stages > 0) extractor = PerceptualExtractor(config.perceptual_stages, 3, 1234);
  PerceptualExtractorImpl* ext = extractor ? extractor.get() : nullptr;

  const Dataset data(Split::kTrain, config.train_samples, config.data_seed, config.final_resolution(),
                     cameras_of(config));
  std::vector<int64_t> probe_idx(static_cast<size_t>(std::min(config.batch, data.size())));
  std::iota(probe_idx.begin(), probe_idx.end(), 0);
  const SsspBatch probe = make_sssp_batch(gather(data, probe_idx), config);
  auto probe_terms = [&] {
    torch::NoGradGuard no_grad;
    return sssp_terms_json(sssp_losses(model, probe, config, ext));
  };

  TrainResult result;
  result.summary["initial"] = probe_terms();
  torch::optim::Adam opt(params, torch::optim::AdamOptions(config.learning_rate));
  BatchSampler sampler(data.size(), config.batch, config.seed);
  for (int64_t step = 0; step < config.steps; ++step) {
    const SsspBatch batch = make_sssp_batch(gather(data, sampler.next()), config);
    const SsspTerms t = sssp_losses(model, batch, config, ext);
    const nlohmann::json terms = sssp_terms_json(t);
    check_finite(t.total, "sssp", step, terms);
    opt.zero_grad();
    t.total.backward();
    opt.step();
    if (log && (step % config.log_every == 0 || step + 1 == config.steps)) {
      nlohmann::json line = terms;
      line["stage"] = "sssp";
      line["step"] = step;
      log(line);
    }
  }
  if (config.frozen_generator) {
    for (auto& p : model.generator()->parameters()) p.set_requires_grad(true);
  }
  model.generator()->eval();
  model.encoder()->eval();
  result.summary["final"] = probe_terms();
  result.checkpoint.step = static_cast<uint64_t>(config.steps);
  result.checkpoint.config = config.to_json();
  model.store(result.checkpoint);
  return result;
}

TrainResult train(const TrainConfig& config, const Checkpoint* vq_ckpt, const LogFn& log) {
  switch (config.stage) {
    case Stage::kVq: return train_vq(config, log);
    case Stage::kContour:
      SSSP_CHECK(vq_ckpt != nullptr, ErrorCode::kInvalidArgument, "the contour stage needs a sketch codec checkpoint");
      return train_contour(config, *vq_ckpt, log);
    case Stage::kSssp: return train_sssp(config, log);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown stage");
}

// ---------------------------------------------------------------------------
// Evaluation.

std::vector<Sample> symmetric_samples(int64_t count, uint64_t seed, int64_t resolution,
                                      const CameraDistribution& cameras) {
  std::mt19937_64 rng(seed);
  std::vector<Sample> out;
  for (int64_t i = 0; i < count; ++i) {
    const FaceParams face = FaceParams::sample(rng, true);
    const Camera cam = cameras.sample(rng);
    out.push_back(make_sample(face, cam, resolution, seed + static_cast<uint64_t>(i)));
  }
  return out;
}

double flip_consistency(PortraitModel& model, const std::vector<Sample>& samples) {
  SSSP_CHECK(!samples.empty(), ErrorCode::kInvalidArgument, "flip_consistency needs samples");
  double sum = 0.0;
  for (const auto& s : samples) {
    const TriPlane a = model.synthesize(model.encode(s.sketch));
    const TriPlane b = model.synthesize(model.encode(hflip(s.sketch)));
    const torch::Tensor ra = model.render_features(a, s.camera).rgb();
    const torch::Tensor rb = model.render_features(b, mirror_camera(s.camera)).rgb();
    sum += (rb - hflip(ra)).abs().mean().item<double>();
  }
  return sum / static_cast<double>(samples.size());
}

nlohmann::json image_metrics_report(const std::vector<torch::Tensor>& predictions,
                                    const std::vector<torch::Tensor>& targets) {
  SSSP_CHECK(predictions.size() == targets.size() && !predictions.empty(), ErrorCode::kInvalidArgument,
             "metrics need equally many predictions and targets");
  nlohmann::json samples = nlohmann::json::array();
  double p = 0.0, s = 0.0, c = 0.0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    const double pi = psnr(predictions[i], targets[i]);
    const double si = ssim(predictions[i], targets[i]);
    const double ci = cpbd(to_gray(predictions[i]));
    samples.push_back({{"psnr", pi}, {"ssim", si}, {"cpbd", ci}});
    p += pi;
    s += si;
    c += ci;
  }
  const double n = static_cast<double>(predictions.size());
  return {{"samples", samples}, {"aggregate", {{"psnr", p / n}, {"ssim", s / n}, {"cpbd", c / n}}}};
}

nlohmann::json evaluate(PortraitModel& model, const EvalOptions& options) {
  const TrainConfig& cfg = model.config();
  const CameraDistribution cameras = cameras_of(cfg);
  const int64_t res = cfg.final_resolution();
  const Dataset data(Split::kVal, options.samples, options.data_seed, res, cameras);

  std::vector<torch::Tensor> preds, targets;
  std::vector<std::vector<torch::Tensor>> view_preds(options.yaw_sweep.size()), view_targets(options.yaw_sweep.size());
  for (const auto& sample : data) {
    const LatentCode latent = model.encode(sample.sketch);
    const TriPlane planes = model.synthesize(latent);
    preds.push_back(model.render_portrait(planes, latent, sample.camera));
    targets.push_back(sample.image);
    for (size_t v = 0; v < options.yaw_sweep.size(); ++v) {
      Camera cam = sample.camera;
      cam.yaw = options.yaw_sweep[v];
      view_preds[v].push_back(model.render_portrait(planes, latent, cam));
      view_targets[v].push_back(render_face(sample.face, cam, res).image);
    }
  }
  nlohmann::json report = image_metrics_report(preds, targets);
  nlohmann::json views = nlohmann::json::array();
  for (size_t v = 0; v < options.yaw_sweep.size(); ++v) {
    nlohmann::json entry = image_metrics_report(view_preds[v], view_targets[v]);
    entry["yaw"] = options.yaw_sweep[v];
    views.push_back(std::move(entry));
  }
  report["views"] = std::move(views);
  report["flip_consistency"] =
      flip_consistency(model, symmetric_samples(options.symmetric_samples, options.data_seed, res, cameras));
  report["excluded_metrics"] = {"fid", "is"};
  report["config"] = cfg.to_json();
  return report;
}

}  // namespace sssp
