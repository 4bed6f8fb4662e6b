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

#include "sssp/vq_sketch.hpp"

#include <bit>

#include "sssp/error.hpp"

namespace sssp {

namespace F = torch::nn::functional;

namespace {

constexpr int64_t kDistanceChunk = 512;

torch::Tensor lrelu(const torch::Tensor& x) {
  return F::leaky_relu(x, F::LeakyReLUFuncOptions().negative_slope(0.2));
}

int64_t log2_exact(int64_t v) { return std::countr_zero(static_cast<uint64_t>(v)); }

torch::Tensor flatten_cells(const torch::Tensor& latent) {
  return latent.permute({0, 2, 3, 1}).reshape({-1, latent.size(1)});
}

void check_codebook(const torch::Tensor& codebook, const torch::Tensor& latent) {
  SSSP_CHECK(codebook.dim() == 2 && codebook.size(0) >= 2, ErrorCode::kShapeMismatch,
             "codebook must be [K >= 2, d]");
  SSSP_CHECK(latent.dim() == 4, ErrorCode::kShapeMismatch, "latent grid must be [B, d, g, g]");
  SSSP_CHECK(latent.size(1) == codebook.size(1), ErrorCode::kShapeMismatch,
             "latent channels do not match codebook dimension");
}

}  // namespace

void VqOptions::validate() const {
  SSSP_CHECK(codebook_size >= 2, ErrorCode::kInvalidArgument, "codebook needs at least two entries");
  SSSP_CHECK(codebook_dim >= 1 && hidden >= 1, ErrorCode::kInvalidArgument, "invalid VQ widths");
  SSSP_CHECK(downsample >= 2 && std::has_single_bit(static_cast<uint64_t>(downsample)),
             ErrorCode::kInvalidArgument, "VQ downsample factor must be a power of two");
  SSSP_CHECK(image_resolution % downsample == 0, ErrorCode::kInvalidArgument,
             "image resolution must be divisible by the downsample factor");
  SSSP_CHECK(commitment_beta >= 0.0, ErrorCode::kInvalidArgument, "commitment beta must be >= 0");
}

torch::Tensor cell_distances(const torch::Tensor& codebook, const torch::Tensor& latent) {
  check_codebook(codebook, latent);
  const torch::Tensor cells = flatten_cells(latent);
  const torch::Tensor entries = codebook.to(cells.dtype());
  std::vector<torch::Tensor> chunks;
  for (int64_t start = 0; start < cells.size(0); start += kDistanceChunk) {
    const int64_t len = std::min(kDistanceChunk, cells.size(0) - start);
    const torch::Tensor diff = cells.narrow(0, start, len).unsqueeze(1) - entries.unsqueeze(0);
    chunks.push_back(diff.pow(2).sum(-1));
  }
  return torch::cat(chunks, 0);
}

Quantized quantize(const torch::Tensor& codebook, const torch::Tensor& latent) {
  torch::Tensor distances;
  {
    torch::NoGradGuard no_grad;
    distances = cell_distances(codebook, latent.detach());
  }
  // argmin reports the first minimal index, which is the tie rule we want.
  const torch::Tensor flat_tokens = distances.argmin(1);
  const int64_t b = latent.size(0), g0 = latent.size(2), g1 = latent.size(3);
  torch::Tensor tokens = flat_tokens.view({b, g0, g1});
  torch::Tensor features = dequantize(codebook, tokens).to(latent.dtype());
  torch::Tensor st = features.detach() + (latent - latent.detach());
  return {tokens, features, st};
}

torch::Tensor dequantize(const torch::Tensor& codebook, const torch::Tensor& tokens) {
  SSSP_CHECK(codebook.dim() == 2, ErrorCode::kShapeMismatch, "codebook must be [K, d]");
  SSSP_CHECK(tokens.dim() == 3, ErrorCode::kShapeMismatch, "tokens must be [B, g, g]");
  const torch::Tensor idx = tokens.to(torch::kLong);
  if (idx.numel() > 0) {
    SSSP_CHECK(idx.min().item<int64_t>() >= 0 && idx.max().item<int64_t>() < codebook.size(0),
               ErrorCode::kOutOfRange, "token index outside the codebook");
  }
  const torch::Tensor rows = codebook.index_select(0, idx.flatten());
  return rows.view({tokens.size(0), tokens.size(1), tokens.size(2), codebook.size(1)}).permute({0, 3, 1, 2});
}

PatchEncoderImpl::PatchEncoderImpl(const VqOptions& options) : options_(options) {
  options_.validate();
  stem_ = register_module("stem", torch::nn::Conv2d(torch::nn::Conv2dOptions(1, options_.hidden, 3).padding(1)));
  for (int64_t i = 0; i < log2_exact(options_.downsample); ++i) {
    downs_.push_back(register_module(
        "down" + std::to_string(i),
        torch::nn::Conv2d(torch::nn::Conv2dOptions(options_.hidden, options_.hidden, 4).stride(2).padding(1))));
  }
  project_ = register_module("project",
                             torch::nn::Conv2d(torch::nn::Conv2dOptions(options_.hidden, options_.codebook_dim, 1)));
}

torch::Tensor PatchEncoderImpl::forward(const torch::Tensor& images) {
  torch::Tensor x = lrelu(stem_(images * 2.0 - 1.0));
  for (auto& down : downs_) {
    x = lrelu(down(x));
  }
  return project_(x);
}

SketchDecoderImpl::SketchDecoderImpl(const VqOptions& options) : options_(options) {
  options_.validate();
  lift_ = register_module("lift",
                          torch::nn::Conv2d(torch::nn::Conv2dOptions(options_.codebook_dim, options_.hidden, 1)));
  for (int64_t i = 0; i < log2_exact(options_.downsample); ++i) {
    ups_.push_back(register_module(
        "up" + std::to_string(i),
        torch::nn::Conv2d(torch::nn::Conv2dOptions(options_.hidden, options_.hidden, 3).padding(1))));
  }
  out_ = register_module("out", torch::nn::Conv2d(torch::nn::Conv2dOptions(options_.hidden, 1, 3).padding(1)));
}

torch::Tensor SketchDecoderImpl::forward(const torch::Tensor& features) {
  SSSP_CHECK(features.dim() == 4 && features.size(1) == options_.codebook_dim &&
                 features.size(2) == options_.grid() && features.size(3) == options_.grid(),
             ErrorCode::kShapeMismatch, "decoder input must be [B, d, g, g]");
  torch::Tensor x = lrelu(lift_(features));
  for (auto& up : ups_) {
    x = F::interpolate(x, F::InterpolateFuncOptions()
                              .scale_factor(std::vector<double>{2.0, 2.0})
                              .mode(torch::kNearest));
    x = lrelu(up(x));
  }
  // Clamp forward, identity backward: a saturating squash stalls the L1 loss
  // on mostly blank sketches.
  const torch::Tensor raw = out_(x);
  return raw + (raw.clamp(0.0, 1.0) - raw).detach();
}

VqSketchModelImpl::VqSketchModelImpl(const VqOptions& options) : options_(options) {
  options_.validate();
  tokenizer = register_module("tokenizer", PatchEncoder(options_));
  decoder = register_module("decoder", SketchDecoder(options_));
  contour_encoder = register_module("contour_encoder", PatchEncoder(options_));
  codebook = register_parameter(
      "codebook", torch::rand({options_.codebook_size, options_.codebook_dim}) * 2.0 - 1.0);
}

torch::Tensor VqSketchModelImpl::check_images(const torch::Tensor& images) const {
  SSSP_CHECK(images.dim() == 4 && images.size(1) == 1 && images.size(2) == options_.image_resolution &&
                 images.size(3) == options_.image_resolution,
             ErrorCode::kShapeMismatch,
             "expected [B, 1, " + std::to_string(options_.image_resolution) + ", " +
                 std::to_string(options_.image_resolution) + "] images");
  return images;
}

torch::Tensor VqSketchModelImpl::decode_sketch(const torch::Tensor& features) {
  return decoder->forward(features);
}

torch::Tensor VqSketchModelImpl::reconstruct(const torch::Tensor& sketches) {
  const Quantized q = quantize(codebook, tokenize(sketches));
  return decode_sketch(dequantize(codebook, q.tokens));
}

torch::Tensor VqSketchModelImpl::contour_to_sketch(const torch::Tensor& contours) {
  const Quantized q = quantize(codebook, encode_contour(contours));
  return decode_sketch(dequantize(codebook, q.tokens));
}

void VqSketchModelImpl::clone_tokenizer_into_contour_encoder() {
  torch::NoGradGuard no_grad;
  const auto src = tokenizer->named_parameters();
  for (auto& p : contour_encoder->named_parameters()) p.value().copy_(src[p.key()]);
}

VqLossTerms vq_training_losses(const torch::Tensor& sketches, const torch::Tensor& reconstructions,
                               const torch::Tensor& latent, const torch::Tensor& selected_entries,
                               double beta) {
  SSSP_CHECK(sketches.sizes() == reconstructions.sizes(), ErrorCode::kShapeMismatch,
             "sketch and reconstruction shapes differ");
  SSSP_CHECK(latent.sizes() == selected_entries.sizes(), ErrorCode::kShapeMismatch,
             "latent and selected entries differ in shape");
  VqLossTerms t;
  t.reconstruction = (sketches - reconstructions).abs().mean();
  t.codebook = (latent.detach() - selected_entries).pow(2).mean();
  t.commitment = beta * (latent - selected_entries.detach()).pow(2).mean();
  t.total = t.reconstruction + t.codebook + t.commitment;
  return t;
}

ContourLossTerms contour_training_losses(const torch::Tensor& codebook, const torch::Tensor& contour_latent,
                                         const torch::Tensor& teacher_tokens,
                                         const torch::Tensor& teacher_features, FeatureDistance distance,
                                         double distance_weight) {
  check_codebook(codebook, contour_latent);
  SSSP_CHECK(contour_latent.sizes() == teacher_features.sizes(), ErrorCode::kShapeMismatch,
             "contour latent and teacher features differ in shape");
  SSSP_CHECK(teacher_tokens.numel() * contour_latent.size(1) == contour_latent.numel(),
             ErrorCode::kShapeMismatch, "teacher tokens do not match the latent grid");
  const torch::Tensor logits = -cell_distances(codebook, contour_latent);
  ContourLossTerms t;
  t.cross_entropy = F::cross_entropy(logits, teacher_tokens.reshape({-1}).to(torch::kLong));
  const torch::Tensor diff = contour_latent - teacher_features.detach();
  t.distance = distance == FeatureDistance::kL2 ? diff.pow(2).mean() : diff.abs().mean();
  t.total = t.cross_entropy + distance_weight * t.distance;
  return t;
}

}  // namespace sssp
