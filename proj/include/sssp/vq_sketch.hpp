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

namespace sssp {

struct VqOptions {
  int64_t image_resolution = 64;
  int64_t codebook_size = 512;
  int64_t codebook_dim = 64;
  int64_t downsample = 8;
  int64_t hidden = 64;
  double commitment_beta = 0.25;

  void validate() const;
  int64_t grid() const { return image_resolution / downsample; }
};

/// Result of nearest-entry assignment over a [B, d, g, g] latent grid.
struct Quantized {
  torch::Tensor tokens;    // [B, g, g], int64
  torch::Tensor features;  // [B, d, g, g], the selected entries
  /// Straight-through value: equals `features` forward, passes gradients
  /// to the continuous latent unchanged.
  torch::Tensor straight_through;
};

/// Nearest codebook entry per cell under squared Euclidean distance; ties go
/// to the lowest index. `codebook` is [K, d].
Quantized quantize(const torch::Tensor& codebook, const torch::Tensor& latent);

/// Table lookup of tokens [B, g, g] -> [B, d, g, g]. Throws kOutOfRange for
/// indices outside [0, K).
torch::Tensor dequantize(const torch::Tensor& codebook, const torch::Tensor& tokens);

/// Squared distances from every cell to every entry: [B*g*g, K], cells in
/// (b, row, col) order.
torch::Tensor cell_distances(const torch::Tensor& codebook, const torch::Tensor& latent);

/// Strided-conv downsampler shared by the sketch tokenizer and the contour
/// encoder: [B, 1, H, H] -> [B, d, H/f, H/f].
class PatchEncoderImpl : public torch::nn::Module {
 public:
  explicit PatchEncoderImpl(const VqOptions& options);
  torch::Tensor forward(const torch::Tensor& images);

 private:
  VqOptions options_;
  torch::nn::Conv2d stem_{nullptr};
  std::vector<torch::nn::Conv2d> downs_;
  torch::nn::Conv2d project_{nullptr};
};
TORCH_MODULE(PatchEncoder);

/// [B, d, g, g] -> [B, 1, H, H] in (0, 1).
class SketchDecoderImpl : public torch::nn::Module {
 public:
  explicit SketchDecoderImpl(const VqOptions& options);
  torch::Tensor forward(const torch::Tensor& features);

 private:
  VqOptions options_;
  torch::nn::Conv2d lift_{nullptr};
  std::vector<torch::nn::Conv2d> ups_;
  torch::nn::Conv2d out_{nullptr};
};
TORCH_MODULE(SketchDecoder);

/// Tokenizer, codebook, decoder and contour encoder of the contour-to-sketch
/// codec.
class VqSketchModelImpl : public torch::nn::Module {
 public:
  explicit VqSketchModelImpl(const VqOptions& options);

  const VqOptions& options() const { return options_; }

  torch::Tensor tokenize(const torch::Tensor& sketches) { return tokenizer->forward(check_images(sketches)); }
  torch::Tensor encode_contour(const torch::Tensor& contours) {
    return contour_encoder->forward(check_images(contours));
  }
  torch::Tensor decode_sketch(const torch::Tensor& features);

  /// decode(dequantize(quantize(tokenize(S)))).
  torch::Tensor reconstruct(const torch::Tensor& sketches);
  /// decode(dequantize(quantize(encode_contour(C)))).
  torch::Tensor contour_to_sketch(const torch::Tensor& contours);

  /// Copies the tokenizer weights into the contour encoder.
  void clone_tokenizer_into_contour_encoder();

  PatchEncoder tokenizer{nullptr};
  SketchDecoder decoder{nullptr};
  PatchEncoder contour_encoder{nullptr};
  torch::Tensor codebook;

 private:
  torch::Tensor check_images(const torch::Tensor& images) const;

  VqOptions options_;
};
TORCH_MODULE(VqSketchModel);

struct VqLossTerms {
  torch::Tensor reconstruction;
  torch::Tensor codebook;
  torch::Tensor commitment;
  torch::Tensor total;
};

/// mean|S - S'| + mean(sg(z) - e)^2 + beta * mean(z - sg(e))^2, where e are the
/// selected entries (quantized features).
VqLossTerms vq_training_losses(const torch::Tensor& sketches, const torch::Tensor& reconstructions,
                               const torch::Tensor& latent, const torch::Tensor& selected_entries,
                               double beta);

enum class FeatureDistance { kL2, kL1 };

struct ContourLossTerms {
  torch::Tensor cross_entropy;
  torch::Tensor distance;
  torch::Tensor total;
};

/// Per-cell softmax cross-entropy of logits -||z_c - e_k||^2 against the
/// teacher tokens, plus the mean feature distance between the contour latent
/// and the dequantized teacher features.
ContourLossTerms contour_training_losses(const torch::Tensor& codebook, const torch::Tensor& contour_latent,
                                         const torch::Tensor& teacher_tokens,
                                         const torch::Tensor& teacher_features,
                                         FeatureDistance distance = FeatureDistance::kL2,
                                         double distance_weight = 1.0);

}  // namespace sssp
