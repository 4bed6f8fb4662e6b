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

namespace sssp {

inline constexpr double kPsnrCap = 99.0;

/// 10 log10(1 / MSE) for images in [0, 1]; kPsnrCap when MSE < 1e-10.
double psnr(const torch::Tensor& a, const torch::Tensor& b);

/// Mean SSIM with an 11x11 Gaussian window (sigma 1.5, K1 = 0.01, K2 = 0.03,
/// valid region). Accepts [H, W] or [C, H, W]; channels are averaged.
double ssim(const torch::Tensor& a, const torch::Tensor& b);

/// Cumulative probability of blur detection of a grayscale [H, W] image in
/// [0, 1]. Images without detectable edges score 0.
double cpbd(const torch::Tensor& gray);

/// Luma of a [3, H, W] image (or identity for [H, W] / [1, H, W]).
torch::Tensor to_gray(const torch::Tensor& image);

}  // namespace sssp
