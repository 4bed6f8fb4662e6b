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

#include <filesystem>
#include <string>
#include <string_view>

#include "sssp/camera.hpp"

namespace sssp {

/// PNG bytes of a [H, W], [1, H, W] or [3, H, W] float image in [0, 1]
/// (values are clamped and rounded to 8 bits).
std::string encode_png(const torch::Tensor& image);

/// Decodes PNG bytes to float [C, H, W] in [0, 1] with C = 1 or 3.
/// Throws kInvalidArgument for undecodable input.
torch::Tensor decode_png(std::string_view bytes);

/// Decodes PNG bytes and converts to a single [H, W] channel.
torch::Tensor decode_png_gray(std::string_view bytes);

void write_png(const std::filesystem::path& path, const torch::Tensor& image);
torch::Tensor read_png(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

std::string base64_encode(std::string_view bytes);
/// Throws kInvalidArgument for malformed input.
std::string base64_decode(std::string_view text);

std::string sha256_hex(std::string_view bytes);

/// Box-filter downsampling of [..., H, W] by an integer factor.
torch::Tensor area_downsample(const torch::Tensor& image, int64_t factor);

/// Bilinear crop of the region box out of a [C, H, W] image, resampled to
/// out x out pixel centers.
torch::Tensor crop_resize(const torch::Tensor& image, const RegionSpec& region, int64_t out);

}  // namespace sssp
