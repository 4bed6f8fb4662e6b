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

#include "sssp/image.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "sssp/error.hpp"

namespace sssp {

namespace F = torch::nn::functional;

std::string encode_png(const torch::Tensor& image) {
  torch::Tensor chw = image.detach().to(torch::kFloat32).cpu();
  if (chw.dim() == 2) {
    chw = chw.unsqueeze(0);
  }
  SSSP_CHECK(chw.dim() == 3 && (chw.size(0) == 1 || chw.size(0) == 3), ErrorCode::kShapeMismatch,
             "encode_png expects [H, W], [1, H, W] or [3, H, W]");
  const torch::Tensor hwc =
      (chw.clamp(0.0, 1.0) * 255.0).round().to(torch::kUInt8).permute({1, 2, 0}).contiguous();
  const int rows = static_cast<int>(hwc.size(0));
  const int cols = static_cast<int>(hwc.size(1));
  const int type = chw.size(0) == 1 ? CV_8UC1 : CV_8UC3;
  cv::Mat mat(rows, cols, type, hwc.data_ptr<uint8_t>());
  cv::Mat out = mat;
  if (chw.size(0) == 3) {
    cv::cvtColor(mat, out, cv::COLOR_RGB2BGR);
  }
  std::vector<uint8_t> buf;
  SSSP_CHECK(cv::imencode(".png", out, buf), ErrorCode::kIo, "PNG encoding failed");
  return {buf.begin(), buf.end()};
}

torch::Tensor decode_png(std::string_view bytes) {
  SSSP_CHECK(!bytes.empty(), ErrorCode::kInvalidArgument, "empty image payload");
  const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<char*>(bytes.data()));
  cv::Mat mat;
  try {
    mat = cv::imdecode(raw, cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception&) {
    mat = cv::Mat();
  }
  SSSP_CHECK(!mat.empty(), ErrorCode::kInvalidArgument, "payload is not a decodable image");
  if (mat.depth() != CV_8U) {
    cv::Mat tmp;
    mat.convertTo(tmp, CV_8U, mat.depth() == CV_16U ? 1.0 / 257.0 : 1.0);
    mat = tmp;
  }
  cv::Mat rgb;
  switch (mat.channels()) {
    case 1: rgb = mat; break;
    case 3: cv::cvtColor(mat, rgb, cv::COLOR_BGR2RGB); break;
    case 4: cv::cvtColor(mat, rgb, cv::COLOR_BGRA2RGB); break;
    default: throw Error(ErrorCode::kInvalidArgument, "unsupported channel count");
  }
  rgb = rgb.clone();
  const int64_t c = rgb.channels();
  torch::Tensor t = torch::from_blob(rgb.data, {rgb.rows, rgb.cols, c}, torch::kUInt8).clone();
  return t.permute({2, 0, 1}).to(torch::kFloat32).div(255.0).contiguous();
}

torch::Tensor decode_png_gray(std::string_view bytes) {
  const torch::Tensor img = decode_png(bytes);
  if (img.size(0) == 1) {
    return img[0];
  }
  return (0.299 * img[0] + 0.587 * img[1] + 0.114 * img[2]).contiguous();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  SSSP_CHECK(in.good(), ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  SSSP_CHECK(out.good(), ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  SSSP_CHECK(out.good(), ErrorCode::kIo, "short write to " + path.string());
}

void write_png(const std::filesystem::path& path, const torch::Tensor& image) {
  write_file(path, encode_png(image));
}

torch::Tensor read_png(const std::filesystem::path& path) { return decode_png(read_file(path)); }

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<size_t>(n));
  return out;
}

std::string base64_decode(std::string_view text) {
  SSSP_CHECK(text.size() % 4 == 0, ErrorCode::kInvalidArgument, "base64 length must be a multiple of 4");
  if (text.empty()) {
    return {};
  }
  std::string out(3 * text.size() / 4, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  SSSP_CHECK(n >= 0, ErrorCode::kInvalidArgument, "malformed base64");
  // EVP_DecodeBlock keeps the zero bytes produced by '=' padding.
  size_t padding = 0;
  if (text.back() == '=') ++padding;
  if (text.size() >= 2 && text[text.size() - 2] == '=') ++padding;
  out.resize(static_cast<size_t>(n) - padding);
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
  std::ostringstream ss;
  for (unsigned char b : digest) {
    ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(b);
  }
  return ss.str();
}

torch::Tensor area_downsample(const torch::Tensor& image, int64_t factor) {
  SSSP_CHECK(factor >= 1, ErrorCode::kInvalidArgument, "downsample factor must be >= 1");
  if (factor == 1) {
    return image;
  }
  SSSP_CHECK(image.size(-1) % factor == 0 && image.size(-2) % factor == 0, ErrorCode::kShapeMismatch,
             "image size must be divisible by the downsample factor");
  const bool batched = image.dim() == 4;
  const torch::Tensor x = batched ? image : image.unsqueeze(0);
  const torch::Tensor y = F::avg_pool2d(x, F::AvgPool2dFuncOptions(factor).stride(factor));
  return batched ? y : y.squeeze(0);
}

torch::Tensor crop_resize(const torch::Tensor& image, const RegionSpec& region, int64_t out) {
  SSSP_CHECK(image.dim() == 3, ErrorCode::kShapeMismatch, "crop_resize expects [C, H, W]");
  SSSP_CHECK(region.inside_image(), ErrorCode::kOutOfRange, "region box leaves the image");
  const auto opts = torch::TensorOptions().dtype(image.dtype());
  const torch::Tensor steps = (torch::arange(out, opts) + 0.5) / static_cast<double>(out) * region.scale;
  const torch::Tensor u = (region.cx - region.scale / 2.0) + steps;
  const torch::Tensor v = (region.cy - region.scale / 2.0) + steps;
  const auto mesh = torch::meshgrid({v, u}, "ij");
  const torch::Tensor grid = torch::stack({mesh[1] * 2.0 - 1.0, mesh[0] * 2.0 - 1.0}, -1).unsqueeze(0);
  const torch::Tensor sampled = F::grid_sample(image.unsqueeze(0), grid,
                                               F::GridSampleFuncOptions()
                                                   .mode(torch::kBilinear)
                                                   .padding_mode(torch::kBorder)
                                                   .align_corners(false));
  return sampled.squeeze(0);
}

}  // namespace sssp
