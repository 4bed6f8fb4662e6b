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

#include "sssp/metrics.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include <array>
#include <cmath>

#include "sssp/error.hpp"

namespace sssp {

namespace F = torch::nn::functional;

namespace {

constexpr int kCpbdBlock = 64;
constexpr int kCannyBins = 64;
constexpr double kCannyNonEdge = 0.7;
constexpr double kEdgeBlockFraction = 0.002;
constexpr double kBeta = 3.6;
constexpr int kJnbBins = 64;  // histogram bins 0..63 cover P_blur <= 0.63

torch::Tensor as_chw(const torch::Tensor& t) {
  SSSP_CHECK(t.dim() == 2 || t.dim() == 3, ErrorCode::kShapeMismatch, "expected [H, W] or [C, H, W] image");
  return (t.dim() == 2 ? t.unsqueeze(0) : t).to(torch::kFloat64).detach();
}

torch::Tensor gaussian_window(int64_t size, double sigma) {
  const torch::Tensor x = torch::arange(size, torch::kFloat64) - static_cast<double>(size - 1) / 2.0;
  torch::Tensor g = torch::exp(-x.pow(2) / (2.0 * sigma * sigma));
  g = g / g.sum();
  return torch::outer(g, g);
}

}  // namespace

double psnr(const torch::Tensor& a, const torch::Tensor& b) {
  SSSP_CHECK(a.sizes() == b.sizes(), ErrorCode::kShapeMismatch, "psnr inputs differ in shape");
  const double mse = (a.to(torch::kFloat64) - b.to(torch::kFloat64)).pow(2).mean().item<double>();
  if (mse < 1e-10) {
    return kPsnrCap;
  }
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const torch::Tensor& a, const torch::Tensor& b) {
  SSSP_CHECK(a.sizes() == b.sizes(), ErrorCode::kShapeMismatch, "ssim inputs differ in shape");
  const torch::Tensor x = as_chw(a).unsqueeze(1);  // [C, 1, H, W]
  const torch::Tensor y = as_chw(b).unsqueeze(1);
  int64_t win = std::min<int64_t>({11, x.size(2), x.size(3)});
  if (win % 2 == 0) {
    --win;
  }
  const torch::Tensor w = gaussian_window(win, 1.5).view({1, 1, win, win});
  auto filt = [&](const torch::Tensor& t) { return F::conv2d(t, w); };

  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  const torch::Tensor mx = filt(x);
  const torch::Tensor my = filt(y);
  const torch::Tensor sxx = filt(x * x) - mx * mx;
  const torch::Tensor syy = filt(y * y) - my * my;
  const torch::Tensor sxy = filt(x * y) - mx * my;
  const torch::Tensor map =
      ((2 * mx * my + c1) * (2 * sxy + c2)) / ((mx * mx + my * my + c1) * (sxx + syy + c2));
  return map.mean().item<double>();
}

torch::Tensor to_gray(const torch::Tensor& image) {
  if (image.dim() == 2) {
    return image;
  }
  SSSP_CHECK(image.dim() == 3, ErrorCode::kShapeMismatch, "expected [C, H, W] image");
  if (image.size(0) == 1) {
    return image[0];
  }
  SSSP_CHECK(image.size(0) == 3, ErrorCode::kShapeMismatch, "expected 1 or 3 channels");
  return 0.299 * image[0] + 0.587 * image[1] + 0.114 * image[2];
}

double cpbd(const torch::Tensor& gray) {
  SSSP_CHECK(gray.dim() == 2, ErrorCode::kShapeMismatch, "cpbd expects a [H, W] grayscale image");
  const torch::Tensor img = gray.to(torch::kFloat64).clamp(0.0, 1.0).contiguous();
  const int rows = static_cast<int>(img.size(0));
  const int cols = static_cast<int>(img.size(1));
  if (rows < 3 || cols < 3) {
    return 0.0;
  }
  const cv::Mat image(rows, cols, CV_64F, const_cast<double*>(img.data_ptr<double>()));

  // Canny on a sigma=1 smoothed copy with automatic thresholds: the high
  // threshold sits at the 70th percentile of the max-normalized gradient
  // magnitude histogram (64 bins), the low one at 0.4 of it.
  cv::Mat smoothed;
  cv::GaussianBlur(image, smoothed, cv::Size(0, 0), 1.0, 1.0, cv::BORDER_REFLECT);
  cv::Mat smoothed8;
  smoothed.convertTo(smoothed8, CV_8U, 255.0);
  cv::Mat dx, dy;
  cv::Sobel(smoothed8, dx, CV_16S, 1, 0, 3, 1, 0, cv::BORDER_REPLICATE);
  cv::Sobel(smoothed8, dy, CV_16S, 0, 1, 3, 1, 0, cv::BORDER_REPLICATE);
  cv::Mat dxf, dyf, magnitude;
  dx.convertTo(dxf, CV_64F);
  dy.convertTo(dyf, CV_64F);
  cv::magnitude(dxf, dyf, magnitude);
  double max_mag = 0.0;
  cv::minMaxLoc(magnitude, nullptr, &max_mag);
  if (max_mag <= 0.0) {
    return 0.0;
  }
  std::array<int64_t, kCannyBins> mag_hist{};
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int bin = std::min(kCannyBins - 1, static_cast<int>(magnitude.at<double>(r, c) / max_mag * kCannyBins));
      ++mag_hist[static_cast<size_t>(bin)];
    }
  }
  int high_bin = 0;
  for (int64_t cumulative = 0; high_bin < kCannyBins; ++high_bin) {
    cumulative += mag_hist[static_cast<size_t>(high_bin)];
    if (cumulative > kCannyNonEdge * rows * cols) break;
  }
  const double high = static_cast<double>(high_bin + 1) / kCannyBins * max_mag;
  cv::Mat edges;
  cv::Canny(dx, dy, edges, 0.4 * high, high, true);

  // Edge widths along rows for horizontally oriented gradients.
  cv::Mat widths = cv::Mat::zeros(rows, cols, CV_64F);
  auto at = [&](int r, int c) { return image.at<double>(r, c); };
  for (int r = 1; r < rows - 1; ++r) {
    for (int c = 1; c < cols - 1; ++c) {
      if (edges.at<uint8_t>(r, c) == 0) continue;
      const double gx = (at(r, c + 1) - at(r, c - 1)) / 2.0;
      const double gy = (at(r + 1, c) - at(r - 1, c)) / 2.0;
      if (gx == 0.0 || std::abs(gx) < std::abs(gy)) continue;
      int left = c;
      int right = c;
      if (gx > 0) {
        while (left > 0 && at(r, left - 1) < at(r, left)) --left;
        while (right < cols - 1 && at(r, right + 1) > at(r, right)) ++right;
      } else {
        while (left > 0 && at(r, left - 1) > at(r, left)) --left;
        while (right < cols - 1 && at(r, right + 1) < at(r, right)) ++right;
      }
      widths.at<double>(r, c) = right - left;
    }
  }

  const int block_h = std::min(kCpbdBlock, rows);
  const int block_w = std::min(kCpbdBlock, cols);
  std::array<int64_t, 101> histogram{};
  int64_t total = 0;
  for (int br = 0; br + block_h <= rows; br += block_h) {
    for (int bc = 0; bc + block_w <= cols; bc += block_w) {
      const cv::Rect roi(bc, br, block_w, block_h);
      const int edge_count = cv::countNonZero(edges(roi));
      if (edge_count <= kEdgeBlockFraction * block_h * block_w) continue;
      double lo = 0.0, hi = 0.0;
      cv::minMaxLoc(image(roi), &lo, &hi);
      const double jnb = (hi - lo) * 255.0 <= 50.0 ? 5.0 : 3.0;
      for (int r = br; r < br + block_h; ++r) {
        for (int c = bc; c < bc + block_w; ++c) {
          const double w = widths.at<double>(r, c);
          if (w <= 0.0) continue;
          const double p = 1.0 - std::exp(-std::pow(w / jnb, kBeta));
          ++histogram[static_cast<size_t>(std::lround(p * 100.0))];
          ++total;
        }
      }
    }
  }
  if (total == 0) {
    return 0.0;
  }
  int64_t sharp = 0;
  for (int i = 0; i < kJnbBins; ++i) sharp += histogram[static_cast<size_t>(i)];
  return static_cast<double>(sharp) / static_cast<double>(total);
}

}  // namespace sssp
