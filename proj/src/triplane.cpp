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

#include "sssp/triplane.hpp"

#include <cmath>

#include "sssp/error.hpp"

namespace sssp {

PlaneProjection project_point(const Point3& p) {
  return {{p.x, p.y}, {p.x, p.z}, {p.y, p.z}};
}

Point3 mirror_point(const Point3& p) { return {-p.x, p.y, p.z}; }

TriPlane::TriPlane(torch::Tensor planes, double extent) : planes_(std::move(planes)), extent_(extent) {
  SSSP_CHECK(planes_.defined() && planes_.dim() == 4 && planes_.size(0) == 3,
             ErrorCode::kShapeMismatch, "tri-plane tensor must be [3, C, R, R]");
  SSSP_CHECK(planes_.size(2) == planes_.size(3), ErrorCode::kShapeMismatch,
             "tri-plane grids must be square");
  SSSP_CHECK(planes_.size(3) >= 2, ErrorCode::kShapeMismatch, "tri-plane resolution must be >= 2");
  SSSP_CHECK(extent_ > 0.0 && std::isfinite(extent_), ErrorCode::kInvalidArgument,
             "tri-plane extent must be positive");
}

TriPlane TriPlane::zeros(int64_t resolution, int64_t channels, double extent, torch::Dtype dtype) {
  return TriPlane(torch::zeros({3, channels, resolution, resolution}, torch::dtype(dtype)), extent);
}

namespace {

// Samples one [C, R, R] grid at (u -> column, v -> row). Returns [C, N].
torch::Tensor sample_plane(const torch::Tensor& grid, const torch::Tensor& u, const torch::Tensor& v,
                           double extent) {
  const int64_t channels = grid.size(0);
  const int64_t res = grid.size(-1);
  const double scale = static_cast<double>(res) / (2.0 * extent);

  auto to_index = [&](const torch::Tensor& coord) {
    return ((coord + extent) * scale - 0.5).clamp(0.0, static_cast<double>(res - 1));
  };
  const torch::Tensor col = to_index(u);
  const torch::Tensor row = to_index(v);
  const torch::Tensor col0 = col.detach().floor().clamp(0, res - 2);
  const torch::Tensor row0 = row.detach().floor().clamp(0, res - 2);
  const torch::Tensor wc = col - col0;
  const torch::Tensor wr = row - row0;

  const torch::Tensor c0 = col0.to(torch::kLong);
  const torch::Tensor r0 = row0.to(torch::kLong);
  const torch::Tensor flat = grid.reshape({channels, res * res}).to(torch::kFloat64);
  auto gather = [&](const torch::Tensor& r, const torch::Tensor& c) {
    return flat.index_select(1, r * res + c);
  };
  const torch::Tensor v00 = gather(r0, c0);
  const torch::Tensor v01 = gather(r0, c0 + 1);
  const torch::Tensor v10 = gather(r0 + 1, c0);
  const torch::Tensor v11 = gather(r0 + 1, c0 + 1);

  torch::Tensor top = v00 * (1 - wc) + v01 * wc;
  torch::Tensor bottom = v10 * (1 - wc) + v11 * wc;
  torch::Tensor value = top * (1 - wr) + bottom * wr;

  const torch::Tensor inside = (u.abs() <= extent) & (v.abs() <= extent);
  return value * inside.to(value.dtype());
}

}  // namespace

torch::Tensor query_triplane(const TriPlane& planes, const torch::Tensor& points) {
  SSSP_CHECK(points.dim() == 2 && points.size(1) == 3, ErrorCode::kShapeMismatch,
             "query points must be [N, 3]");
  // Lookup and blending run in double and are rounded once, so mirrored
  // queries agree to the grid dtype's rounding.
  const torch::Tensor& grids = planes.planes();
  const torch::Tensor pts = points.to(torch::kFloat64);
  const torch::Tensor x = pts.select(1, 0);
  const torch::Tensor y = pts.select(1, 1);
  const torch::Tensor z = pts.select(1, 2);
  const double e = planes.extent();

  torch::Tensor sum = sample_plane(grids[0], x, y, e);
  sum = sum + sample_plane(grids[1], x, z, e);
  sum = sum + sample_plane(grids[2], y, z, e);
  return sum.transpose(0, 1).to(grids.dtype());
}

torch::Tensor query_triplane(const TriPlane& planes, const Point3& p) {
  SSSP_CHECK(std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z), ErrorCode::kNonFinite,
             "query point must be finite");
  const torch::Tensor pts =
      torch::tensor({p.x, p.y, p.z}, torch::dtype(torch::kFloat64)).reshape({1, 3});
  return query_triplane(planes, pts)[0];
}

torch::Tensor flip_planes(const torch::Tensor& planes) {
  SSSP_CHECK(planes.dim() >= 4 && planes.size(-4) == 3, ErrorCode::kShapeMismatch,
             "expected [..., 3, C, R, R] planes");
  using torch::indexing::Ellipsis;
  using torch::indexing::Slice;
  const torch::Tensor x_planes = planes.index({Ellipsis, Slice(0, 2), Slice(), Slice(), Slice()});
  const torch::Tensor yz = planes.index({Ellipsis, Slice(2, 3), Slice(), Slice(), Slice()});
  return torch::cat({x_planes.flip({-1}), yz}, -4);
}

TriPlane flip_triplane(const TriPlane& planes) {
  return TriPlane(flip_planes(planes.planes()), planes.extent());
}

PointDecoderImpl::PointDecoderImpl(const PointDecoderOptions& options) : options_(options) {
  fc1_ = register_module("fc1", torch::nn::Linear(options.input_channels, options.hidden));
  fc2_ = register_module("fc2", torch::nn::Linear(options.hidden, options.hidden));
  out_ = register_module("out", torch::nn::Linear(options.hidden, options.feature_channels + 1));
}

DecodedPoints PointDecoderImpl::forward(const torch::Tensor& features) {
  SSSP_CHECK(features.dim() == 2 && features.size(1) == options_.input_channels,
             ErrorCode::kShapeMismatch, "decoder input must be [N, input_channels]");
  SSSP_CHECK(torch::isfinite(features).all().item<bool>(), ErrorCode::kNonFinite,
             "decoder input contains non-finite values");
  torch::Tensor h = torch::softplus(fc1_(features));
  h = torch::softplus(fc2_(h));
  const torch::Tensor raw = out_(h);
  return {torch::sigmoid(raw.narrow(1, 1, options_.feature_channels)),
          torch::softplus(raw.select(1, 0))};
}

void PointDecoderImpl::zero_output_layer() {
  torch::NoGradGuard no_grad;
  out_->weight.zero_();
  out_->bias.zero_();
}

}  // namespace sssp
