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

// Central finite-difference gradient probes for double-precision scalar
// functions.

#pragma once

#include <torch/torch.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace sssp::testing {

struct GradCheckResult {
  int probes = 0;
  double max_relative_error = 0.0;
  double max_abs_gradient = 0.0;
};

/// Compares autograd against central differences at `probes` random entries
/// of `input`. The error is |a - n| / max(|a|, |n|, floor); `floor` only
/// matters for entries whose true gradient is near zero. With nonzero_only,
/// probes are drawn from entries with a nonzero analytic gradient.
inline GradCheckResult check_gradient(const std::function<torch::Tensor(const torch::Tensor&)>& fn,
                                      const torch::Tensor& input, int probes, uint64_t seed,
                                      bool nonzero_only = false, double step = 1e-6, double floor = 1e-6) {
  TORCH_CHECK(input.scalar_type() == torch::kFloat64, "gradient checks run in double precision");
  torch::Tensor x = input.detach().clone().requires_grad_(true);
  torch::Tensor y = fn(x);
  const torch::Tensor analytic = torch::autograd::grad({y}, {x}, {}, false, false, true)[0];
  const torch::Tensor flat_grad = analytic.defined() ? analytic.flatten() : torch::zeros({x.numel()}, x.options());

  std::vector<int64_t> candidates;
  for (int64_t i = 0; i < x.numel(); ++i) {
    if (!nonzero_only || flat_grad[i].item<double>() != 0.0) candidates.push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  candidates.resize(std::min<size_t>(candidates.size(), static_cast<size_t>(probes)));

  GradCheckResult result;
  torch::NoGradGuard no_grad;
  torch::Tensor base = input.detach().clone().contiguous();
  for (const int64_t i : candidates) {
    torch::Tensor plus = base.clone();
    torch::Tensor minus = base.clone();
    plus.view(-1)[i] += step;
    minus.view(-1)[i] -= step;
    const double numeric = (fn(plus).item<double>() - fn(minus).item<double>()) / (2.0 * step);
    const double a = flat_grad[i].item<double>();
    const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
    result.max_relative_error = std::max(result.max_relative_error, err);
    result.max_abs_gradient = std::max(result.max_abs_gradient, std::abs(a));
    ++result.probes;
  }
  return result;
}

/// Same comparison for a module parameter perturbed in place; `loss` reads
/// the parameter through the module.
inline GradCheckResult check_parameter_gradient(const std::function<torch::Tensor()>& loss, torch::Tensor param,
                                                int probes, uint64_t seed, double step = 1e-6,
                                                double floor = 1e-6) {
  TORCH_CHECK(param.scalar_type() == torch::kFloat64, "gradient checks run in double precision");
  if (param.grad().defined()) param.mutable_grad().zero_();
  const torch::Tensor analytic = torch::autograd::grad({loss()}, {param})[0].flatten();
  std::vector<int64_t> candidates(static_cast<size_t>(param.numel()));
  std::iota(candidates.begin(), candidates.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  candidates.resize(std::min<size_t>(candidates.size(), static_cast<size_t>(probes)));

  GradCheckResult result;
  torch::NoGradGuard no_grad;
  torch::Tensor flat = param.view(-1);
  for (const int64_t i : candidates) {
    const double original = flat[i].item<double>();
    flat[i].fill_(original + step);
    const double plus = loss().item<double>();
    flat[i].fill_(original - step);
    const double minus = loss().item<double>();
    flat[i].fill_(original);
    const double numeric = (plus - minus) / (2.0 * step);
    const double a = analytic[i].item<double>();
    const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
    result.max_relative_error = std::max(result.max_relative_error, err);
    result.max_abs_gradient = std::max(result.max_abs_gradient, std::abs(a));
    ++result.probes;
  }
  return result;
}

}  // namespace sssp::testing
