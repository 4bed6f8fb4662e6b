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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace sssp {

using Vec3 = std::array<double, 3>;

/// Orbit camera looking at the origin with +z up. yaw = 0 sits on the +y axis
/// (the direction the portrait faces); positive yaw moves toward +x.
///
/// The window fields select the sub-rectangle of the normalized image plane
/// [0,1]^2 (column, row; row 0 at the top) that the pixel grid covers. A full
/// frame is (0, 0, 1); region cameras shrink it.
struct Camera {
  double yaw = 0.0;
  double pitch = 0.0;
  double radius = 2.7;
  double fov_y = 0.7;
  double window_x0 = 0.0;
  double window_y0 = 0.0;
  double window_size = 1.0;

  /// Throws kInvalidArgument when radius <= 0, |pitch| >= pi/2 or fov is out of (0, pi).
  void validate() const;

  Vec3 position() const;
  Vec3 forward() const;
  Vec3 right() const;
  Vec3 up() const;

  /// Unit ray direction through the center of pixel (row, col) of an h x h grid.
  Vec3 ray_direction(int64_t row, int64_t col, int64_t h) const;

  /// Normalized image coordinates (column, row in [0,1]) of a world point, for
  /// the full frame.
  std::array<double, 2> project(const Vec3& world) const;
};

/// Reflects the camera about the yz-plane (yaw -> -yaw, window mirrored).
Camera mirror_camera(const Camera& camera);

enum class RegionName { kLeftEye, kRightEye, kNose, kMouth };

std::string region_name(RegionName name);
RegionName region_from_string(const std::string& name);

/// Square box of side `scale` (fraction of the image) centered at (cx, cy) in
/// normalized image coordinates. The left eye is the one drawn on the image's
/// left half in a frontal view.
struct RegionSpec {
  RegionName name = RegionName::kLeftEye;
  double cx = 0.5;
  double cy = 0.5;
  double scale = 0.25;

  bool inside_image() const;
};

/// Default region scales: eyes 0.25, nose 0.30, mouth 0.30.
double default_region_scale(RegionName name);

/// Camera whose h x h grid densely covers only the region box of `camera`'s
/// image. Throws kOutOfRange when the box leaves the image.
Camera region_camera(const Camera& camera, const RegionSpec& region);

}  // namespace sssp
