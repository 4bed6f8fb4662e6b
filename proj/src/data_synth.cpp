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

#include "sssp/data_synth.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>

#include "sssp/error.hpp"
#include "sssp/image.hpp"

namespace sssp {

namespace {

enum PrimitiveId : int32_t {
  kBackground = 0,
  kHead,
  kHair,
  kLeftEar,
  kRightEar,
  kLeftEye,
  kRightEye,
  kLeftPupil,
  kRightPupil,
  kLeftBrow,
  kRightBrow,
  kNose,
  kMouth,
};

struct Ellipsoid {
  int32_t id = kBackground;
  Vec3 center{};
  Vec3 radii{1, 1, 1};
  std::array<double, 3> color{};
  std::function<bool(const Vec3&)> keep;  // optional clip predicate on hit points
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Depth of the head surface in front of (x, z).
double front_surface(const FaceParams& f, double x, double z) {
  const double s = 1.0 - (x / f.head_rx) * (x / f.head_rx) - (z / f.head_rz) * (z / f.head_rz);
  return f.head_ry * std::sqrt(std::max(0.0, s));
}

Vec3 eye_center(const FaceParams& f, bool left) {
  const double x = left ? f.eye_spacing : -f.eye_spacing;
  const double z = f.eye_height + (left ? f.asym_eye_dz : -f.asym_eye_dz);
  return {x, front_surface(f, x, z) - 0.3 * f.eye_radius, z};
}

Vec3 nose_center(const FaceParams& f) {
  return {0.0, front_surface(f, 0.0, f.nose_height) + 0.45 * f.nose_length, f.nose_height};
}

Vec3 mouth_center(const FaceParams& f) {
  return {f.asym_mouth_dx, front_surface(f, f.asym_mouth_dx, f.mouth_height) - 0.01, f.mouth_height};
}

std::vector<Ellipsoid> build_scene(const FaceParams& f) {
  std::vector<Ellipsoid> scene;
  const auto& skin = f.skin_color;
  scene.push_back({kHead, {0, 0, 0}, {f.head_rx, f.head_ry, f.head_rz}, skin, {}});

  const double hair_line = f.hair_line;
  scene.push_back({kHair,
                   {f.asym_hair_dx, -0.04, 0.06},
                   {f.head_rx * 1.08 * f.hair_volume, f.head_ry * 1.08 * f.hair_volume,
                    f.head_rz * 1.06 * f.hair_volume},
                   f.hair_color,
                   [hair_line](const Vec3& p) { return p[2] >= hair_line || p[1] <= -0.1; }});

  for (const bool left : {true, false}) {
    const double side = left ? 1.0 : -1.0;
    scene.push_back({left ? kLeftEar : kRightEar,
                     {side * f.head_rx * 0.95, -0.02, 0.0},
                     {0.05, f.ear_size * 0.6, f.ear_size},
                     {skin[0] * 0.95, skin[1] * 0.92, skin[2] * 0.92},
                     {}});
    const Vec3 eye = eye_center(f, left);
    scene.push_back({left ? kLeftEye : kRightEye, eye, {f.eye_radius, f.eye_radius, f.eye_radius},
                     {0.96, 0.96, 0.96}, {}});
    scene.push_back({left ? kLeftPupil : kRightPupil,
                     {eye[0], eye[1] + 0.75 * f.eye_radius, eye[2]},
                     {f.pupil_radius, f.pupil_radius, f.pupil_radius},
                     {0.08, 0.07, 0.07},
                     {}});
    const double bz = f.eye_height + f.brow_raise + (left ? f.asym_brow_dz : -f.asym_brow_dz);
    const double bx = side * f.eye_spacing;
    scene.push_back({left ? kLeftBrow : kRightBrow,
                     {bx, front_surface(f, bx, bz) + 0.005, bz},
                     {f.brow_length, 0.03, 0.02},
                     f.hair_color,
                     {}});
  }
  scene.push_back({kNose, nose_center(f), {f.nose_radius, 0.6 * f.nose_length, 1.4 * f.nose_radius},
                   {skin[0] * 0.97, skin[1] * 0.9, skin[2] * 0.88}, {}});
  scene.push_back({kMouth, mouth_center(f), {f.mouth_width, 0.06, f.mouth_thickness}, {0.74, 0.25, 0.3}, {}});
  return scene;
}

// Nearest accepted intersection distance, or +inf.
double intersect(const Ellipsoid& e, const Vec3& origin, const Vec3& dir) {
  Vec3 o, d;
  for (int k = 0; k < 3; ++k) {
    o[k] = (origin[k] - e.center[k]) / e.radii[k];
    d[k] = dir[k] / e.radii[k];
  }
  const double a = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
  const double b = 2.0 * (o[0] * d[0] + o[1] * d[1] + o[2] * d[2]);
  const double c = o[0] * o[0] + o[1] * o[1] + o[2] * o[2] - 1.0;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double sq = std::sqrt(disc);
  for (const double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
    if (t <= 0.0) continue;
    if (!e.keep) return t;
    const Vec3 p{origin[0] + t * dir[0], origin[1] + t * dir[1], origin[2] + t * dir[2]};
    if (e.keep(p)) return t;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

FaceParams FaceParams::sample(std::mt19937_64& rng, bool symmetric) {
  FaceParams f;
  f.head_rx = uniform(rng, 0.5, 0.6);
  f.head_ry = uniform(rng, 0.55, 0.65);
  f.head_rz = uniform(rng, 0.68, 0.8);
  f.eye_spacing = uniform(rng, 0.17, 0.24);
  f.eye_height = uniform(rng, 0.08, 0.16);
  f.eye_radius = uniform(rng, 0.07, 0.1);
  f.pupil_radius = uniform(rng, 0.03, 0.045);
  f.brow_raise = uniform(rng, 0.11, 0.15);
  f.brow_length = uniform(rng, 0.08, 0.12);
  f.nose_height = uniform(rng, -0.12, -0.05);
  f.nose_length = uniform(rng, 0.08, 0.14);
  f.nose_radius = uniform(rng, 0.05, 0.07);
  f.mouth_height = uniform(rng, -0.38, -0.28);
  f.mouth_width = uniform(rng, 0.12, 0.2);
  f.mouth_thickness = uniform(rng, 0.03, 0.05);
  f.ear_size = uniform(rng, 0.1, 0.16);
  f.hair_volume = uniform(rng, 1.0, 1.12);
  f.hair_line = uniform(rng, 0.25, 0.45);
  const double tone = uniform(rng, 0.0, 1.0);
  f.skin_color = {0.62 + 0.3 * tone, 0.45 + 0.25 * tone, 0.36 + 0.24 * tone};
  const double hue = uniform(rng, 0.0, 1.0);
  const double shade = uniform(rng, 0.1, 0.7);
  f.hair_color = {shade, shade * (0.65 + 0.25 * hue), shade * (0.35 + 0.3 * hue)};
  f.symmetric = symmetric;
  if (!symmetric) {
    f.asym_eye_dz = uniform(rng, -0.03, 0.03);
    f.asym_brow_dz = uniform(rng, -0.03, 0.03);
    f.asym_mouth_dx = uniform(rng, -0.04, 0.04);
    f.asym_hair_dx = uniform(rng, -0.08, 0.08);
  } else {
    // Keep the draw count independent of the flag.
    for (int i = 0; i < 4; ++i) uniform(rng, 0.0, 1.0);
  }
  return f;
}

FaceParams FaceParams::mirrored() const {
  FaceParams m = *this;
  m.asym_eye_dz = -asym_eye_dz;
  m.asym_brow_dz = -asym_brow_dz;
  m.asym_mouth_dx = -asym_mouth_dx;
  m.asym_hair_dx = -asym_hair_dx;
  return m;
}

nlohmann::json FaceParams::to_json() const {
  return {{"head_rx", head_rx},         {"head_ry", head_ry},
          {"head_rz", head_rz},         {"eye_spacing", eye_spacing},
          {"eye_height", eye_height},   {"eye_radius", eye_radius},
          {"pupil_radius", pupil_radius}, {"brow_raise", brow_raise},
          {"brow_length", brow_length}, {"nose_height", nose_height},
          {"nose_length", nose_length}, {"nose_radius", nose_radius},
          {"mouth_height", mouth_height}, {"mouth_width", mouth_width},
          {"mouth_thickness", mouth_thickness}, {"ear_size", ear_size},
          {"hair_volume", hair_volume}, {"hair_line", hair_line},
          {"asym_eye_dz", asym_eye_dz}, {"asym_brow_dz", asym_brow_dz},
          {"asym_mouth_dx", asym_mouth_dx}, {"asym_hair_dx", asym_hair_dx},
          {"skin_color", skin_color},   {"hair_color", hair_color},
          {"symmetric", symmetric}};
}

FaceParams FaceParams::from_json(const nlohmann::json& j) {
  FaceParams f;
#define SSSP_FACE_FIELD(name) f.name = j.value(#name, f.name)
  SSSP_FACE_FIELD(head_rx);
  SSSP_FACE_FIELD(head_ry);
  SSSP_FACE_FIELD(head_rz);
  SSSP_FACE_FIELD(eye_spacing);
  SSSP_FACE_FIELD(eye_height);
  SSSP_FACE_FIELD(eye_radius);
  SSSP_FACE_FIELD(pupil_radius);
  SSSP_FACE_FIELD(brow_raise);
  SSSP_FACE_FIELD(brow_length);
  SSSP_FACE_FIELD(nose_height);
  SSSP_FACE_FIELD(nose_length);
  SSSP_FACE_FIELD(nose_radius);
  SSSP_FACE_FIELD(mouth_height);
  SSSP_FACE_FIELD(mouth_width);
  SSSP_FACE_FIELD(mouth_thickness);
  SSSP_FACE_FIELD(ear_size);
  SSSP_FACE_FIELD(hair_volume);
  SSSP_FACE_FIELD(hair_line);
  SSSP_FACE_FIELD(asym_eye_dz);
  SSSP_FACE_FIELD(asym_brow_dz);
  SSSP_FACE_FIELD(asym_mouth_dx);
  SSSP_FACE_FIELD(asym_hair_dx);
  SSSP_FACE_FIELD(skin_color);
  SSSP_FACE_FIELD(hair_color);
  SSSP_FACE_FIELD(symmetric);
#undef SSSP_FACE_FIELD
  return f;
}

SceneRender render_face(const FaceParams& face, const Camera& camera, int64_t resolution) {
  camera.validate();
  SSSP_CHECK(resolution >= 2, ErrorCode::kInvalidArgument, "render resolution must be >= 2");
  const std::vector<Ellipsoid> scene = build_scene(face);
  const Vec3 origin = camera.position();
  const Vec3 light{0.0, 0.6, 0.8};

  const int64_t n = resolution;
  torch::Tensor image = torch::zeros({3, n, n}, torch::kFloat32);
  torch::Tensor ids = torch::zeros({n, n}, torch::kInt32);
  torch::Tensor depth = torch::full({n, n}, std::numeric_limits<double>::infinity(), torch::kFloat64);
  auto img = image.accessor<float, 3>();
  auto id = ids.accessor<int32_t, 2>();
  auto dep = depth.accessor<double, 2>();

  for (int64_t r = 0; r < n; ++r) {
    for (int64_t c = 0; c < n; ++c) {
      const Vec3 dir = camera.ray_direction(r, c, n);
      double best = std::numeric_limits<double>::infinity();
      const Ellipsoid* hit = nullptr;
      for (const auto& e : scene) {
        const double t = intersect(e, origin, dir);
        if (t < best) {
          best = t;
          hit = &e;
        }
      }
      if (hit == nullptr) continue;
      const Vec3 p{origin[0] + best * dir[0], origin[1] + best * dir[1], origin[2] + best * dir[2]};
      Vec3 normal;
      double len = 0.0;
      for (int k = 0; k < 3; ++k) {
        normal[k] = (p[k] - hit->center[k]) / (hit->radii[k] * hit->radii[k]);
        len += normal[k] * normal[k];
      }
      len = std::sqrt(len);
      const double lnorm = std::sqrt(light[0] * light[0] + light[1] * light[1] + light[2] * light[2]);
      double lambert = 0.0;
      for (int k = 0; k < 3; ++k) lambert += normal[k] / len * light[k] / lnorm;
      const double shade = 0.3 + 0.7 * std::max(0.0, lambert);
      for (int k = 0; k < 3; ++k) {
        img[k][r][c] = static_cast<float>(std::clamp(hit->color[static_cast<size_t>(k)] * shade, 0.0, 1.0));
      }
      id[r][c] = hit->id;
      dep[r][c] = best;
    }
  }
  // Samples are stored as 8-bit images; quantize now so cached and generated
  // samples are identical.
  image = (image * 255.0).round() / 255.0;
  return {image, ids, depth};
}

torch::Tensor sketch_from_render(const SceneRender& render) {
  const int64_t rows = render.ids.size(0);
  const int64_t cols = render.ids.size(1);
  torch::Tensor sketch = torch::ones({rows, cols}, torch::kFloat32);
  auto s = sketch.accessor<float, 2>();
  auto id = render.ids.accessor<int32_t, 2>();
  auto dep = render.depth.accessor<double, 2>();
  constexpr int64_t kDr[4] = {-1, 1, 0, 0};
  constexpr int64_t kDc[4] = {0, 0, -1, 1};
  for (int64_t r = 0; r < rows; ++r) {
    for (int64_t c = 0; c < cols; ++c) {
      if (id[r][c] == kBackground) continue;
      for (int k = 0; k < 4; ++k) {
        const int64_t rr = r + kDr[k], cc = c + kDc[k];
        if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
        if (id[rr][cc] != id[r][c] && dep[rr][cc] >= dep[r][c]) {
          s[r][c] = 0.0f;
          break;
        }
      }
    }
  }
  return sketch;
}

namespace {

// Zhang-Suen thinning of a 0/1 image.
cv::Mat thin(const cv::Mat& binary) {
  cv::Mat img = binary.clone();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<cv::Point> remove;
      for (int r = 1; r < img.rows - 1; ++r) {
        for (int c = 1; c < img.cols - 1; ++c) {
          if (img.at<uint8_t>(r, c) == 0) continue;
          const int p2 = img.at<uint8_t>(r - 1, c), p3 = img.at<uint8_t>(r - 1, c + 1);
          const int p4 = img.at<uint8_t>(r, c + 1), p5 = img.at<uint8_t>(r + 1, c + 1);
          const int p6 = img.at<uint8_t>(r + 1, c), p7 = img.at<uint8_t>(r + 1, c - 1);
          const int p8 = img.at<uint8_t>(r, c - 1), p9 = img.at<uint8_t>(r - 1, c - 1);
          const int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
          if (b < 2 || b > 6) continue;
          const int seq[9] = {p2, p3, p4, p5, p6, p7, p8, p9, p2};
          int a = 0;
          for (int i = 0; i < 8; ++i) a += (seq[i] == 0 && seq[i + 1] == 1);
          if (a != 1) continue;
          if (pass == 0 && (p2 * p4 * p6 != 0 || p4 * p6 * p8 != 0)) continue;
          if (pass == 1 && (p2 * p4 * p8 != 0 || p2 * p6 * p8 != 0)) continue;
          remove.emplace_back(c, r);
        }
      }
      for (const auto& pt : remove) img.at<uint8_t>(pt) = 0;
      changed = changed || !remove.empty();
    }
  }
  return img;
}

}  // namespace

torch::Tensor simplify_sketch(const torch::Tensor& sketch, double length_fraction) {
  SSSP_CHECK(sketch.dim() == 2, ErrorCode::kShapeMismatch, "simplify_sketch expects [H, W]");
  const torch::Tensor src = sketch.to(torch::kFloat32).contiguous();
  const int rows = static_cast<int>(src.size(0));
  const int cols = static_cast<int>(src.size(1));
  const torch::Tensor ink_t = (src < 0.5).to(torch::kUInt8).contiguous();
  const cv::Mat ink(rows, cols, CV_8UC1, ink_t.data_ptr<uint8_t>());

  cv::Mat dilated;
  cv::dilate(ink, dilated, cv::getStructuringElement(cv::MORPH_RECT, cv::Size(3, 3)));
  const cv::Mat skeleton = thin(dilated);
  cv::Mat labels;
  const int count = cv::connectedComponents(dilated, labels, 8, CV_32S);

  std::vector<int64_t> length(static_cast<size_t>(count), 0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (skeleton.at<uint8_t>(r, c)) ++length[static_cast<size_t>(labels.at<int32_t>(r, c))];
    }
  }
  const double threshold = length_fraction * static_cast<double>(rows);
  torch::Tensor out = torch::ones_like(src);
  auto o = out.accessor<float, 2>();
  auto in = src.accessor<float, 2>();
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int label = labels.at<int32_t>(r, c);
      if (ink.at<uint8_t>(r, c) && label > 0 && static_cast<double>(length[static_cast<size_t>(label)]) >= threshold) {
        o[r][c] = in[r][c];
      }
    }
  }
  return out;
}

std::array<RegionSpec, 4> face_regions(const FaceParams& face, const Camera& camera) {
  const std::array<std::pair<RegionName, Vec3>, 4> centers{{
      {RegionName::kLeftEye, eye_center(face, true)},
      {RegionName::kRightEye, eye_center(face, false)},
      {RegionName::kNose, nose_center(face)},
      {RegionName::kMouth, mouth_center(face)},
  }};
  std::array<RegionSpec, 4> regions;
  for (size_t i = 0; i < 4; ++i) {
    const auto [name, world] = centers[i];
    const auto uv = camera.project(world);
    const double scale = default_region_scale(name);
    const double half = scale / 2.0;
    regions[i] = {name, std::clamp(uv[0], half, 1.0 - half), std::clamp(uv[1], half, 1.0 - half), scale};
  }
  return regions;
}

Camera CameraDistribution::sample(std::mt19937_64& rng) const {
  Camera c = frontal();
  c.yaw = uniform(rng, -yaw_range, yaw_range);
  c.pitch = uniform(rng, -pitch_range, pitch_range);
  return c;
}

Camera CameraDistribution::frontal() const {
  Camera c;
  c.radius = radius;
  c.fov_y = fov_y;
  return c;
}

Sample make_sample(const FaceParams& face, const Camera& camera, int64_t resolution, uint64_t seed) {
  Sample s;
  s.seed = seed;
  s.face = face;
  s.camera = camera;
  const SceneRender r = render_face(face, camera, resolution);
  s.image = r.image;
  s.sketch = sketch_from_render(r);
  s.contour = simplify_sketch(s.sketch);
  s.regions = face_regions(face, camera);
  return s;
}

Sample generate_sample(uint64_t seed, int64_t resolution, const CameraDistribution& cameras) {
  std::mt19937_64 rng(seed);
  const bool symmetric = uniform(rng, 0.0, 1.0) < 0.5;
  const FaceParams face = FaceParams::sample(rng, symmetric);
  const Camera camera = cameras.sample(rng);
  return make_sample(face, camera, resolution, seed);
}

std::string split_name(Split split) { return split == Split::kTrain ? "train" : "val"; }

Split split_from_string(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  throw Error(ErrorCode::kInvalidArgument, "unknown split: " + name);
}

uint64_t sample_seed(Split split, uint64_t base_seed, int64_t index) {
  // splitmix64 of (base, index), with the split in the low bit.
  uint64_t z = base_seed * 0x9E3779B97F4A7C15ULL + static_cast<uint64_t>(index) + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return (z & ~1ULL) | (split == Split::kVal ? 1ULL : 0ULL);
}

void write_sample_cache(const std::filesystem::path& dir, const Sample& sample) {
  std::filesystem::create_directories(dir);
  write_png(dir / "image.png", sample.image);
  write_png(dir / "sketch.png", sample.sketch);
  write_png(dir / "contour.png", sample.contour);
  nlohmann::json regions = nlohmann::json::array();
  for (const auto& r : sample.regions) {
    regions.push_back({{"name", region_name(r.name)}, {"cx", r.cx}, {"cy", r.cy}, {"scale", r.scale}});
  }
  const nlohmann::json meta{
      {"seed", sample.seed},
      {"resolution", sample.image.size(-1)},
      {"camera",
       {{"yaw", sample.camera.yaw},
        {"pitch", sample.camera.pitch},
        {"radius", sample.camera.radius},
        {"fov_y", sample.camera.fov_y}}},
      {"regions", regions},
      {"face", sample.face.to_json()},
  };
  write_file(dir / "meta.json", meta.dump(2));
}

Sample read_sample_cache(const std::filesystem::path& dir) {
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_file(dir / "meta.json"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, "bad sample metadata in " + dir.string() + ": " + e.what());
  }
  Sample s;
  s.seed = meta.at("seed").get<uint64_t>();
  s.face = FaceParams::from_json(meta.at("face"));
  const auto& cam = meta.at("camera");
  s.camera.yaw = cam.at("yaw").get<double>();
  s.camera.pitch = cam.at("pitch").get<double>();
  s.camera.radius = cam.at("radius").get<double>();
  s.camera.fov_y = cam.at("fov_y").get<double>();
  const auto& regions = meta.at("regions");
  SSSP_CHECK(regions.size() == 4, ErrorCode::kIo, "sample metadata must list four regions");
  for (size_t i = 0; i < 4; ++i) {
    const auto& r = regions[i];
    s.regions[i] = {region_from_string(r.at("name").get<std::string>()), r.at("cx").get<double>(),
                    r.at("cy").get<double>(), r.at("scale").get<double>()};
  }
  s.image = read_png(dir / "image.png");
  s.sketch = read_png(dir / "sketch.png")[0];
  s.contour = read_png(dir / "contour.png")[0];
  return s;
}

Dataset::Dataset(Split split, int64_t size, uint64_t base_seed, int64_t resolution,
                 const CameraDistribution& cameras, std::optional<std::filesystem::path> cache_dir)
    : split_(split), resolution_(resolution) {
  SSSP_CHECK(size >= 1, ErrorCode::kInvalidArgument, "dataset size must be >= 1");
  if (!cache_dir) {
    if (const char* env = std::getenv("SSSP_CACHE_DIR"); env != nullptr && *env != '\0') {
      cache_dir = std::filesystem::path(env);
    }
  }
  samples_.reserve(static_cast<size_t>(size));
  for (int64_t i = 0; i < size; ++i) {
    const uint64_t seed = sample_seed(split, base_seed, i);
    if (cache_dir) {
      char name[64];
      std::snprintf(name, sizeof(name), "r%lld-%016llx", static_cast<long long>(resolution),
                    static_cast<unsigned long long>(seed));
      const std::filesystem::path dir = *cache_dir / name;
      if (std::filesystem::exists(dir / "meta.json")) {
        samples_.push_back(read_sample_cache(dir));
        continue;
      }
      samples_.push_back(generate_sample(seed, resolution, cameras));
      write_sample_cache(dir, samples_.back());
    } else {
      samples_.push_back(generate_sample(seed, resolution, cameras));
    }
  }
}

}  // namespace sssp
