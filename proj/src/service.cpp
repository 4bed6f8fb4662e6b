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

#include "sssp/service.hpp"

#include <httplib.h>

#include <charconv>
#include <cstdio>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sssp/data_synth.hpp"
#include "sssp/error.hpp"
#include "sssp/image.hpp"

namespace sssp {

namespace {

using json = nlohmann::json;

HttpResponse json_response(int status, const json& body) { return {status, "application/json", body.dump(), {}}; }

HttpResponse error_response(int status, const std::string& message) {
  return json_response(status, {{"error", message}});
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return 400;
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kOutOfRange: return 422;
    case ErrorCode::kNotFound: return 404;
    default: return 500;
  }
}

/// Decodes a base64 PNG field into a single-channel image of the expected size.
torch::Tensor decode_image_field(const json& body, const std::string& field, int64_t resolution) {
  SSSP_CHECK(body.contains(field) && body[field].is_string(), ErrorCode::kInvalidArgument,
             "missing string field '" + field + "'");
  std::string text = body[field].get<std::string>();
  // Accept data URLs as produced by canvas.toDataURL().
  if (const auto comma = text.find(','); text.starts_with("data:") && comma != std::string::npos) {
    text = text.substr(comma + 1);
  }
  const torch::Tensor gray = decode_png_gray(base64_decode(text));
  SSSP_CHECK(gray.size(0) == resolution && gray.size(1) == resolution, ErrorCode::kShapeMismatch,
             "image must be " + std::to_string(resolution) + "x" + std::to_string(resolution) + ", got " +
                 std::to_string(gray.size(1)) + "x" + std::to_string(gray.size(0)));
  return gray;
}

double clamp_with_warning(double value, double limit, const char* name, std::vector<std::string>& warnings) {
  if (value < -limit || value > limit) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s %.4g outside the training range [%.4g, %.4g]; clamped", name, value, -limit,
                  limit);
    warnings.emplace_back(buf);
    return std::clamp(value, -limit, limit);
  }
  return value;
}

std::optional<std::string> query_value(const std::multimap<std::string, std::string>& query, const std::string& key) {
  const auto it = query.find(key);
  if (it == query.end()) return std::nullopt;
  return it->second;
}

double parse_double(const std::string& text, const std::string& name) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  SSSP_CHECK(ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(value),
             ErrorCode::kInvalidArgument, "query parameter '" + name + "' is not a number");
  return value;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

SessionStore::SessionStore(std::chrono::seconds ttl, size_t capacity, SteadyClock clock)
    : ttl_(ttl), capacity_(capacity), clock_(std::move(clock)) {
  SSSP_CHECK(capacity_ >= 1, ErrorCode::kInvalidArgument, "session capacity must be >= 1");
  if (!clock_) clock_ = [] { return std::chrono::steady_clock::now(); };
}

std::string SessionStore::create(TriPlane planes, LatentCode latent, const Camera& camera) {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char id[33];
  std::snprintf(id, sizeof(id), "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  auto session = std::make_shared<Session>();
  session->id = id;
  session->planes = std::move(planes);
  session->latent = std::move(latent);
  session->camera = camera;

  std::lock_guard lock(mutex_);
  const auto now = clock_();
  session->created = now;
  evict_expired_locked(now);
  while (lru_.size() >= capacity_) {
    index_.erase(lru_.back()->id);
    lru_.pop_back();
  }
  lru_.push_front(std::move(session));
  index_[id] = lru_.begin();
  return id;
}

std::shared_ptr<const Session> SessionStore::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  evict_expired_locked(clock_());
  const auto it = index_.find(id);
  if (it == index_.end()) return nullptr;
  lru_.splice(lru_.begin(), lru_, it->second);
  return *it->second;
}

size_t SessionStore::size() {
  std::lock_guard lock(mutex_);
  evict_expired_locked(clock_());
  return lru_.size();
}

void SessionStore::evict_expired_locked(std::chrono::steady_clock::time_point now) {
  for (auto it = lru_.begin(); it != lru_.end();) {
    if (now - (*it)->created >= ttl_) {
      index_.erase((*it)->id);
      it = lru_.erase(it);
    } else {
      ++it;
    }
  }
}

// ---------------------------------------------------------------------------

Service::Service(std::shared_ptr<PortraitModel> portrait, std::shared_ptr<SketchCodec> codec, ServiceOptions options,
                 SteadyClock clock)
    : portrait_(std::move(portrait)),
      codec_(std::move(codec)),
      options_(std::move(options)),
      sessions_(options_.session_ttl, options_.session_capacity, std::move(clock)) {
  // The gallery is drawn from fixed seeds, so ids and images are stable
  // across restarts.
  int64_t res = 64;
  if (codec_) {
    res = codec_->resolution();
  } else if (portrait_) {
    res = portrait_->sketch_resolution();
  }
  for (int64_t i = 0; i < options_.gallery_size; ++i) {
    const uint64_t seed = options_.gallery_seed + static_cast<uint64_t>(i);
    const Sample s = generate_sample(seed, res);
    char id[32];
    std::snprintf(id, sizeof(id), "contour-%02lld", static_cast<long long>(i));
    gallery_.emplace_back(id, encode_png(s.contour));
  }
}

Service::~Service() { stop(); }

HttpResponse Service::handle(const std::string& method, const std::string& path,
                             const std::multimap<std::string, std::string>& query, const std::string& body) {
  try {
    if (path == "/api/health" && method == "GET") return health();
    if (path == "/api/contours" && method == "GET") return contours();
    if (path == "/api/contour2sketch" && method == "POST") return contour2sketch(body);
    if (path == "/api/sketch2portrait" && method == "POST") return sketch2portrait(body);
    if (path == "/api/view" && method == "GET") return view(query);
    if (path == "/api/health" || path == "/api/contours" || path == "/api/contour2sketch" ||
        path == "/api/sketch2portrait" || path == "/api/view") {
      return error_response(405, "method not allowed");
    }
    return error_response(404, "no such endpoint: " + path);
  } catch (const Error& e) {
    return error_response(status_for(e.code()), e.what());
  } catch (const json::exception& e) {
    return error_response(400, std::string("malformed request: ") + e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

HttpResponse Service::health() {
  return json_response(200, {{"status", portrait_ || codec_ ? "ok" : "no_model"},
                             {"checkpoint_hash", options_.checkpoint_hash},
                             {"portrait_model", static_cast<bool>(portrait_)},
                             {"sketch_codec", static_cast<bool>(codec_)}});
}

HttpResponse Service::contours() {
  json items = json::array();
  for (const auto& [id, png] : gallery_) items.push_back({{"id", id}, {"png", base64_encode(png)}});
  return json_response(200, {{"contours", items}});
}

HttpResponse Service::contour2sketch(const std::string& body) {
  if (!codec_) return error_response(503, "sketch codec not loaded");
  const json req = json::parse(body);
  SSSP_CHECK(req.is_object(), ErrorCode::kInvalidArgument, "request body must be a JSON object");
  const torch::Tensor contour = decode_image_field(req, "contour", codec_->resolution());
  const torch::Tensor sketch = codec_->contour_to_sketch(contour);
  return json_response(200, {{"sketch", base64_encode(encode_png(sketch))}});
}

HttpResponse Service::sketch2portrait(const std::string& body) {
  if (!portrait_) return error_response(503, "portrait model not loaded");
  const json req = json::parse(body);
  SSSP_CHECK(req.is_object(), ErrorCode::kInvalidArgument, "request body must be a JSON object");
  const torch::Tensor sketch = decode_image_field(req, "sketch", portrait_->sketch_resolution());
  double yaw = 0.0, pitch = 0.0;
  if (req.contains("camera")) {
    const json& cam = req["camera"];
    SSSP_CHECK(cam.is_object(), ErrorCode::kInvalidArgument, "camera must be an object");
    yaw = cam.value("yaw", 0.0);
    pitch = cam.value("pitch", 0.0);
    SSSP_CHECK(std::isfinite(yaw) && std::isfinite(pitch), ErrorCode::kInvalidArgument, "camera must be finite");
  }
  std::vector<std::string> warnings;
  yaw = clamp_with_warning(yaw, portrait_->config().yaw_range, "yaw", warnings);
  pitch = clamp_with_warning(pitch, portrait_->config().pitch_range, "pitch", warnings);

  LatentCode latent = portrait_->encode(sketch);
  TriPlane planes = portrait_->synthesize(latent);
  const Camera camera = portrait_->camera(yaw, pitch);
  const torch::Tensor image = portrait_->render_portrait(planes, latent, camera);
  const std::string id = sessions_.create(std::move(planes), std::move(latent), camera);
  json out{{"portrait", base64_encode(encode_png(image))},
           {"session_id", id},
           {"camera", {{"yaw", yaw}, {"pitch", pitch}}}};
  if (!warnings.empty()) out["warning"] = join(warnings);
  return json_response(200, out);
}

HttpResponse Service::view(const std::multimap<std::string, std::string>& query) {
  if (!portrait_) return error_response(503, "portrait model not loaded");
  const auto id = query_value(query, "session_id");
  SSSP_CHECK(id.has_value() && !id->empty(), ErrorCode::kInvalidArgument, "missing session_id");
  const auto session = sessions_.find(*id);
  if (!session) return error_response(404, "unknown or expired session");
  double yaw = session->camera.yaw, pitch = session->camera.pitch;
  if (const auto v = query_value(query, "yaw")) yaw = parse_double(*v, "yaw");
  if (const auto v = query_value(query, "pitch")) pitch = parse_double(*v, "pitch");
  std::vector<std::string> warnings;
  yaw = clamp_with_warning(yaw, portrait_->config().yaw_range, "yaw", warnings);
  pitch = clamp_with_warning(pitch, portrait_->config().pitch_range, "pitch", warnings);
  // Only the renderer and the upsampling head run here.
  const torch::Tensor image = portrait_->render_portrait(session->planes, session->latent, portrait_->camera(yaw, pitch));
  HttpResponse res{200, "image/png", encode_png(image), {}};
  if (!warnings.empty()) res.headers["X-Warning"] = join(warnings);
  return res;
}

// ---------------------------------------------------------------------------

bool Service::bind(const std::string& host, int port) {
  server_ = std::make_unique<httplib::Server>();
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    std::multimap<std::string, std::string> query(req.params.begin(), req.params.end());
    const HttpResponse out = handle(req.method, req.path, query, req.body);
    res.status = out.status;
    for (const auto& [k, v] : out.headers) res.set_header(k, v);
    res.set_content(out.body, out.content_type);
  };
  server_->Get(R"(/api/.*)", forward);
  server_->Post(R"(/api/.*)", forward);
  server_->Put(R"(/api/.*)", forward);
  server_->Delete(R"(/api/.*)", forward);
  if (options_.static_dir) {
    SSSP_CHECK(server_->set_mount_point("/", options_.static_dir->string()), ErrorCode::kNotFound,
               "static directory not found: " + options_.static_dir->string());
  }
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
    return port_ > 0;
  }
  port_ = port;
  return server_->bind_to_port(host, port);
}

void Service::listen_after_bind() {
  SSSP_CHECK(server_ != nullptr, ErrorCode::kInvalidArgument, "bind() must precede listen_after_bind()");
  server_->listen_after_bind();
}

void Service::listen(const std::string& host, int port) {
  SSSP_CHECK(bind(host, port), ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  listen_after_bind();
}

void Service::stop() {
  if (server_) server_->stop();
}

bool Service::running() const { return server_ && server_->is_running(); }

}  // namespace sssp
