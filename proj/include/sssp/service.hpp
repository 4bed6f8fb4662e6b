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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "sssp/camera.hpp"
#include "sssp/generator.hpp"
#include "sssp/pipeline.hpp"
#include "sssp/triplane.hpp"

namespace httplib {
class Server;
}

namespace sssp {

using SteadyClock = std::function<std::chrono::steady_clock::time_point()>;

struct Session {
  std::string id;
  TriPlane planes;
  LatentCode latent;
  Camera camera;
  std::chrono::steady_clock::time_point created;
};

/// Capacity-bounded LRU of sessions with a fixed time-to-live. Lookups of
/// expired sessions evict them and report absence.
class SessionStore {
 public:
  explicit SessionStore(std::chrono::seconds ttl = std::chrono::minutes(15), size_t capacity = 64,
                        SteadyClock clock = {});

  /// Stores the session under a fresh random id and returns the id.
  std::string create(TriPlane planes, LatentCode latent, const Camera& camera);
  std::shared_ptr<const Session> find(const std::string& id);
  size_t size();

 private:
  void evict_expired_locked(std::chrono::steady_clock::time_point now);

  std::chrono::seconds ttl_;
  size_t capacity_;
  SteadyClock clock_;
  std::mutex mutex_;
  std::list<std::shared_ptr<const Session>> lru_;  // front = most recent
  std::unordered_map<std::string, std::list<std::shared_ptr<const Session>>::iterator> index_;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

struct ServiceOptions {
  std::chrono::seconds session_ttl = std::chrono::minutes(15);
  size_t session_capacity = 64;
  int64_t gallery_size = 8;
  uint64_t gallery_seed = 2024;
  /// Served at "/" when set (the browser editor's build output).
  std::optional<std::filesystem::path> static_dir;
  /// Identifies the loaded weights in /api/health.
  std::string checkpoint_hash;
};

/// Request handling is independent of the socket layer so tests can call
/// handle() directly; listen() wires the same handlers into an HTTP server.
class Service {
 public:
  /// Either model may be null; endpoints needing it then answer 503.
  Service(std::shared_ptr<PortraitModel> portrait, std::shared_ptr<SketchCodec> codec, ServiceOptions options = {},
          SteadyClock clock = {});
  ~Service();

  HttpResponse handle(const std::string& method, const std::string& path,
                      const std::multimap<std::string, std::string>& query, const std::string& body);

  /// Blocks until stop(). Port 0 picks a free port, reported by port().
  void listen(const std::string& host, int port);
  bool bind(const std::string& host, int port);
  void listen_after_bind();
  void stop();
  int port() const { return port_; }
  bool running() const;

  SessionStore& sessions() { return sessions_; }

 private:
  HttpResponse health();
  HttpResponse contours();
  HttpResponse contour2sketch(const std::string& body);
  HttpResponse sketch2portrait(const std::string& body);
  HttpResponse view(const std::multimap<std::string, std::string>& query);

  std::shared_ptr<PortraitModel> portrait_;
  std::shared_ptr<SketchCodec> codec_;
  ServiceOptions options_;
  SessionStore sessions_;
  std::vector<std::pair<std::string, std::string>> gallery_;  // id, PNG bytes
  std::unique_ptr<httplib::Server> server_;
  int port_ = 0;
};

}  // namespace sssp
