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

#include "sssp/sssp.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "sssp/checkpoint.hpp"
#include "sssp/config.hpp"
#include "sssp/data_synth.hpp"
#include "sssp/error.hpp"
#include "sssp/image.hpp"
#include "sssp/pipeline.hpp"
#include "sssp/service.hpp"
#include "sssp/training.hpp"

struct sssp_model {
  std::shared_ptr<sssp::PortraitModel> model;
};

struct sssp_server {
  std::unique_ptr<sssp::Service> service;
};

namespace {

thread_local std::string g_last_error;

sssp_status to_status(sssp::ErrorCode code) {
  switch (code) {
    case sssp::ErrorCode::kInvalidArgument: return SSSP_ERR_INVALID_ARGUMENT;
    case sssp::ErrorCode::kShapeMismatch: return SSSP_ERR_SHAPE_MISMATCH;
    case sssp::ErrorCode::kOutOfRange: return SSSP_ERR_OUT_OF_RANGE;
    case sssp::ErrorCode::kNotFound: return SSSP_ERR_NOT_FOUND;
    case sssp::ErrorCode::kIo: return SSSP_ERR_IO;
    case sssp::ErrorCode::kNonFinite: return SSSP_ERR_NON_FINITE;
  }
  return SSSP_ERR_INTERNAL;
}

template <typename Fn>
sssp_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SSSP_OK;
  } catch (const sssp::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SSSP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SSSP_ERR_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  SSSP_CHECK(p != nullptr, sssp::ErrorCode::kInvalidArgument, std::string(name) + " must not be NULL");
}

}  // namespace

extern "C" {

const char* sssp_version(void) { return "0.1.0"; }

const char* sssp_last_error(void) { return g_last_error.c_str(); }

sssp_status sssp_train(const char* stage, const char* config_path, const char* checkpoint_out_path,
                       const char* vq_checkpoint_path, const char* summary_json_path, sssp_log_fn log,
                       void* user_data) {
  return guarded([&] {
    require(config_path, "config_path");
    require(checkpoint_out_path, "checkpoint_out_path");
    sssp::TrainConfig cfg = sssp::TrainConfig::load(config_path);
    if (stage != nullptr) cfg.stage = sssp::stage_from_string(stage);
    std::optional<sssp::Checkpoint> vq;
    if (vq_checkpoint_path != nullptr) vq = sssp::Checkpoint::load(vq_checkpoint_path);
    sssp::LogFn fn;
    if (log != nullptr) {
      fn = [log, user_data](const nlohmann::json& line) { log(line.dump().c_str(), user_data); };
    }
    const sssp::TrainResult result = sssp::train(cfg, vq ? &*vq : nullptr, fn);
    result.checkpoint.save(checkpoint_out_path);
    if (summary_json_path != nullptr) sssp::write_file(summary_json_path, result.summary.dump(2));
  });
}

sssp_status sssp_evaluate(const char* checkpoint_path, const char* report_out_path, int64_t samples) {
  return guarded([&] {
    require(checkpoint_path, "checkpoint_path");
    require(report_out_path, "report_out_path");
    SSSP_CHECK(samples >= 1, sssp::ErrorCode::kInvalidArgument, "samples must be >= 1");
    auto model = sssp::PortraitModel::from_checkpoint(sssp::Checkpoint::load(checkpoint_path));
    sssp::EvalOptions opts;
    opts.samples = samples;
    sssp::write_file(report_out_path, sssp::evaluate(*model, opts).dump(2));
  });
}

sssp_status sssp_model_open(const char* checkpoint_path, sssp_model** out_model) {
  return guarded([&] {
    require(checkpoint_path, "checkpoint_path");
    require(out_model, "out_model");
    auto handle = std::make_unique<sssp_model>();
    handle->model = sssp::PortraitModel::from_checkpoint(sssp::Checkpoint::load(checkpoint_path));
    *out_model = handle.release();
  });
}

void sssp_model_close(sssp_model* model) { delete model; }

int64_t sssp_model_sketch_resolution(const sssp_model* model) {
  return model == nullptr ? 0 : model->model->sketch_resolution();
}

sssp_status sssp_model_render_png(sssp_model* model, const uint8_t* sketch_png, size_t sketch_len, double yaw,
                                  double pitch, uint8_t** out_png, size_t* out_len) {
  return guarded([&] {
    require(model, "model");
    require(sketch_png, "sketch_png");
    require(out_png, "out_png");
    require(out_len, "out_len");
    auto& m = *model->model;
    const torch::Tensor sketch =
        sssp::decode_png_gray(std::string_view(reinterpret_cast<const char*>(sketch_png), sketch_len));
    SSSP_CHECK(sketch.size(0) == m.sketch_resolution() && sketch.size(1) == m.sketch_resolution(),
               sssp::ErrorCode::kShapeMismatch,
               "sketch must be " + std::to_string(m.sketch_resolution()) + " pixels square");
    const sssp::LatentCode latent = m.encode(sketch);
    const sssp::TriPlane planes = m.synthesize(latent);
    const std::string png = sssp::encode_png(m.render_portrait(planes, latent, m.camera(yaw, pitch)));
    auto* buf = static_cast<uint8_t*>(std::malloc(png.size()));
    SSSP_CHECK(buf != nullptr, sssp::ErrorCode::kIo, "out of memory");
    std::memcpy(buf, png.data(), png.size());
    *out_png = buf;
    *out_len = png.size();
  });
}

void sssp_buffer_free(uint8_t* buffer) { std::free(buffer); }

sssp_status sssp_server_create(const char* checkpoint_path, const char* vq_checkpoint_path, const char* static_dir,
                               sssp_server** out_server) {
  return guarded([&] {
    require(out_server, "out_server");
    std::shared_ptr<sssp::PortraitModel> portrait;
    std::shared_ptr<sssp::SketchCodec> codec;
    std::string hashed;
    if (checkpoint_path != nullptr) {
      const std::string bytes = sssp::read_file(checkpoint_path);
      portrait = sssp::PortraitModel::from_checkpoint(sssp::Checkpoint::deserialize(bytes));
      hashed += bytes;
    }
    if (vq_checkpoint_path != nullptr) {
      const std::string bytes = sssp::read_file(vq_checkpoint_path);
      codec = sssp::SketchCodec::from_checkpoint(sssp::Checkpoint::deserialize(bytes));
      hashed += bytes;
    }
    sssp::ServiceOptions opts;
    opts.checkpoint_hash = hashed.empty() ? "" : sssp::sha256_hex(hashed);
    if (static_dir != nullptr) {
      SSSP_CHECK(std::filesystem::is_directory(static_dir), sssp::ErrorCode::kNotFound,
                 std::string("static directory not found: ") + static_dir);
      opts.static_dir = std::filesystem::path(static_dir);
    }
    auto handle = std::make_unique<sssp_server>();
    handle->service = std::make_unique<sssp::Service>(portrait, codec, opts);
    *out_server = handle.release();
  });
}

sssp_status sssp_server_bind(sssp_server* server, const char* host, int port) {
  return guarded([&] {
    require(server, "server");
    require(host, "host");
    SSSP_CHECK(server->service->bind(host, port), sssp::ErrorCode::kIo,
               std::string("cannot bind ") + host + ":" + std::to_string(port));
  });
}

sssp_status sssp_server_run(sssp_server* server) {
  return guarded([&] {
    require(server, "server");
    server->service->listen_after_bind();
  });
}

sssp_status sssp_server_listen(sssp_server* server, const char* host, int port) {
  const sssp_status st = sssp_server_bind(server, host, port);
  return st == SSSP_OK ? sssp_server_run(server) : st;
}

int sssp_server_port(const sssp_server* server) { return server == nullptr ? 0 : server->service->port(); }

sssp_status sssp_server_stop(sssp_server* server) {
  return guarded([&] {
    require(server, "server");
    server->service->stop();
  });
}

void sssp_server_destroy(sssp_server* server) { delete server; }

sssp_status sssp_synth_dataset(const char* out_dir, const char* split, int64_t count, uint64_t seed,
                               int64_t resolution) {
  return guarded([&] {
    require(out_dir, "out_dir");
    require(split, "split");
    SSSP_CHECK(count >= 1 && resolution >= 8, sssp::ErrorCode::kInvalidArgument,
               "count must be >= 1 and resolution >= 8");
    sssp::Dataset(sssp::split_from_string(split), count, seed, resolution, {}, std::filesystem::path(out_dir));
  });
}

}  // extern "C"
