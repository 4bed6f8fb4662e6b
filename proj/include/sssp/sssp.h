/*
 * Copyright 2026 The SSSP Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the sketch-to-portrait library. Every call returns an
 * sssp_status; on failure sssp_last_error() describes the problem for the
 * calling thread. Handles are opaque and owned by the caller. */

#ifndef SSSP_SSSP_H_
#define SSSP_SSSP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SSSP_BUILDING_LIBRARY)
#define SSSP_API __attribute__((visibility("default")))
#else
#define SSSP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sssp_status {
  SSSP_OK = 0,
  SSSP_ERR_INVALID_ARGUMENT = 1,
  SSSP_ERR_SHAPE_MISMATCH = 2,
  SSSP_ERR_OUT_OF_RANGE = 3,
  SSSP_ERR_NOT_FOUND = 4,
  SSSP_ERR_IO = 5,
  SSSP_ERR_NON_FINITE = 6,
  SSSP_ERR_INTERNAL = 7
} sssp_status;

typedef struct sssp_model sssp_model;
typedef struct sssp_server sssp_server;

/* Receives one JSON line per logged training step. */
typedef void (*sssp_log_fn)(const char* json_line, void* user_data);

SSSP_API const char* sssp_version(void);

/* Message of the last failed call on this thread ("" if none). */
SSSP_API const char* sssp_last_error(void);

/* Trains one stage from a JSON config file and writes the checkpoint.
 * stage is "vq", "contour" or "sssp" (NULL keeps the config's stage);
 * vq_checkpoint_path is required for "contour". summary_json_path may be
 * NULL. */
SSSP_API sssp_status sssp_train(const char* stage, const char* config_path, const char* checkpoint_out_path,
                                const char* vq_checkpoint_path, const char* summary_json_path, sssp_log_fn log,
                                void* user_data);

/* Evaluates a portrait checkpoint on `samples` validation samples and writes
 * a JSON report. */
SSSP_API sssp_status sssp_evaluate(const char* checkpoint_path, const char* report_out_path, int64_t samples);

SSSP_API sssp_status sssp_model_open(const char* checkpoint_path, sssp_model** out_model);
SSSP_API void sssp_model_close(sssp_model* model);

/* Side length of the square sketches the model accepts. */
SSSP_API int64_t sssp_model_sketch_resolution(const sssp_model* model);

/* Encodes a sketch PNG and renders the portrait at (yaw, pitch). The PNG
 * result is allocated by the library; release it with sssp_buffer_free. */
SSSP_API sssp_status sssp_model_render_png(sssp_model* model, const uint8_t* sketch_png, size_t sketch_len, double yaw,
                                           double pitch, uint8_t** out_png, size_t* out_len);

SSSP_API void sssp_buffer_free(uint8_t* buffer);

/* Either checkpoint path may be NULL; static_dir may be NULL. */
SSSP_API sssp_status sssp_server_create(const char* checkpoint_path, const char* vq_checkpoint_path,
                                        const char* static_dir, sssp_server** out_server);
/* Binds host:port (port 0 picks a free one) and serves until
 * sssp_server_stop. */
SSSP_API sssp_status sssp_server_listen(sssp_server* server, const char* host, int port);
/* Binds without serving; sssp_server_port then reports the port. */
SSSP_API sssp_status sssp_server_bind(sssp_server* server, const char* host, int port);
SSSP_API sssp_status sssp_server_run(sssp_server* server);
SSSP_API int sssp_server_port(const sssp_server* server);
SSSP_API sssp_status sssp_server_stop(sssp_server* server);
SSSP_API void sssp_server_destroy(sssp_server* server);

/* Writes `count` synthetic samples of `split` ("train" or "val") under
 * out_dir, one directory per sample. */
SSSP_API sssp_status sssp_synth_dataset(const char* out_dir, const char* split, int64_t count, uint64_t seed,
                                        int64_t resolution);

#ifdef __cplusplus
}
#endif

#endif /* SSSP_SSSP_H_ */
