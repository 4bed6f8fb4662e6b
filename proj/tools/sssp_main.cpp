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

// Command-line front end over the C API.

#include <CLI11.hpp>

#include <pthread.h>
#include <signal.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <thread>
#include <vector>

#include "sssp/sssp.h"

namespace {

int fail(const char* what) {
  std::cerr << "sssp: " << what << ": " << sssp_last_error() << "\n";
  return 1;
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

void print_line(const char* line, void* /*user*/) { std::cout << line << std::endl; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sketch-guided 3D portrait generation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sssp_version()));

  std::string stage, config, out, vq_ckpt, summary;
  auto* train = app.add_subcommand("train", "Train one stage and write a checkpoint");
  train->add_option("--stage", stage, "vq, contour or sssp (defaults to the config's stage)")
      ->check(CLI::IsMember({"vq", "contour", "sssp"}));
  train->add_option("--config", config, "TrainConfig JSON")->required()->check(CLI::ExistingFile);
  train->add_option("--out", out, "Checkpoint to write")->default_val("checkpoint.bin");
  train->add_option("--vq-ckpt", vq_ckpt, "Sketch codec checkpoint (contour stage)")->check(CLI::ExistingFile);
  train->add_option("--summary", summary, "Optional JSON summary output");

  std::string ckpt, report;
  int64_t eval_samples = 16;
  auto* eval = app.add_subcommand("eval", "Evaluate a portrait checkpoint");
  eval->add_option("--ckpt", ckpt, "Portrait checkpoint")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", report, "Report JSON")->default_val("report.json");
  eval->add_option("--samples", eval_samples, "Validation samples")->default_val(16);

  std::string sketch, image_out;
  double yaw = 0.0, pitch = 0.0;
  auto* render = app.add_subcommand("render", "Render a portrait from a sketch PNG");
  render->add_option("--ckpt", ckpt, "Portrait checkpoint")->required()->check(CLI::ExistingFile);
  render->add_option("--sketch", sketch, "Sketch PNG")->required()->check(CLI::ExistingFile);
  render->add_option("--yaw", yaw, "Camera yaw (rad)")->default_val(0.0);
  render->add_option("--pitch", pitch, "Camera pitch (rad)")->default_val(0.0);
  render->add_option("--out", image_out, "Output PNG")->default_val("portrait.png");

  std::string host = "127.0.0.1", static_dir;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--ckpt", ckpt, "Portrait checkpoint")->check(CLI::ExistingFile);
  serve->add_option("--vq-ckpt", vq_ckpt, "Contour-to-sketch checkpoint")->check(CLI::ExistingFile);
  serve->add_option("--host", host)->default_val("127.0.0.1");
  serve->add_option("--port", port)->default_val(8080);
  serve->add_option("--static-dir", static_dir, "Browser editor assets")->check(CLI::ExistingDirectory);

  std::string split = "train";
  int64_t count = 16, resolution = 64;
  uint64_t seed = 7;
  auto* synth = app.add_subcommand("synth", "Write synthetic samples to disk");
  synth->add_option("--out", out, "Output directory")->required();
  synth->add_option("--split", split)->check(CLI::IsMember({"train", "val"}))->default_val("train");
  synth->add_option("--count", count)->default_val(16);
  synth->add_option("--seed", seed)->default_val(7);
  synth->add_option("--resolution", resolution)->default_val(64);

  CLI11_PARSE(app, argc, argv);

  if (*train) {
    if (sssp_train(opt(stage), config.c_str(), out.c_str(), opt(vq_ckpt), opt(summary), print_line, nullptr) !=
        SSSP_OK) {
      return fail("train");
    }
    std::cerr << "wrote " << out << "\n";
    return 0;
  }
  if (*eval) {
    if (sssp_evaluate(ckpt.c_str(), report.c_str(), eval_samples) != SSSP_OK) return fail("eval");
    std::cerr << "wrote " << report << "\n";
    return 0;
  }
  if (*render) {
    std::ifstream in(sketch, std::ios::binary);
    const std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    sssp_model* model = nullptr;
    if (sssp_model_open(ckpt.c_str(), &model) != SSSP_OK) return fail("render");
    uint8_t* png = nullptr;
    size_t len = 0;
    const sssp_status st = sssp_model_render_png(model, bytes.data(), bytes.size(), yaw, pitch, &png, &len);
    sssp_model_close(model);
    if (st != SSSP_OK) return fail("render");
    std::ofstream(image_out, std::ios::binary).write(reinterpret_cast<const char*>(png), static_cast<std::streamsize>(len));
    sssp_buffer_free(png);
    std::cerr << "wrote " << image_out << "\n";
    return 0;
  }
  if (*serve) {
    // Block termination signals in every thread; a watcher thread turns them
    // into a clean stop.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    sssp_server* server = nullptr;
    if (sssp_server_create(opt(ckpt), opt(vq_ckpt), opt(static_dir), &server) != SSSP_OK) return fail("serve");
    if (sssp_server_bind(server, host.c_str(), port) != SSSP_OK) {
      sssp_server_destroy(server);
      return fail("serve");
    }
    std::thread watcher([&] {
      int sig = 0;
      sigwait(&signals, &sig);
      sssp_server_stop(server);
    });
    std::cerr << "listening on http://" << host << ":" << sssp_server_port(server) << "\n";
    const sssp_status st = sssp_server_run(server);
    pthread_kill(watcher.native_handle(), SIGTERM);
    watcher.join();
    sssp_server_destroy(server);
    return st == SSSP_OK ? 0 : fail("serve");
  }
  if (*synth) {
    if (sssp_synth_dataset(out.c_str(), split.c_str(), count, seed, resolution) != SSSP_OK) return fail("synth");
    std::cerr << "wrote " << count << " samples to " << out << "\n";
    return 0;
  }
  return 0;
}
