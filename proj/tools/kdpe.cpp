// Copyright 2026 The KDPE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// kdpe: density-based trajectory selection from the command line.

#include <atomic>
#include <csignal>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "kdpe/bench.hpp"
#include "kdpe/config.hpp"
#include "kdpe/density.hpp"
#include "kdpe/generator.hpp"
#include "kdpe/heatmap.hpp"
#include "kdpe/http_facade.hpp"
#include "kdpe/population_json.hpp"
#include "kdpe/report.hpp"
#include "kdpe/server.hpp"

namespace {

using kdpe::Bandwidths;
using kdpe::Error;
using kdpe::ErrorKind;

constexpr int kExitDataError = 2;

struct BandwidthFlags {
  std::optional<double> sigma_pos;
  std::optional<double> sigma_rot;
  std::optional<double> sigma_grip;
  std::string config;

  void add_to(CLI::App* app) {
    app->add_option("--sigma-pos", sigma_pos, "Position bandwidth (default 0.05)");
    app->add_option("--sigma-rot", sigma_rot, "Rotation bandwidth, radians (default 0.25)");
    app->add_option("--sigma-grip", sigma_grip, "Gripper bandwidth (default 1.0)");
    app->add_option("--config", config, "JSON file with sigma_pos/sigma_rot/sigma_grip")
        ->check(CLI::ExistingFile);
  }

  Bandwidths<double> resolve() const {
    Bandwidths<double> h;
    if (!config.empty()) h = kdpe::load_bandwidth_config(config, h);
    h = kdpe::bandwidths_from_env(h);
    if (sigma_pos) h.sigma_pos = *sigma_pos;
    if (sigma_rot) h.sigma_rot = *sigma_rot;
    if (sigma_grip) h.sigma_grip = *sigma_grip;
    h.check();
    return h;
  }
};

std::string dump(const nlohmann::json& j, int indent = -1) {
  return j.dump(indent, ' ', false, nlohmann::json::error_handler_t::replace);
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorKind::kIoFailure, "cannot write " + output);
}

kdpe::Population load(const std::string& path) {
  if (path == "-") {
    std::string bytes{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    if (bytes.starts_with(kdpe::kMagic)) return kdpe::decode_population(bytes);
    return kdpe::population_from_json_text(bytes);
  }
  return kdpe::read_population_file(path);
}

std::pair<std::string, std::uint16_t> split_host_port(const std::string& s) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorKind::kInvalidArgument, "expected host:port");
  const int port = std::stoi(s.substr(colon + 1));
  if (port <= 0 || port > 65535) throw Error(ErrorKind::kInvalidArgument, "invalid port");
  return {s.substr(0, colon), static_cast<std::uint16_t>(port)};
}

std::string densities_csv(const std::vector<double>& log_densities,
                          std::optional<std::size_t> selected) {
  std::ostringstream out;
  out << "index,log_density" << (selected ? ",selected" : "") << '\n';
  for (std::size_t i = 0; i < log_densities.size(); ++i) {
    out << i << ',' << kdpe::format_scalar(log_densities[i]);
    if (selected) out << ',' << (i == *selected ? 1 : 0);
    out << '\n';
  }
  return out.str();
}

std::atomic<bool> g_stop{false};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel density based selection of policy trajectories"};
  app.require_subcommand(1);

  // select
  struct {
    std::string input;
    std::string method = "kdpe";
    int step = -1;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string server;
    BandwidthFlags bw;
  } sel;
  auto* select_cmd = app.add_subcommand("select", "Select one trajectory from a population");
  select_cmd->add_option("population", sel.input, "Population file (binary or JSON; - for stdin)")
      ->required();
  select_cmd->add_option("--method", sel.method, "kdpe, kdpe-ood, uniform or tr-kdpe")
      ->check(CLI::IsMember({"kdpe", "kdpe-ood", "uniform", "tr-kdpe"}));
  select_cmd->add_option("--step", sel.step, "Scored step (default: end of execution horizon)");
  select_cmd->add_option("--seed", sel.seed, "Seed for the uniform baseline");
  select_cmd->add_option("--format", sel.format)->check(CLI::IsMember({"json", "csv"}));
  select_cmd->add_option("--server", sel.server, "Send the request to a running server host:port");
  sel.bw.add_to(select_cmd);

  // score
  struct {
    std::string input;
    std::string method = "kdpe";
    int step = -1;
    std::string format = "json";
    BandwidthFlags bw;
  } sc;
  auto* score_cmd = app.add_subcommand("score", "Print per-trajectory log densities");
  score_cmd->add_option("population", sc.input)->required();
  score_cmd->add_option("--method", sc.method, "kdpe (per-step) or tr-kdpe (trajectory)")
      ->check(CLI::IsMember({"kdpe", "tr-kdpe"}));
  score_cmd->add_option("--step", sc.step);
  score_cmd->add_option("--format", sc.format)->check(CLI::IsMember({"json", "csv"}));
  sc.bw.add_to(score_cmd);

  // heatmap
  struct {
    std::string input;
    bool fig1 = false;
    kdpe::HeatmapRequest req;
    std::optional<int> resolution;
    std::optional<double> angle_deg;
    std::string plane = "xy";
    std::string format = "json";
    std::string output;
    BandwidthFlags bw;
  } hm;
  auto* heatmap_cmd = app.add_subcommand("heatmap", "Evaluate the KDE over a planar grid");
  heatmap_cmd->add_option("population", hm.input, "Population file");
  heatmap_cmd->add_flag("--fig1", hm.fig1, "Use the built-in six-action planar scene");
  heatmap_cmd->add_option("--x-min", hm.req.x_min);
  heatmap_cmd->add_option("--x-max", hm.req.x_max);
  heatmap_cmd->add_option("--y-min", hm.req.y_min);
  heatmap_cmd->add_option("--y-max", hm.req.y_max);
  heatmap_cmd->add_option("--resolution", hm.resolution, "Cells per axis (default 64)");
  heatmap_cmd->add_option("--resolution-x", hm.req.resolution_x);
  heatmap_cmd->add_option("--resolution-y", hm.req.resolution_y);
  heatmap_cmd->add_option("--probe-angle", hm.req.probe_angle, "In-plane probe angle, radians");
  heatmap_cmd->add_option("--probe-angle-deg", hm.angle_deg, "In-plane probe angle, degrees");
  heatmap_cmd->add_option("--probe-gripper", hm.req.probe_gripper);
  heatmap_cmd->add_option("--plane", hm.plane)->check(CLI::IsMember({"xy", "xz", "yz"}));
  heatmap_cmd->add_option("--plane-offset", hm.req.plane_offset);
  heatmap_cmd->add_option("--step", hm.req.step);
  heatmap_cmd->add_option("--format", hm.format)->check(CLI::IsMember({"json", "csv"}));
  heatmap_cmd->add_option("--output,-o", hm.output);
  hm.bw.add_to(heatmap_cmd);

  // bench
  struct {
    std::size_t n = 100;
    std::size_t t = 8;
    int repetitions = 200;
    std::uint64_t seed = 0;
    BandwidthFlags bw;
  } bn;
  auto* bench_cmd = app.add_subcommand("bench", "Measure scoring latency");
  bench_cmd->add_option("--n", bn.n)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--t", bn.t)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--repetitions", bn.repetitions)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bn.seed);
  bn.bw.add_to(bench_cmd);

  // serve
  kdpe::ServerConfig srv;
  int http_port = -1;
  auto* serve_cmd = app.add_subcommand("serve", "Run the selection server");
  serve_cmd->add_option("--address", srv.address);
  serve_cmd->add_option("--port", srv.port, "TCP port for length-prefixed frames (0: ephemeral)");
  serve_cmd->add_option("--http-port", http_port, "Also serve the JSON/HTTP facade on this port");
  serve_cmd->add_option("--max-frame-bytes", srv.max_frame_bytes);

  // generate
  struct {
    std::string spec;
    std::size_t n = 100;
    std::size_t t = 8;
    std::uint64_t seed = 0;
    std::string output;
    std::string precision = "f64";
    std::string format = "binary";
    std::string observation_id;
  } gen;
  auto* generate_cmd = app.add_subcommand("generate", "Sample a synthetic population");
  generate_cmd->add_option("--spec", gen.spec, "Mixture spec JSON")->required()->check(CLI::ExistingFile);
  generate_cmd->add_option("--n", gen.n)->check(CLI::PositiveNumber);
  generate_cmd->add_option("--t", gen.t)->check(CLI::PositiveNumber);
  generate_cmd->add_option("--seed", gen.seed);
  generate_cmd->add_option("--output,-o", gen.output)->required();
  generate_cmd->add_option("--precision", gen.precision)->check(CLI::IsMember({"f32", "f64"}));
  generate_cmd->add_option("--format", gen.format)->check(CLI::IsMember({"binary", "json"}));
  generate_cmd->add_option("--observation-id", gen.observation_id);

  // fig1
  struct {
    std::string output;
    std::string format = "json";
  } f1;
  auto* fig1_cmd = app.add_subcommand("fig1", "Write the six-action planar scene");
  fig1_cmd->add_option("--output,-o", f1.output);
  fig1_cmd->add_option("--format", f1.format)->check(CLI::IsMember({"binary", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (select_cmd->parsed()) {
      const Bandwidths<double> h = sel.bw.resolve();
      const kdpe::Population pop = load(sel.input);
      nlohmann::json report;
      if (!sel.server.empty()) {
        const auto [host, port] = split_host_port(sel.server);
        kdpe::SelectionClient client(host, port);
        report = client.select({1, *kdpe::parse_method(sel.method), sel.step, sel.seed, h, pop});
        if (report.contains("error")) {
          std::cerr << dump(report) << '\n';
          return kExitDataError;
        }
      } else {
        report = kdpe::run_selection(pop, *kdpe::parse_method(sel.method), sel.step, h, sel.seed);
      }
      if (sel.format == "csv") {
        emit(densities_csv(report.at("log_densities").get<std::vector<double>>(),
                           report.at("selected_index").get<std::size_t>()),
             "");
      } else {
        emit(dump(report), "");
      }
    } else if (score_cmd->parsed()) {
      const Bandwidths<double> h = sc.bw.resolve();
      const kdpe::Population pop = load(sc.input);
      std::vector<double> scores;
      int step = -1;
      if (sc.method == "tr-kdpe") {
        scores = kdpe::score_trajectories(pop, h);
      } else {
        step = sc.step < 0 ? kdpe::default_scored_step(pop) : sc.step;
        scores = kdpe::score_population(pop, step, h);
      }
      if (sc.format == "csv") {
        emit(densities_csv(scores, std::nullopt), "");
      } else {
        emit(dump({{"method", sc.method},
                   {"scored_step", step},
                   {"log_densities", scores},
                   {"bandwidths", kdpe::bandwidths_to_json(h)}}),
             "");
      }
    } else if (heatmap_cmd->parsed()) {
      if (hm.fig1 == !hm.input.empty()) {
        throw Error(ErrorKind::kInvalidArgument, "give either a population file or --fig1");
      }
      const kdpe::Population pop = hm.fig1 ? kdpe::fig1_population() : load(hm.input);
      hm.req.bandwidths = hm.bw.resolve();
      hm.req.plane = *kdpe::parse_plane(hm.plane);
      if (hm.resolution) hm.req.resolution_x = hm.req.resolution_y = *hm.resolution;
      if (hm.angle_deg) hm.req.probe_angle = *hm.angle_deg * std::numbers::pi / 180.0;
      const kdpe::HeatmapGrid grid = kdpe::compute_heatmap(pop, hm.req);
      emit(hm.format == "csv" ? kdpe::heatmap_to_csv(grid) : dump(kdpe::heatmap_to_json(grid)),
           hm.output);
    } else if (bench_cmd->parsed()) {
      const auto result = kdpe::run_bench(bn.n, bn.t, bn.repetitions, bn.seed, bn.bw.resolve());
      emit(dump(kdpe::bench_to_json(result), 2), "");
    } else if (serve_cmd->parsed()) {
      kdpe::SelectionServer server(srv);
      server.start();
      std::cerr << "kdpe: selection server on " << srv.address << ':' << server.port() << '\n';
      std::optional<kdpe::HttpFacade> http;
      std::thread http_thread;
      if (http_port >= 0) {
        http.emplace();
        const int bound = http->bind(srv.address, http_port);
        std::cerr << "kdpe: HTTP facade on " << srv.address << ':' << bound << '\n';
        http_thread = std::thread([&] { http->listen(); });
      }
      std::signal(SIGINT, [](int) { g_stop = true; });
      std::signal(SIGTERM, [](int) { g_stop = true; });
      while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      if (http) http->stop();
      if (http_thread.joinable()) http_thread.join();
      server.stop();
    } else if (generate_cmd->parsed()) {
      std::ifstream in(gen.spec);
      const nlohmann::json spec_json = nlohmann::json::parse(in, nullptr, false);
      if (spec_json.is_discarded()) throw Error(ErrorKind::kInvalidSpec, "spec is not valid JSON");
      const kdpe::Population sampled =
          kdpe::generate(kdpe::mixture_spec_from_json(spec_json), gen.n, gen.t, gen.seed);
      std::vector<kdpe::Trajectory> trajs(sampled.trajectories().begin(),
                                          sampled.trajectories().end());
      const kdpe::Population pop(
          std::move(trajs), gen.observation_id.empty() ? sampled.observation_id() : gen.observation_id,
          gen.precision == "f32" ? kdpe::Precision::kF32 : kdpe::Precision::kF64);
      if (gen.format == "json") {
        emit(dump(kdpe::population_to_json(pop)), gen.output);
      } else {
        kdpe::write_population_file(pop, gen.output);
      }
    } else if (fig1_cmd->parsed()) {
      const kdpe::Population pop = kdpe::fig1_population();
      if (f1.format == "binary") {
        if (f1.output.empty()) throw Error(ErrorKind::kInvalidArgument, "--output is required");
        kdpe::write_population_file(pop, f1.output);
      } else {
        emit(dump(kdpe::population_to_json(pop)), f1.output);
      }
    }
  } catch (const Error& e) {
    std::cerr << dump(kdpe::error_to_json(e.kind(), e.what())) << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    std::cerr << dump(kdpe::error_to_json(ErrorKind::kInvalidArgument, e.what())) << '\n';
    return kExitDataError;
  }
  return 0;
}
