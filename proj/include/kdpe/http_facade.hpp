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

#pragma once

// JSON-over-HTTP front end for browser clients. Populations travel as the
// JSON mirror; replies use the same report/heatmap JSON as the CLI.
//
//   GET  /health   -> {"status": "ok"}
//   GET  /fig1     -> fig1 population (JSON mirror)
//   POST /select   {"population", "method", "step", "seed", "bandwidths"}
//   POST /heatmap  {"population", "x_min", "x_max", "y_min", "y_max",
//                   "resolution_x", "resolution_y", "probe_angle",
//                   "probe_gripper", "plane", "plane_offset", "step",
//                   "bandwidths"}
//
// Errors come back as HTTP 400 with {"error": {"kind", "message"}}.

#include <cstdint>
#include <memory>
#include <string>

#include "json.hpp"
#include "kdpe/heatmap.hpp"

namespace kdpe {

/// Missing fields keep the HeatmapRequest defaults.
HeatmapRequest heatmap_request_from_json(const nlohmann::json& j);

nlohmann::json http_select(const nlohmann::json& body);
nlohmann::json http_heatmap(const nlohmann::json& body);

class HttpFacade {
 public:
  HttpFacade();
  ~HttpFacade();

  /// Binds `address`:`port` (0 = ephemeral) and returns the bound port.
  /// Throws IoFailure.
  int bind(const std::string& address, int port);
  /// Serves until stop(); blocking.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace kdpe
