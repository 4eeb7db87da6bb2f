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

#include "kdpe/http_facade.hpp"

#include "httplib.h"
#include "kdpe/config.hpp"
#include "kdpe/density.hpp"
#include "kdpe/generator.hpp"
#include "kdpe/population_json.hpp"
#include "kdpe/report.hpp"

namespace kdpe {
namespace {

Bandwidths<double> request_bandwidths(const nlohmann::json& body) {
  return body.contains("bandwidths") ? bandwidths_from_json(body.at("bandwidths"))
                                     : Bandwidths<double>{};
}

const nlohmann::json& population_field(const nlohmann::json& body) {
  if (!body.is_object() || !body.contains("population")) {
    throw Error(ErrorKind::kFormatError, "request needs a 'population' field");
  }
  return body.at("population");
}

void reply_json(httplib::Response& res, const nlohmann::json& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace),
                  "application/json");
}

template <typename Fn>
void guarded(const httplib::Request& req, httplib::Response& res, Fn fn) {
  try {
    const nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded()) throw Error(ErrorKind::kFormatError, "body is not valid JSON");
    reply_json(res, fn(body));
  } catch (const Error& e) {
    reply_json(res, error_to_json(e.kind(), e.what()), 400);
  } catch (const std::exception& e) {
    reply_json(res, error_to_json(ErrorKind::kInvalidArgument, e.what()), 400);
  }
}

}  // namespace

HeatmapRequest heatmap_request_from_json(const nlohmann::json& j) {
  HeatmapRequest r;
  try {
    r.x_min = j.value("x_min", r.x_min);
    r.x_max = j.value("x_max", r.x_max);
    r.y_min = j.value("y_min", r.y_min);
    r.y_max = j.value("y_max", r.y_max);
    r.resolution_x = j.value("resolution_x", r.resolution_x);
    r.resolution_y = j.value("resolution_y", r.resolution_y);
    r.probe_angle = j.value("probe_angle", r.probe_angle);
    r.probe_gripper = j.value("probe_gripper", r.probe_gripper);
    r.plane_offset = j.value("plane_offset", r.plane_offset);
    r.step = j.value("step", r.step);
    if (j.contains("plane")) {
      const auto plane = parse_plane(j.at("plane").get<std::string>());
      if (!plane) throw Error(ErrorKind::kInvalidArgument, "plane must be xy, xz or yz");
      r.plane = *plane;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, std::string("malformed heatmap request: ") + e.what());
  }
  r.bandwidths = request_bandwidths(j);
  r.validate();
  return r;
}

nlohmann::json http_select(const nlohmann::json& body) {
  const Population pop = population_from_json(population_field(body));
  const auto method = parse_method(body.value("method", std::string("kdpe")));
  if (!method) throw Error(ErrorKind::kInvalidArgument, "unknown method");
  return run_selection(pop, *method, body.value("step", -1), request_bandwidths(body),
                       body.value("seed", std::uint64_t{0}));
}

nlohmann::json http_heatmap(const nlohmann::json& body) {
  const Population pop = population_from_json(population_field(body));
  return heatmap_to_json(compute_heatmap(pop, heatmap_request_from_json(body)));
}

struct HttpFacade::Impl {
  httplib::Server server;
};

HttpFacade::HttpFacade() : impl_(std::make_unique<Impl>()) {
  auto& s = impl_->server;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Headers", "Content-Type"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  s.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  s.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    reply_json(res, {{"status", "ok"}});
  });
  s.Get("/fig1", [](const httplib::Request&, httplib::Response& res) {
    reply_json(res, population_to_json(fig1_population()));
  });
  s.Post("/select", [](const httplib::Request& req, httplib::Response& res) {
    guarded(req, res, http_select);
  });
  s.Post("/heatmap", [](const httplib::Request& req, httplib::Response& res) {
    guarded(req, res, http_heatmap);
  });
}

HttpFacade::~HttpFacade() { stop(); }

int HttpFacade::bind(const std::string& address, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(address)
                              : (impl_->server.bind_to_port(address, port) ? port : -1);
  if (bound < 0) {
    throw Error(ErrorKind::kIoFailure,
                "cannot bind HTTP facade to " + address + ":" + std::to_string(port));
  }
  return bound;
}

void HttpFacade::listen() { impl_->server.listen_after_bind(); }

void HttpFacade::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace kdpe
