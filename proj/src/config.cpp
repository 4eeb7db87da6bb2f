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

#include "kdpe/config.hpp"

#include <cstdlib>
#include <fstream>
#include <string>

namespace kdpe {
namespace {

void override_from(const nlohmann::json& j, const char* key, double& field) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (v.is_number()) {
    field = v.get<double>();
  } else if (v.is_string()) {
    try {
      field = std::stod(v.get<std::string>());
    } catch (const std::exception&) {
      throw Error(ErrorKind::kInvalidArgument, std::string("invalid value for ") + key);
    }
  } else {
    throw Error(ErrorKind::kInvalidArgument, std::string(key) + " must be a number");
  }
}

void override_from_env(const char* name, double& field) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return;
  char* end = nullptr;
  const double v = std::strtod(value, &end);
  if (*end != '\0') throw Error(ErrorKind::kInvalidArgument, std::string("invalid ") + name);
  field = v;
}

}  // namespace

nlohmann::json bandwidths_to_json(const Bandwidths<double>& h) {
  return {{"sigma_pos", h.sigma_pos}, {"sigma_rot", h.sigma_rot}, {"sigma_grip", h.sigma_grip}};
}

Bandwidths<double> bandwidths_from_json(const nlohmann::json& j, Bandwidths<double> base) {
  if (!j.is_object()) throw Error(ErrorKind::kInvalidArgument, "bandwidths must be an object");
  const nlohmann::json& src = j.contains("bandwidths") ? j.at("bandwidths") : j;
  if (!src.is_object()) throw Error(ErrorKind::kInvalidArgument, "bandwidths must be an object");
  override_from(src, "sigma_pos", base.sigma_pos);
  override_from(src, "sigma_rot", base.sigma_rot);
  override_from(src, "sigma_grip", base.sigma_grip);
  base.check();
  return base;
}

Bandwidths<double> bandwidths_from_env(Bandwidths<double> base) {
  override_from_env("KDPE_SIGMA_POS", base.sigma_pos);
  override_from_env("KDPE_SIGMA_ROT", base.sigma_rot);
  override_from_env("KDPE_SIGMA_GRIP", base.sigma_grip);
  base.check();
  return base;
}

Bandwidths<double> load_bandwidth_config(const std::filesystem::path& path,
                                         Bandwidths<double> base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoFailure, "cannot open config " + path.string());
  const nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::kInvalidArgument, "config is not valid JSON");
  return bandwidths_from_json(j, base);
}

}  // namespace kdpe
