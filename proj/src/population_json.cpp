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

#include "kdpe/population_json.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>

namespace kdpe {
namespace {

constexpr std::string_view kFormatName = "kdpe-population";

}  // namespace

std::string hex_encode(std::string_view bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (const char c : bytes) {
    const auto b = static_cast<unsigned char>(c);
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

namespace {

std::string from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(ErrorKind::kFormatError, "odd-length payload_hex");
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(hex.data() + i, hex.data() + i + 2, value, 16);
    if (ec != std::errc() || ptr != hex.data() + i + 2) {
      throw Error(ErrorKind::kFormatError, "invalid payload_hex");
    }
    out.push_back(static_cast<char>(value));
  }
  return out;
}

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::kFormatError, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

}  // namespace

std::string format_scalar(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_scalar(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw Error(ErrorKind::kFormatError, "scalar must be a string or number");
  const auto& s = v.get_ref<const std::string&>();
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorKind::kFormatError, "invalid scalar '" + s + "'");
  }
  return x;
}

nlohmann::json population_to_json(const Population& pop) {
  nlohmann::json trajectories = nlohmann::json::array();
  for (const auto& traj : pop.trajectories()) {
    nlohmann::json actions = nlohmann::json::array();
    const ActionRows& rows = traj.rows();
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index k = 0; k < kActionDim; ++k) row.push_back(format_scalar(rows(i, k)));
      actions.push_back(std::move(row));
    }
    trajectories.push_back({{"actions", std::move(actions)}, {"payload_hex", hex_encode(traj.payload())}});
  }
  return {
      {"format", kFormatName},
      {"version", kFormatVersion},
      {"precision", pop.precision() == Precision::kF32 ? "f32" : "f64"},
      {"observation_id", pop.observation_id()},
      {"created_at_ms", pop.created_at_ms()},
      {"n", pop.size()},
      {"t", pop.horizon()},
      {"d", kActionDim},
      {"trajectories", std::move(trajectories)},
  };
}

Population population_from_json(const nlohmann::json& j) {
  try {
    if (field(j, "format") != kFormatName) throw Error(ErrorKind::kFormatError, "bad format name");
    if (field(j, "version") != kFormatVersion) {
      throw Error(ErrorKind::kFormatError, "unsupported version");
    }
    const auto& precision_name = field(j, "precision").get_ref<const std::string&>();
    Precision precision;
    if (precision_name == "f64") {
      precision = Precision::kF64;
    } else if (precision_name == "f32") {
      precision = Precision::kF32;
    } else {
      throw Error(ErrorKind::kFormatError, "precision must be f32 or f64");
    }
    if (j.contains("d") && j.at("d") != kActionDim) {
      throw Error(ErrorKind::kFormatError, "action dimension must be 10");
    }

    const auto& trajs = field(j, "trajectories");
    if (!trajs.is_array() || trajs.empty()) {
      throw Error(ErrorKind::kFormatError, "trajectories must be a non-empty array");
    }
    std::vector<Trajectory> trajectories;
    trajectories.reserve(trajs.size());
    for (const auto& t : trajs) {
      const auto& actions = field(t, "actions");
      if (!actions.is_array() || actions.empty()) {
        throw Error(ErrorKind::kFormatError, "actions must be a non-empty array");
      }
      ActionRows rows(static_cast<Eigen::Index>(actions.size()), kActionDim);
      for (std::size_t i = 0; i < actions.size(); ++i) {
        const auto& row = actions[i];
        if (!row.is_array() || row.size() != kActionDim) {
          throw Error(ErrorKind::kFormatError, "each action must have 10 scalars");
        }
        for (std::size_t k = 0; k < kActionDim; ++k) {
          rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = parse_scalar(row[k]);
        }
      }
      std::string payload;
      if (t.contains("payload_hex")) payload = from_hex(t.at("payload_hex").get<std::string>());
      trajectories.push_back(Trajectory::from_rows(std::move(rows), std::move(payload)));
    }
    if (j.contains("n") && j.at("n") != trajectories.size()) {
      throw Error(ErrorKind::kFormatError, "declared n does not match trajectories");
    }
    if (j.contains("t") && j.at("t") != trajectories.front().size()) {
      throw Error(ErrorKind::kFormatError, "declared t does not match actions");
    }
    return Population(std::move(trajectories), j.value("observation_id", std::string{}),
                      precision, j.value("created_at_ms", std::int64_t{0}));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormatError, std::string("malformed population JSON: ") + e.what());
  }
}

Population population_from_json_text(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::kFormatError, "population is not valid JSON");
  return population_from_json(j);
}

}  // namespace kdpe
