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

// JSON mirror of the population file. Scalars are written as decimal
// strings with 17 significant digits, which round-trips doubles exactly;
// readers also accept plain JSON numbers.
//
//   {"format": "kdpe-population", "version": 1, "precision": "f64",
//    "observation_id": "...", "created_at_ms": 0, "n": N, "t": T, "d": 10,
//    "trajectories": [{"actions": [["x", ..., "gripper"], ...],
//                      "payload_hex": "..."}, ...]}

#include <string>
#include <string_view>

#include "json.hpp"
#include "kdpe/population.hpp"

namespace kdpe {

nlohmann::json population_to_json(const Population& pop);
/// Throws FormatError on schema violations, ValidationError on NaN/Inf.
Population population_from_json(const nlohmann::json& j);
Population population_from_json_text(std::string_view text);

std::string format_scalar(double v);
double parse_scalar(const nlohmann::json& v);
std::string hex_encode(std::string_view bytes);

}  // namespace kdpe
