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

// Bandwidth configuration. Resolution order, later wins:
//   built-in defaults (0.05, 0.25, 1.0) -> config file -> environment
//   (KDPE_SIGMA_POS, KDPE_SIGMA_ROT, KDPE_SIGMA_GRIP) -> command-line flags.
//
// Config file schema: {"sigma_pos": 0.05, "sigma_rot": 0.25, "sigma_grip": 1.0}
// (keys optional; may also be nested under "bandwidths").

#include <filesystem>

#include "json.hpp"
#include "kdpe/kernel.hpp"

namespace kdpe {

nlohmann::json bandwidths_to_json(const Bandwidths<double>& h);
/// Overrides the fields present in `j`. Throws InvalidArgument.
Bandwidths<double> bandwidths_from_json(const nlohmann::json& j, Bandwidths<double> base = {});
Bandwidths<double> bandwidths_from_env(Bandwidths<double> base = {});
Bandwidths<double> load_bandwidth_config(const std::filesystem::path& path,
                                         Bandwidths<double> base = {});

}  // namespace kdpe
