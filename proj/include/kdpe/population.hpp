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

// Trajectory populations and their binary file format.
//
// Layout (little-endian):
//   "KDPE" | version u16 = 1 | flags u16 (bit 0: 1 = f32 scalars) |
//   N u32 | T u32 | D u32 = 10 | observation id: u16 length + UTF-8 bytes |
//   N*T*D scalars, trajectory-major then step-major; each action is
//   x y z | rotation col1 (3) | rotation col2 (3) | gripper |
//   N payloads: u32 length + bytes.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "kdpe/kernel.hpp"

namespace kdpe {

inline constexpr int kActionDim = 10;
inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::string_view kMagic = "KDPE";

using ActionRow = Eigen::Matrix<double, 1, kActionDim>;
using ActionRows = Eigen::Matrix<double, Eigen::Dynamic, kActionDim, Eigen::RowMajor>;

enum class Precision : std::uint8_t { kF64 = 0, kF32 = 1 };

/// Converts one raw 10-D policy row to an action (Gram-Schmidt on the 6D
/// part). Throws ValidationError on non-finite values, DegenerateRotation on
/// unusable rotation columns.
Action<double> action_from_row(const ActionRow& row);
ActionRow row_from_action(const Action<double>& a);

/// T actions in their raw 10-D form plus the derived actions. The raw rows
/// are what gets serialized, so a write/read cycle is bitwise lossless.
class Trajectory {
 public:
  static Trajectory from_rows(ActionRows rows, std::string payload = {});
  static Trajectory from_actions(std::span<const Action<double>> actions,
                                 std::string payload = {});

  std::size_t size() const { return actions_.size(); }
  const Action<double>& operator[](std::size_t step) const { return actions_[step]; }
  std::span<const Action<double>> actions() const { return actions_; }
  const ActionRows& rows() const { return rows_; }
  const std::string& payload() const { return payload_; }

  friend bool operator==(const Trajectory& a, const Trajectory& b) {
    return a.rows_ == b.rows_ && a.payload_ == b.payload_;
  }

 private:
  Trajectory() = default;

  ActionRows rows_;
  std::vector<Action<double>> actions_;
  std::string payload_;
};

/// N trajectories of equal length sampled for one observation.
class Population {
 public:
  /// Throws ValidationError for an empty population or ragged lengths. With
  /// kF32 precision, scalars are rounded to float so memory matches disk.
  explicit Population(std::vector<Trajectory> trajectories, std::string observation_id = {},
                      Precision precision = Precision::kF64, std::int64_t created_at_ms = 0);

  std::size_t size() const { return trajectories_.size(); }
  std::size_t horizon() const { return trajectories_.front().size(); }
  const Trajectory& operator[](std::size_t i) const { return trajectories_[i]; }
  std::span<const Trajectory> trajectories() const { return trajectories_; }
  const std::string& observation_id() const { return observation_id_; }
  Precision precision() const { return precision_; }
  /// Unix milliseconds. Metadata only: carried by the JSON mirror, not by
  /// the binary layout.
  std::int64_t created_at_ms() const { return created_at_ms_; }

  /// The action of every trajectory at `step`. Throws StepOutOfRange.
  std::vector<Action<double>> actions_at(std::size_t step) const;

  /// Same trajectories, observation id and precision; ignores created_at.
  friend bool operator==(const Population& a, const Population& b) {
    return a.precision_ == b.precision_ && a.observation_id_ == b.observation_id_ &&
           a.trajectories_ == b.trajectories_;
  }

 private:
  std::vector<Trajectory> trajectories_;
  std::string observation_id_;
  Precision precision_;
  std::int64_t created_at_ms_;
};

std::string encode_population(const Population& pop);

/// Parses one population from the front of `bytes`. `consumed`, when given,
/// receives the number of bytes used; otherwise trailing bytes are an error.
Population decode_population(std::string_view bytes, std::size_t* consumed = nullptr);

/// Returns the number of bytes written. Throws IoFailure.
std::size_t write_population(const Population& pop, std::ostream& sink);
Population read_population(std::istream& source);

std::size_t write_population_file(const Population& pop, const std::filesystem::path& path);
/// Reads either the binary format or the JSON mirror (detected by the magic).
Population read_population_file(const std::filesystem::path& path);

}  // namespace kdpe
