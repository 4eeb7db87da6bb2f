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

#include "kdpe/population.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>

#include "byte_io.hpp"
#include "kdpe/population_json.hpp"

namespace kdpe {
namespace {

using detail::put_le;
using detail::Reader;

constexpr std::uint16_t kFlagF32 = 0x1;
constexpr std::size_t kHeaderBytes = 4 + 2 + 2 + 4 + 4 + 4 + 2;

ActionRows round_to_float(ActionRows rows) {
  return rows.unaryExpr([](double v) { return static_cast<double>(static_cast<float>(v)); });
}

}  // namespace

Action<double> action_from_row(const ActionRow& row) {
  if (!row.allFinite()) {
    throw Error(ErrorKind::kValidationError, "action contains NaN or Inf");
  }
  Action<double> a;
  a.position = row.segment<3>(0).transpose();
  a.rotation = so3::from6d<double>(row.segment<6>(3).transpose());
  a.gripper = row(9);
  return a;
}

ActionRow row_from_action(const Action<double>& a) {
  ActionRow row;
  row << a.position.transpose(), so3::to6d(a.rotation).transpose(), a.gripper;
  return row;
}

Trajectory Trajectory::from_rows(ActionRows rows, std::string payload) {
  if (rows.rows() < 1) throw Error(ErrorKind::kValidationError, "trajectory has no actions");
  Trajectory t;
  t.actions_.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) t.actions_.push_back(action_from_row(rows.row(i)));
  t.rows_ = std::move(rows);
  t.payload_ = std::move(payload);
  return t;
}

Trajectory Trajectory::from_actions(std::span<const Action<double>> actions, std::string payload) {
  ActionRows rows(static_cast<Eigen::Index>(actions.size()), kActionDim);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (!actions[i].valid()) throw Error(ErrorKind::kValidationError, "invalid action");
    rows.row(static_cast<Eigen::Index>(i)) = row_from_action(actions[i]);
  }
  return from_rows(std::move(rows), std::move(payload));
}

Population::Population(std::vector<Trajectory> trajectories, std::string observation_id,
                       Precision precision, std::int64_t created_at_ms)
    : trajectories_(std::move(trajectories)),
      observation_id_(std::move(observation_id)),
      precision_(precision),
      created_at_ms_(created_at_ms) {
  if (trajectories_.empty()) throw Error(ErrorKind::kValidationError, "population is empty");
  const std::size_t t = trajectories_.front().size();
  for (const auto& traj : trajectories_) {
    if (traj.size() != t) {
      throw Error(ErrorKind::kValidationError, "trajectories have different lengths");
    }
  }
  if (observation_id_.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorKind::kValidationError, "observation id is too long");
  }
  if (precision_ == Precision::kF32) {
    for (auto& traj : trajectories_) {
      ActionRows rounded = round_to_float(traj.rows());
      if (rounded != traj.rows()) traj = Trajectory::from_rows(std::move(rounded), traj.payload());
    }
  }
}

std::vector<Action<double>> Population::actions_at(std::size_t step) const {
  if (step >= horizon()) {
    throw Error(ErrorKind::kStepOutOfRange, "step " + std::to_string(step) +
                                                " is outside the horizon " +
                                                std::to_string(horizon()));
  }
  std::vector<Action<double>> out;
  out.reserve(size());
  for (const auto& traj : trajectories_) out.push_back(traj[step]);
  return out;
}

std::string encode_population(const Population& pop) {
  const bool f32 = pop.precision() == Precision::kF32;
  const std::size_t n = pop.size();
  const std::size_t t = pop.horizon();
  std::string out;
  out.reserve(kHeaderBytes + pop.observation_id().size() + n * t * kActionDim * (f32 ? 4 : 8));
  out.append(kMagic);
  put_le<std::uint16_t>(out, kFormatVersion);
  put_le<std::uint16_t>(out, f32 ? kFlagF32 : 0);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t));
  put_le<std::uint32_t>(out, kActionDim);
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(pop.observation_id().size()));
  out.append(pop.observation_id());
  for (const auto& traj : pop.trajectories()) {
    const ActionRows& rows = traj.rows();
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      for (Eigen::Index j = 0; j < kActionDim; ++j) {
        if (f32) {
          put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(rows(i, j))));
        } else {
          put_le(out, std::bit_cast<std::uint64_t>(rows(i, j)));
        }
      }
    }
  }
  for (const auto& traj : pop.trajectories()) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(traj.payload().size()));
    out.append(traj.payload());
  }
  return out;
}

Population decode_population(std::string_view bytes, std::size_t* consumed) {
  Reader in(bytes);
  if (in.take(4) != kMagic) throw Error(ErrorKind::kFormatError, "bad magic");
  const auto version = in.get<std::uint16_t>();
  if (version != kFormatVersion) {
    throw Error(ErrorKind::kFormatError, "unsupported version " + std::to_string(version));
  }
  const auto flags = in.get<std::uint16_t>();
  if ((flags & ~kFlagF32) != 0) throw Error(ErrorKind::kFormatError, "unknown flag bits");
  const bool f32 = (flags & kFlagF32) != 0;
  const std::uint64_t n = in.get<std::uint32_t>();
  const std::uint64_t t = in.get<std::uint32_t>();
  const auto d = in.get<std::uint32_t>();
  if (d != kActionDim) throw Error(ErrorKind::kFormatError, "action dimension must be 10");
  if (n == 0 || t == 0) throw Error(ErrorKind::kFormatError, "N and T must be positive");
  std::string observation_id(in.take(in.get<std::uint16_t>()));

  const std::uint64_t scalar_bytes = f32 ? 4 : 8;
  // Payload length prefixes need at least 4 bytes each beyond the scalars.
  const std::uint64_t per_trajectory = t * kActionDim * scalar_bytes + 4;
  if (per_trajectory > in.remaining() / n) {
    throw Error(ErrorKind::kFormatError, "population data is truncated");
  }

  std::vector<ActionRows> rows(n, ActionRows(static_cast<Eigen::Index>(t), kActionDim));
  for (auto& r : rows) {
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      for (Eigen::Index j = 0; j < kActionDim; ++j) {
        r(i, j) = f32 ? static_cast<double>(std::bit_cast<float>(in.get<std::uint32_t>()))
                      : std::bit_cast<double>(in.get<std::uint64_t>());
      }
    }
  }
  std::vector<Trajectory> trajectories;
  trajectories.reserve(n);
  for (auto& r : rows) {
    std::string payload(in.take(in.get<std::uint32_t>()));
    trajectories.push_back(Trajectory::from_rows(std::move(r), std::move(payload)));
  }
  if (consumed != nullptr) {
    *consumed = in.position();
  } else if (in.remaining() != 0) {
    throw Error(ErrorKind::kFormatError, "trailing bytes after population");
  }
  return Population(std::move(trajectories), std::move(observation_id),
                    f32 ? Precision::kF32 : Precision::kF64);
}

std::size_t write_population(const Population& pop, std::ostream& sink) {
  const std::string bytes = encode_population(pop);
  sink.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  sink.flush();
  if (!sink) throw Error(ErrorKind::kIoFailure, "failed to write population");
  return bytes.size();
}

Population read_population(std::istream& source) {
  std::string bytes{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  if (source.bad()) throw Error(ErrorKind::kIoFailure, "failed to read population");
  return decode_population(bytes);
}

std::size_t write_population_file(const Population& pop, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string() + " for writing");
  return write_population(pop, out);
}

Population read_population_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string());
  std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw Error(ErrorKind::kIoFailure, "failed to read " + path.string());
  if (bytes.starts_with(kMagic)) return decode_population(bytes);
  const auto first = bytes.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && bytes[first] == '{') return population_from_json_text(bytes);
  throw Error(ErrorKind::kFormatError, "bad magic");
}

}  // namespace kdpe
