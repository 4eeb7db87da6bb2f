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

// Selection server wire protocol.
//
// Every message on the socket is a u32 little-endian byte length followed by
// that many bytes. Request frame body (little-endian):
//   request_id u64 | method u8 (0 kdpe, 1 kdpe-ood, 2 uniform, 3 tr-kdpe) |
//   reserved u8 = 0 | reserved u16 = 0 | step i32 (-1: default) |
//   seed u64 | sigma_pos f64 | sigma_rot f64 | sigma_grip f64 |
//   population in the file layout, running to the end of the frame.
// Reply frame body: UTF-8 JSON, either a density report or
//   {"request_id": id, "error": {"kind": ..., "message": ...}}
// where id is 0 when the request id itself could not be read.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "kdpe/density.hpp"

namespace kdpe {

inline constexpr std::size_t kRequestHeaderBytes = 48;
inline constexpr std::size_t kDefaultMaxFrameBytes = 64u << 20;

struct SelectionRequest {
  std::uint64_t request_id = 0;
  Method method = Method::kKdpe;
  std::int32_t step = -1;
  std::uint64_t seed = 0;
  Bandwidths<double> bandwidths;
  Population population;
};

std::string encode_request(const SelectionRequest& req);
/// Throws FormatError (or the population's validation errors).
SelectionRequest decode_request(std::string_view frame);

/// Decodes, selects and serializes the reply body. Never throws.
std::string handle_frame(std::string_view frame);

/// Prepends the u32 length.
std::string length_prefixed(std::string_view body);

}  // namespace kdpe
