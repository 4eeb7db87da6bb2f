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

#include "kdpe/protocol.hpp"

#include <bit>
#include <exception>

#include "byte_io.hpp"
#include "kdpe/report.hpp"

namespace kdpe {

using detail::put_le;
using detail::Reader;

std::string encode_request(const SelectionRequest& req) {
  std::string out;
  put_le<std::uint64_t>(out, req.request_id);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(req.method));
  put_le<std::uint8_t>(out, 0);
  put_le<std::uint16_t>(out, 0);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(req.step));
  put_le<std::uint64_t>(out, req.seed);
  put_le(out, std::bit_cast<std::uint64_t>(req.bandwidths.sigma_pos));
  put_le(out, std::bit_cast<std::uint64_t>(req.bandwidths.sigma_rot));
  put_le(out, std::bit_cast<std::uint64_t>(req.bandwidths.sigma_grip));
  out += encode_population(req.population);
  return out;
}

SelectionRequest decode_request(std::string_view frame) {
  if (frame.size() < kRequestHeaderBytes) {
    throw Error(ErrorKind::kFormatError, "request frame is shorter than its header");
  }
  Reader in(frame);
  const auto id = in.get<std::uint64_t>();
  const auto method_code = in.get<std::uint8_t>();
  if (method_code > static_cast<std::uint8_t>(Method::kTrKdpe)) {
    throw Error(ErrorKind::kFormatError, "unknown method code " + std::to_string(method_code));
  }
  if (in.get<std::uint8_t>() != 0 || in.get<std::uint16_t>() != 0) {
    throw Error(ErrorKind::kFormatError, "reserved request bytes must be zero");
  }
  const auto step = static_cast<std::int32_t>(in.get<std::uint32_t>());
  const auto seed = in.get<std::uint64_t>();
  Bandwidths<double> h;
  h.sigma_pos = std::bit_cast<double>(in.get<std::uint64_t>());
  h.sigma_rot = std::bit_cast<double>(in.get<std::uint64_t>());
  h.sigma_grip = std::bit_cast<double>(in.get<std::uint64_t>());
  h.check();
  return SelectionRequest{id, static_cast<Method>(method_code), step, seed, h,
                          decode_population(frame.substr(in.position()))};
}

std::string handle_frame(std::string_view frame) {
  std::uint64_t id = 0;
  if (frame.size() >= 8) id = Reader(frame).get<std::uint64_t>();
  try {
    const SelectionRequest req = decode_request(frame);
    return run_selection(req.population, req.method, req.step, req.bandwidths, req.seed,
                         req.request_id)
        .dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  } catch (const Error& e) {
    return error_to_json(e.kind(), e.what(), id)
        .dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  } catch (const std::exception& e) {
    return error_to_json(ErrorKind::kInvalidArgument, e.what(), id)
        .dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  }
}

std::string length_prefixed(std::string_view body) {
  std::string out;
  out.reserve(4 + body.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(body.size()));
  out.append(body);
  return out;
}

}  // namespace kdpe
