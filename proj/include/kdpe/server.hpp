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

// Length-prefixed TCP selection server and a matching blocking client.
// Each connection is served on its own thread; frames within a connection
// are handled in order.

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>

#include "json.hpp"
#include "kdpe/protocol.hpp"

namespace kdpe {

struct ServerConfig {
  std::string address = "127.0.0.1";
  /// 0 picks an ephemeral port; see SelectionServer::port().
  std::uint16_t port = 0;
  std::size_t max_frame_bytes = kDefaultMaxFrameBytes;
};

class SelectionServer {
 public:
  /// Binds and listens immediately. Throws IoFailure.
  explicit SelectionServer(ServerConfig config);
  ~SelectionServer();

  SelectionServer(const SelectionServer&) = delete;
  SelectionServer& operator=(const SelectionServer&) = delete;

  std::uint16_t port() const { return port_; }

  /// Starts the accept loop on a background thread.
  void start();
  /// Closes the listener and every open connection, then waits for the
  /// connection threads to finish. Idempotent.
  void stop();
  /// Blocks until stop() has been called.
  void wait();

 private:
  void accept_loop();
  void serve_connection(int fd);

  ServerConfig config_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::thread acceptor_;
  std::atomic<bool> stopping_{false};

  std::mutex mu_;
  std::condition_variable cv_;
  std::set<int> connections_;
  int active_ = 0;
  bool stopped_ = false;
};

class SelectionClient {
 public:
  /// Throws IoFailure if the connection cannot be established.
  SelectionClient(const std::string& host, std::uint16_t port);
  ~SelectionClient();

  SelectionClient(SelectionClient&& other) noexcept;
  SelectionClient& operator=(SelectionClient&& other) noexcept;
  SelectionClient(const SelectionClient&) = delete;
  SelectionClient& operator=(const SelectionClient&) = delete;

  /// Sends `body` with its length prefix.
  void send_frame(std::string_view body);
  /// Sends bytes verbatim.
  void send_raw(std::string_view bytes);
  /// Next reply body, or nullopt once the server has closed the connection.
  std::optional<std::string> read_frame();

  /// send_frame + read_frame; throws IoFailure on a closed connection.
  std::string request(std::string_view body);
  nlohmann::json select(const SelectionRequest& req);

  void close();

 private:
  int fd_ = -1;
};

}  // namespace kdpe
