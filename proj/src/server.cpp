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

#include "kdpe/server.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "kdpe/report.hpp"

namespace kdpe {
namespace {

std::string errno_message(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

bool write_all(int fd, std::string_view bytes) {
  while (!bytes.empty()) {
    const ssize_t n = ::send(fd, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

// False on EOF or error before `len` bytes arrived.
bool read_exact(int fd, char* out, std::size_t len) {
  while (len > 0) {
    const ssize_t n = ::recv(fd, out, len, 0);
    if (n == 0) return false;
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    out += n;
    len -= static_cast<std::size_t>(n);
  }
  return true;
}

std::optional<std::uint32_t> read_length(int fd) {
  unsigned char b[4];
  if (!read_exact(fd, reinterpret_cast<char*>(b), 4)) return std::nullopt;
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

}  // namespace

SelectionServer::SelectionServer(ServerConfig config) : config_(std::move(config)) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE | AI_NUMERICSERV;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(config_.port);
  if (const int rc = ::getaddrinfo(config_.address.c_str(), port.c_str(), &hints, &res); rc != 0) {
    throw Error(ErrorKind::kIoFailure, "cannot resolve " + config_.address + ": " +
                                           ::gai_strerror(rc));
  }
  std::string last_error = "no usable address";
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, SOMAXCONN) == 0) {
      listen_fd_ = fd;
      break;
    }
    last_error = errno_message("bind/listen");
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (listen_fd_ < 0) throw Error(ErrorKind::kIoFailure, last_error);

  sockaddr_storage bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = bound.ss_family == AF_INET6
              ? ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port)
              : ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
}

SelectionServer::~SelectionServer() {
  stop();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void SelectionServer::start() {
  acceptor_ = std::thread([this] { accept_loop(); });
}

void SelectionServer::stop() {
  if (stopping_.exchange(true)) {
    if (acceptor_.joinable()) acceptor_.join();
    return;
  }
  ::shutdown(listen_fd_, SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  std::unique_lock lock(mu_);
  for (const int fd : connections_) ::shutdown(fd, SHUT_RDWR);
  cv_.wait(lock, [this] { return active_ == 0; });
  stopped_ = true;
  cv_.notify_all();
}

void SelectionServer::wait() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return stopped_; });
}

void SelectionServer::accept_loop() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR || errno == ECONNABORTED) continue;
      break;
    }
    set_nodelay(fd);
    std::lock_guard lock(mu_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    connections_.insert(fd);
    ++active_;
    std::thread([this, fd] { serve_connection(fd); }).detach();
  }
}

void SelectionServer::serve_connection(int fd) {
  std::string frame;
  while (true) {
    const auto len = read_length(fd);
    if (!len) break;
    if (*len > config_.max_frame_bytes) {
      const std::string reply =
          error_to_json(ErrorKind::kFormatError,
                        "frame of " + std::to_string(*len) + " bytes exceeds the limit of " +
                            std::to_string(config_.max_frame_bytes),
                        0)
              .dump();
      write_all(fd, length_prefixed(reply));
      break;
    }
    frame.resize(*len);
    if (!read_exact(fd, frame.data(), frame.size())) break;
    if (!write_all(fd, length_prefixed(handle_frame(frame)))) break;
  }
  std::lock_guard lock(mu_);
  connections_.erase(fd);
  ::close(fd);
  --active_;
  cv_.notify_all();
}

SelectionClient::SelectionClient(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_NUMERICSERV;
  addrinfo* res = nullptr;
  const std::string port_str = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), port_str.c_str(), &hints, &res); rc != 0) {
    throw Error(ErrorKind::kIoFailure, "cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      fd_ = fd;
      break;
    }
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) {
    throw Error(ErrorKind::kIoFailure, "cannot connect to " + host + ":" + port_str);
  }
  set_nodelay(fd_);
}

SelectionClient::~SelectionClient() { close(); }

SelectionClient::SelectionClient(SelectionClient&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)) {}

SelectionClient& SelectionClient::operator=(SelectionClient&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

void SelectionClient::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void SelectionClient::send_frame(std::string_view body) { send_raw(length_prefixed(body)); }

void SelectionClient::send_raw(std::string_view bytes) {
  if (fd_ < 0 || !write_all(fd_, bytes)) {
    throw Error(ErrorKind::kIoFailure, "failed to send to selection server");
  }
}

std::optional<std::string> SelectionClient::read_frame() {
  if (fd_ < 0) return std::nullopt;
  const auto len = read_length(fd_);
  if (!len) return std::nullopt;
  std::string body(*len, '\0');
  if (!read_exact(fd_, body.data(), body.size())) return std::nullopt;
  return body;
}

std::string SelectionClient::request(std::string_view body) {
  send_frame(body);
  auto reply = read_frame();
  if (!reply) throw Error(ErrorKind::kIoFailure, "selection server closed the connection");
  return *std::move(reply);
}

nlohmann::json SelectionClient::select(const SelectionRequest& req) {
  return nlohmann::json::parse(request(encode_request(req)));
}

}  // namespace kdpe
