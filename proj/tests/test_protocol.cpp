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

#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "kdpe/http_facade.hpp"
#include "kdpe/population_json.hpp"
#include "kdpe/protocol.hpp"
#include "kdpe/report.hpp"
#include "kdpe/server.hpp"
#include "oracles.hpp"

// After Eigen: <resolv.h> defines a `_res` macro that clashes with Eigen.
#include "httplib.h"

namespace kdpe {
namespace {

using nlohmann::json;

SelectionRequest sample_request(std::uint64_t id, Method method = Method::kKdpe) {
  std::mt19937_64 rng(id);
  return SelectionRequest{id, method, -1, 7, Bandwidths<double>{},
                          testing::random_population(rng, 12, 4, Precision::kF64)};
}

json without_timing(json j) {
  j.erase("timing");
  return j;
}

TEST(Protocol, RequestRoundTrip) {
  SelectionRequest req = sample_request(42, Method::kTrKdpe);
  req.step = 2;
  req.seed = 0xDEADBEEFu;
  req.bandwidths = {0.1, 0.2, 0.3};
  const std::string frame = encode_request(req);
  const SelectionRequest back = decode_request(frame);
  EXPECT_EQ(back.request_id, 42u);
  EXPECT_EQ(back.method, Method::kTrKdpe);
  EXPECT_EQ(back.step, 2);
  EXPECT_EQ(back.seed, 0xDEADBEEFu);
  EXPECT_EQ(back.bandwidths, req.bandwidths);
  EXPECT_EQ(back.population, req.population);
  EXPECT_EQ(frame.substr(kRequestHeaderBytes), encode_population(req.population));
}

TEST(Protocol, HandleFrameMatchesRunSelection) {
  const SelectionRequest req = sample_request(3, Method::kKdpeOod);
  const json reply = json::parse(handle_frame(encode_request(req)));
  const json direct = run_selection(req.population, req.method, req.step, req.bandwidths,
                                    req.seed, req.request_id);
  EXPECT_EQ(without_timing(reply), without_timing(direct));
}

TEST(Protocol, ErrorsCarryKindAndId) {
  json reply = json::parse(handle_frame("abc"));
  EXPECT_EQ(reply["request_id"], 0);
  EXPECT_EQ(reply["error"]["kind"], "FormatError");

  std::string frame = encode_request(sample_request(9));
  frame[8] = 17;  // unknown method
  reply = json::parse(handle_frame(frame));
  EXPECT_EQ(reply["request_id"], 9);
  EXPECT_EQ(reply["error"]["kind"], "FormatError");

  SelectionRequest req = sample_request(10);
  req.step = 99;
  reply = json::parse(handle_frame(encode_request(req)));
  EXPECT_EQ(reply["request_id"], 10);
  EXPECT_EQ(reply["error"]["kind"], "StepOutOfRange");

  req.step = -1;
  req.bandwidths.sigma_rot = 0.0;
  reply = json::parse(handle_frame(encode_request(req)));
  EXPECT_EQ(reply["error"]["kind"], "InvalidArgument");

  frame = encode_request(sample_request(11));
  frame.resize(frame.size() - 3);
  reply = json::parse(handle_frame(frame));
  EXPECT_EQ(reply["error"]["kind"], "FormatError");
}

TEST(Protocol, FuzzedFramesNeverEscape) {
  std::mt19937_64 rng(2024);
  const std::string valid = encode_request(sample_request(5));
  for (int i = 0; i < 300; ++i) {
    std::string frame = valid;
    if (i % 3 == 0) {
      frame.resize(rng() % (valid.size() + 1));
    } else {
      for (int k = 0; k < 1 + i % 8; ++k) frame[rng() % frame.size()] = static_cast<char>(rng());
    }
    const json reply = json::parse(handle_frame(frame));
    EXPECT_TRUE(reply.contains("error") || reply.contains("selected_index"));
  }
}

class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ServerConfig config;
    config.max_frame_bytes = 1 << 16;
    server_ = std::make_unique<SelectionServer>(config);
    server_->start();
  }
  void TearDown() override { server_->stop(); }

  std::unique_ptr<SelectionServer> server_;
};

TEST_F(ServerTest, SelectOverTcp) {
  SelectionClient client("127.0.0.1", server_->port());
  for (const Method m : {Method::kKdpe, Method::kKdpeOod, Method::kUniform, Method::kTrKdpe}) {
    const SelectionRequest req = sample_request(100 + static_cast<int>(m), m);
    const json reply = client.select(req);
    EXPECT_EQ(without_timing(reply),
              without_timing(run_selection(req.population, m, -1, req.bandwidths, req.seed,
                                           req.request_id)));
  }
}

TEST_F(ServerTest, ConcurrentClientsKeepTheirIds) {
  constexpr int kClients = 4;
  std::vector<std::thread> threads;
  std::atomic<int> mismatches{0};
  for (int c = 0; c < kClients; ++c) {
    threads.emplace_back([&, c] {
      SelectionClient client("127.0.0.1", server_->port());
      for (int i = 0; i < 10; ++i) {
        const std::uint64_t id = c * 1000 + i;
        if (client.select(sample_request(id))["request_id"] != id) ++mismatches;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(mismatches, 0);
}

TEST_F(ServerTest, GarbageGetsAnErrorReplyAndConnectionSurvives) {
  SelectionClient client("127.0.0.1", server_->port());
  const json bad = json::parse(client.request("not a frame"));
  EXPECT_EQ(bad["error"]["kind"], "FormatError");
  EXPECT_EQ(client.select(sample_request(77))["request_id"], 77);
}

TEST_F(ServerTest, OversizedFrameIsRejectedAndClosed) {
  SelectionClient client("127.0.0.1", server_->port());
  client.send_raw(std::string("\xff\xff\xff\x7f", 4));
  const auto reply = client.read_frame();
  ASSERT_TRUE(reply);
  EXPECT_EQ(json::parse(*reply)["error"]["kind"], "FormatError");
  EXPECT_FALSE(client.read_frame());

  SelectionClient again("127.0.0.1", server_->port());
  EXPECT_EQ(again.select(sample_request(8))["request_id"], 8);
}

TEST_F(ServerTest, ClientDisconnectMidFrame) {
  {
    SelectionClient client("127.0.0.1", server_->port());
    client.send_raw(std::string("\x10\x00\x00\x00" "abc", 7));
  }
  SelectionClient client("127.0.0.1", server_->port());
  EXPECT_EQ(client.select(sample_request(12))["request_id"], 12);
}

TEST(Http, SelectAndHeatmapBodies) {
  const Population pop = fig1_population();
  const json pj = population_to_json(pop);
  json reply = http_select({{"population", pj}, {"method", "kdpe-ood"}});
  EXPECT_EQ(without_timing(reply),
            without_timing(run_selection(pop, Method::kKdpeOod, -1, {}, 0)));

  reply = http_heatmap({{"population", pj}, {"resolution_x", 8}, {"resolution_y", 6},
                        {"probe_gripper", -1.0}});
  EXPECT_EQ(reply["log_densities"].size(), 6u);
  EXPECT_EQ(reply["log_densities"][0].size(), 8u);

  EXPECT_THROW(http_select({{"method", "kdpe"}}), Error);
  EXPECT_THROW(http_select({{"population", pj}, {"method", "bogus"}}), Error);
  EXPECT_THROW(http_heatmap({{"population", pj}, {"plane", "uv"}}), Error);
}

TEST(Http, LiveFacade) {
  HttpFacade facade;
  const int port = facade.bind("127.0.0.1", 0);
  std::thread runner([&] { facade.listen(); });
  httplib::Client cli("127.0.0.1", port);

  auto res = cli.Get("/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["status"], "ok");

  res = cli.Get("/fig1");
  ASSERT_TRUE(res);
  const Population pop = population_from_json_text(res->body);
  EXPECT_EQ(pop, fig1_population());

  res = cli.Post("/select", json{{"population", json::parse(res->body)}}.dump(),
                 "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["method"], "kdpe");
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");

  res = cli.Post("/select", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(json::parse(res->body)["error"]["kind"], "FormatError");

  facade.stop();
  runner.join();
}

}  // namespace
}  // namespace kdpe
