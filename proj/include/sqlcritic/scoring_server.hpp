//
// Copyright 2026 The sqlcritic Authors
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
//


#pragma once

#include <memory>
#include <string>
#include <thread>

#include <json.hpp>

#include "sqlcritic/reward_service.hpp"

namespace httplib {
class Server;
}

namespace sqlcritic {

struct HttpReply {
  int status = 200;
  std::string body;
};

// Transport-free handlers, shared by the server and the tests.
HttpReply handle_score(Scorer& scorer, const std::string& body);
HttpReply handle_advantages(const Scorer& scorer, const std::string& body);
nlohmann::json health_json(const ServiceConfig& cfg);

// Serves POST /v1/score, POST /v1/advantages and GET /health.
class ScoringServer {
 public:
  explicit ScoringServer(Scorer& scorer);
  ~ScoringServer();
  ScoringServer(const ScoringServer&) = delete;
  ScoringServer& operator=(const ScoringServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Error(kConfig)
  // when binding fails.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  void run();
  // run() on a background thread.
  void start();
  void stop();
  int port() const { return port_; }

 private:
  Scorer& scorer_;
  std::unique_ptr<httplib::Server> server_;
  std::thread worker_;
  int port_ = -1;
};

}  // namespace sqlcritic
