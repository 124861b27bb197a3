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


#include "sqlcritic/scoring_server.hpp"

#include <httplib.h>

#include "sqlcritic/error.hpp"

#ifndef SQLCRITIC_VERSION
#define SQLCRITIC_VERSION "dev"
#endif

namespace sqlcritic {
namespace {

using nlohmann::json;

HttpReply error_reply(int status, const std::string& message) {
  return HttpReply{status, json{{"error", {{"status", status}, {"message", message}}}}.dump()};
}

}  // namespace

HttpReply handle_score(Scorer& scorer, const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    return error_reply(400, std::string("malformed JSON: ") + e.what());
  }
  try {
    const ScoreRequest req = parse_score_request(doc, scorer.config());
    return HttpReply{200, response_to_json(scorer.score(req)).dump()};
  } catch (const RequestError& e) {
    return error_reply(400, e.what());
  } catch (const std::exception& e) {
    return error_reply(500, e.what());
  }
}

HttpReply handle_advantages(const Scorer& scorer, const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    return error_reply(400, std::string("malformed JSON: ") + e.what());
  }
  try {
    return HttpReply{200, advantages_endpoint(doc, scorer.config().grpo).dump()};
  } catch (const RequestError& e) {
    return error_reply(400, e.what());
  } catch (const Error& e) {
    return error_reply(400, e.what());
  }
}

json health_json(const ServiceConfig& cfg) {
  return json{{"status", "ok"},
              {"version", SQLCRITIC_VERSION},
              {"config_fingerprint", cfg.fingerprint()},
              {"max_batch", cfg.max_batch}};
}

ScoringServer::ScoringServer(Scorer& scorer)
    : scorer_(scorer), server_(std::make_unique<httplib::Server>()) {
  auto send = [](httplib::Response& res, const HttpReply& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server_->Post("/v1/score", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_score(scorer_, req.body));
  });
  server_->Post("/v1/advantages",
                [this, send](const httplib::Request& req, httplib::Response& res) {
                  send(res, handle_advantages(scorer_, req.body));
                });
  server_->Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(health_json(scorer_.config()).dump(), "application/json");
  });
}

ScoringServer::~ScoringServer() { stop(); }

int ScoringServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) {
    throw Error(ErrorCode::kConfig, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port_;
}

void ScoringServer::run() { server_->listen_after_bind(); }

void ScoringServer::start() {
  worker_ = std::thread([this] { run(); });
  server_->wait_until_ready();
}

void ScoringServer::stop() {
  server_->stop();
  if (worker_.joinable()) worker_.join();
}

}  // namespace sqlcritic
