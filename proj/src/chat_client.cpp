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


#include "sqlcritic/chat_client.hpp"

#include <httplib.h>

#include <json.hpp>

namespace sqlcritic {

using json = nlohmann::json;

HttpChatClient::HttpChatClient(std::string endpoint, std::string api_key,
                               std::chrono::milliseconds timeout)
    : api_key_(std::move(api_key)), timeout_(timeout) {
  while (!endpoint.empty() && endpoint.back() == '/') endpoint.pop_back();
  const auto scheme = endpoint.find("://");
  const auto path_start =
      endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  host_ = endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? std::string() : endpoint.substr(path_start);
  if (!path_.ends_with("/chat/completions")) path_ += "/v1/chat/completions";
}

std::string chat_request_body(const ChatRequest& request) {
  json body;
  body["model"] = request.model;
  body["temperature"] = request.temperature;
  body["messages"] = json::array();
  for (const auto& m : request.messages) {
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  }
  return body.dump();
}

std::string chat_response_content(const std::string& body) {
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw TransportError("chat response is not a JSON object");
  }
  try {
    return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("unexpected chat response shape: ") + e.what());
  }
}

std::string HttpChatClient::complete(const ChatRequest& request) {
  httplib::Client client(host_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  auto res = client.Post(path_, headers, chat_request_body(request), "application/json");
  if (!res) {
    throw TransportError("chat endpoint unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError("chat endpoint returned HTTP " + std::to_string(res->status));
  }
  return chat_response_content(res->body);
}

std::optional<std::string> ResponseCache::find(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::insert(const std::string& key, std::string value) {
  std::lock_guard lock(mu_);
  entries_.insert_or_assign(key, std::move(value));
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

}  // namespace sqlcritic
