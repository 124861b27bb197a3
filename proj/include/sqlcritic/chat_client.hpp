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

#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqlcritic {

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
};

// Raised when the remote model cannot be reached or answers with a non-2xx
// status. Callers map it onto their own unavailability code.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  // Returns the assistant message content. Must be safe to call concurrently.
  virtual std::string complete(const ChatRequest& request) = 0;
};

// OpenAI-compatible chat-completion client. `endpoint` is a base locator such
// as "http://127.0.0.1:8000"; "/v1/chat/completions" is appended unless the
// locator already ends with "/chat/completions".
class HttpChatClient : public ChatClient {
 public:
  HttpChatClient(std::string endpoint, std::string api_key,
                 std::chrono::milliseconds timeout = std::chrono::seconds(60));

  std::string complete(const ChatRequest& request) override;

  const std::string& host() const { return host_; }
  const std::string& path() const { return path_; }

 private:
  std::string host_;  // scheme://host[:port]
  std::string path_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

std::string chat_request_body(const ChatRequest& request);
// Extracts choices[0].message.content; throws TransportError on bad shape.
std::string chat_response_content(const std::string& body);

// Exact-match completion cache keyed by the serialized request.
class ResponseCache {
 public:
  std::optional<std::string> find(const std::string& key) const;
  void insert(const std::string& key, std::string value);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::string> entries_;
};

}  // namespace sqlcritic
