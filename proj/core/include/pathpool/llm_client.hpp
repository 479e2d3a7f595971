#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "pathpool/prompt.hpp"

namespace pathpool {

struct GenerationConfig {
  /// Full chat-completions URL, e.g. http://localhost:8000/v1/chat/completions.
  std::string endpoint;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 4000;
  double timeout_seconds = 120.0;
  /// Extra attempts after the first one for retryable failures.
  int retry_count = 2;
  std::chrono::milliseconds backoff_base{500};
  /// Bearer token; read from LLM_API_KEY when unset.
  std::optional<std::string> api_key;

  /// Throws ConfigError.
  void validate() const;
};

/// Outcome of one HTTP exchange. `transport_error` is set when no response
/// arrived at all.
struct HttpResult {
  int status = 0;
  std::string body;
  std::optional<std::string> transport_error;
};

/// Sends one JSON request body to the endpoint. Swappable for tests.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual HttpResult post(const GenerationConfig& config, const std::string& body) = 0;
};

/// cpp-httplib transport. https URLs need a build with OpenSSL.
class HttpChatTransport final : public ChatTransport {
 public:
  HttpResult post(const GenerationConfig& config, const std::string& body) override;
};

/// Chat-completions request body for the prompt.
std::string build_chat_request(const PromptBundle& bundle, const GenerationConfig& config);

/// choices[0].message.content of a chat-completions response.
std::string extract_completion(const std::string& response_body);

/// Posts the prompt and returns the completion text.
///
/// Transport failures, 429 and 5xx responses are retried up to
/// config.retry_count times with exponential backoff; exhausting them on a
/// transport failure throws TransportError. Other non-2xx statuses (and a
/// final 429/5xx) throw EndpointError.
std::string call_llm(const PromptBundle& bundle, const GenerationConfig& config,
                     ChatTransport& transport);
std::string call_llm(const PromptBundle& bundle, const GenerationConfig& config);

}  // namespace pathpool
