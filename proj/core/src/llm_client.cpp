#include "pathpool/llm_client.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "pathpool/error.hpp"

namespace pathpool {

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint '" + url + "' has no scheme");
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string excerpt(const std::string& body) {
  constexpr std::size_t kMax = 200;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

void GenerationConfig::validate() const {
  if (endpoint.empty()) throw ConfigError("generation endpoint is not set");
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (max_tokens <= 0) throw ConfigError("max_tokens must be > 0");
  if (!(timeout_seconds > 0.0)) throw ConfigError("timeout must be > 0");
  if (retry_count < 0) throw ConfigError("retry count must be >= 0");
}

HttpResult HttpChatTransport::post(const GenerationConfig& config, const std::string& body) {
  const auto url = split_url(config.endpoint);
  httplib::Client client(url.origin);
  if (!client.is_valid()) {
    return HttpResult{0, {}, "unsupported endpoint '" + config.endpoint + "'"};
  }
  const auto secs = static_cast<time_t>(config.timeout_seconds);
  const auto usecs = static_cast<time_t>((config.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers;
  std::optional<std::string> key = config.api_key;
  if (!key) {
    if (const char* env = std::getenv("LLM_API_KEY"); env && *env) key = env;
  }
  if (key) headers.emplace("Authorization", "Bearer " + *key);

  auto res = client.Post(url.path, headers, body, "application/json");
  if (!res) return HttpResult{0, {}, httplib::to_string(res.error())};
  return HttpResult{res->status, res->body, std::nullopt};
}

std::string build_chat_request(const PromptBundle& bundle, const GenerationConfig& config) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : to_messages(bundle)) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  nlohmann::json request = {{"model", config.model},
                            {"messages", messages},
                            {"temperature", config.temperature},
                            {"max_tokens", config.max_tokens}};
  return request.dump();
}

std::string extract_completion(const std::string& response_body) {
  try {
    const auto doc = nlohmann::json::parse(response_body);
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed chat completion response: ") + e.what());
  }
}

std::string call_llm(const PromptBundle& bundle, const GenerationConfig& config,
                     ChatTransport& transport) {
  config.validate();
  const auto body = build_chat_request(bundle, config);
  const int attempts = config.retry_count + 1;

  for (int attempt = 1;; ++attempt) {
    const auto result = transport.post(config, body);
    const bool last = attempt == attempts;
    if (result.transport_error) {
      if (last) {
        throw TransportError("request to " + config.endpoint + " failed after " +
                                 std::to_string(attempts) + " attempts: " + *result.transport_error,
                             attempts);
      }
    } else if (result.status >= 200 && result.status < 300) {
      return extract_completion(result.body);
    } else if (last || !retryable_status(result.status)) {
      throw EndpointError(result.status, excerpt(result.body));
    }
    std::this_thread::sleep_for(config.backoff_base * (1 << std::min(attempt - 1, 16)));
  }
}

std::string call_llm(const PromptBundle& bundle, const GenerationConfig& config) {
  HttpChatTransport transport;
  return call_llm(bundle, config, transport);
}

}  // namespace pathpool
