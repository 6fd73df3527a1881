#pragma once

// Vision-model endpoint driver over an OpenAI-style chat-completions API.

#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "geosynth/error.hpp"
#include "geosynth/eval.hpp"
#include "geosynth/image.hpp"
#include "geosynth/qa.hpp"
#include "httplib.h"
#include "json.hpp"

namespace geosynth::eval {

struct EndpointConfig {
  std::string base_url = "http://127.0.0.1:8000/v1";  // POSTs to <base_url>/chat/completions
  std::string model = "gpt-4o";
  std::string api_key_env = "GEOSYNTH_API_KEY";
  int timeout_s = 60;
  int max_retries = 3;
  int backoff_ms = 500;  // doubled after each failed attempt
  int concurrency = 4;
  int max_tokens = 256;

  void validate() const {
    if (base_url.rfind("http://", 0) != 0 && base_url.rfind("https://", 0) != 0) {
      throw Error(Errc::InvalidConfig, "base_url must start with http:// or https://");
    }
    if (timeout_s <= 0 || max_retries < 0 || backoff_ms < 0 || concurrency < 1 || max_tokens < 1) {
      throw Error(Errc::InvalidConfig, "invalid endpoint limits");
    }
  }
};

inline EndpointConfig endpoint_config_from_json(const nlohmann::json& j) {
  EndpointConfig c;
  c.base_url = j.value("base_url", c.base_url);
  c.model = j.value("model", c.model);
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  c.timeout_s = j.value("timeout_s", c.timeout_s);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.backoff_ms = j.value("backoff_ms", c.backoff_ms);
  c.concurrency = j.value("concurrency", c.concurrency);
  c.max_tokens = j.value("max_tokens", c.max_tokens);
  c.validate();
  return c;
}

inline std::string base64(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

/// PNG bytes of the item image, padded to a square with white.
inline std::vector<std::uint8_t> square_image_png(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw Error(Errc::ImageMissing, "image not found: " + path.string());
  const auto img = decode_png(read_bytes(path));
  if (img.width == img.height) return read_bytes(path);
  return encode_png(pad_to_square(img, Rgb{255, 255, 255}));
}

inline nlohmann::json chat_request(const EndpointConfig& config, const std::string& prompt,
                                   const std::vector<std::uint8_t>& png) {
  using nlohmann::json;
  json content = json::array();
  content.push_back({{"type", "text"}, {"text", prompt}});
  content.push_back({{"type", "image_url"}, {"image_url", {{"url", "data:image/png;base64," + base64(png)}}}});
  return {{"model", config.model},
          {"max_tokens", config.max_tokens},
          {"temperature", 0},
          {"messages", json::array({{{"role", "user"}, {"content", content}}})}};
}

class ChatClient {
 public:
  explicit ChatClient(EndpointConfig config) : config_(std::move(config)) {
    config_.validate();
    const auto scheme_end = config_.base_url.find("://") + 3;
    const auto slash = config_.base_url.find('/', scheme_end);
    host_ = config_.base_url.substr(0, slash);
    path_ = (slash == std::string::npos ? "" : config_.base_url.substr(slash));
    while (!path_.empty() && path_.back() == '/') path_.pop_back();
    path_ += "/chat/completions";
    if (const char* key = std::getenv(config_.api_key_env.c_str())) token_ = key;
  }

  /// Sends one request. Transport errors, 429 and 5xx are retried with
  /// exponential backoff; anything else fails at once.
  std::string complete(const std::string& prompt, const std::vector<std::uint8_t>& png) const {
    const auto body = chat_request(config_, prompt, png).dump();
    std::string last = "no attempt";
    int delay = config_.backoff_ms;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        delay *= 2;
      }
      httplib::Client cli(host_);
      cli.set_connection_timeout(config_.timeout_s);
      cli.set_read_timeout(config_.timeout_s);
      cli.set_write_timeout(config_.timeout_s);
      if (!token_.empty()) cli.set_bearer_token_auth(token_);
      const auto res = cli.Post(path_, body, "application/json");
      if (!res) {
        last = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) throw Error(Errc::EndpointError, "HTTP " + std::to_string(res->status) + ": " + res->body);
      try {
        const auto j = nlohmann::json::parse(res->body);
        const auto& content = j.at("choices").at(0).at("message").at("content");
        return content.is_null() ? std::string{} : content.get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::EndpointError, std::string("malformed completion: ") + e.what());
      }
    }
    throw Error(Errc::EndpointError, "giving up after " + std::to_string(config_.max_retries + 1) +
                                         " attempts: " + last);
  }

 private:
  EndpointConfig config_;
  std::string host_;
  std::string path_;
  std::string token_;
};

/// Queries the endpoint for every item with at most `concurrency` requests
/// in flight. Each raw response is appended to `raw_out` as {id, response}
/// when it arrives; scoring happens after all responses are written.
inline ScoredRun evaluate_model(const std::vector<QAItem>& dataset, const std::filesystem::path& dataset_root,
                                const EndpointConfig& config, const std::filesystem::path& raw_out) {
  const ChatClient client(config);
  for (const auto& item : dataset) {
    if (!std::filesystem::is_regular_file(dataset_root / item.image)) {
      throw Error(Errc::ImageMissing, "image not found for " + item.id + ": " + (dataset_root / item.image).string());
    }
  }
  std::ofstream raw(raw_out, std::ios::trunc);
  if (!raw) throw Error(Errc::Io, "cannot write " + raw_out.string());
  std::map<std::string, std::string> responses;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::optional<Error> failure;
  auto worker = [&] {
    while (!stop) {
      const auto i = next++;
      if (i >= dataset.size()) return;
      const auto& item = dataset[i];
      try {
        auto text = client.complete(build_prompt(item), square_image_png(dataset_root / item.image));
        std::lock_guard lock(mu);
        raw << nlohmann::json{{"id", item.id}, {"response", text}}.dump() << "\n" << std::flush;
        responses[item.id] = std::move(text);
      } catch (const Error& e) {
        std::lock_guard lock(mu);
        if (!failure) failure = e;
        stop = true;
      }
    }
  };
  std::vector<std::thread> pool;
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(config.concurrency), dataset.size());
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  raw.close();
  if (failure) throw *failure;
  return score_responses(dataset, responses);
}

}  // namespace geosynth::eval
