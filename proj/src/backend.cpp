#include "svi/backend.hpp"

#include <atomic>
#include <cstdlib>
#include <random>
#include <thread>

#include <httplib.h>

#include "svi/errors.hpp"
#include "svi/jsonl.hpp"

namespace svi {

namespace {

std::string rstrip(std::string s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\n' || s.back() == '\r')) {
    s.pop_back();
  }
  return s;
}

struct ParsedEndpoint {
  std::string base;  // scheme://host[:port]
  std::string path_prefix;
};

ParsedEndpoint parse_endpoint(const std::string& endpoint) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::Backend,
                "endpoint must start with http:// or https://: " + endpoint);
  }
  const auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {endpoint, ""};
  }
  std::string prefix = endpoint.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {endpoint.substr(0, path_start), prefix};
}

bool retryable_status(int status) {
  return status == 408 || status == 429 || (status >= 500 && status < 600);
}

std::chrono::milliseconds backoff_delay(const BackendConfig& cfg,
                                        unsigned attempt) {
  auto base = cfg.initial_backoff.count();
  for (unsigned i = 0; i < attempt && base < cfg.max_backoff.count(); ++i) {
    base *= 2;
  }
  base = std::min<long long>(base, cfg.max_backoff.count());
  // Full jitter on the upper half; timing only, never affects outputs.
  thread_local std::mt19937_64 jitter_rng(std::random_device{}());
  const auto half = base / 2;
  return std::chrono::milliseconds(
      half + static_cast<long long>(jitter_rng() % (half + 1)));
}

}  // namespace

Backend Backend::open(BackendConfig cfg) {
  Backend b(std::move(cfg));
  if (b.cfg_.concurrency_limit == 0) b.cfg_.concurrency_limit = 1;
  if (b.cfg_.kind == BackendKind::Replay) {
    for_each_jsonl(b.cfg_.replay_file, [&](std::size_t line, const Json& j) {
      if (!j.contains("id") || !j.contains("raw") || !j["id"].is_string() ||
          !j["raw"].is_string()) {
        throw MalformedRecordError(line, "replay records need id and raw");
      }
      b.replay_[j["id"].get<std::string>()] = j["raw"].get<std::string>();
    });
  }
  return b;
}

RawPrediction Backend::query(const PromptRecord& p) const {
  return cfg_.kind == BackendKind::Replay ? query_replay(p) : query_http(p);
}

RawPrediction Backend::query_replay(const PromptRecord& p) const {
  auto it = replay_.find(p.sample_id);
  if (it == replay_.end()) throw MissingReplayEntryError(p.sample_id);
  return RawPrediction{p.sample_id, rstrip(it->second),
                       std::chrono::milliseconds(0), 1};
}

RawPrediction Backend::query_http(const PromptRecord& p) const {
  const auto ep = parse_endpoint(cfg_.endpoint);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (ep.base.rfind("https://", 0) == 0) {
    throw Error(ErrorKind::Backend,
                "built without TLS support; use an http:// endpoint");
  }
#endif

  const Json body{
      {"model", cfg_.model_name},
      {"messages", Json::array({Json{{"role", "user"},
                                     {"content", p.prompt}}})},
      {"temperature", cfg_.temperature},
      {"max_tokens", cfg_.max_output_tokens},
  };
  const std::string payload = body.dump();
  const std::string path = ep.path_prefix + "/v1/chat/completions";

  httplib::Headers headers;
  if (const char* key = std::getenv(cfg_.api_key_env.c_str());
      key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  const auto started = std::chrono::steady_clock::now();
  std::string last_failure = "no attempt made";
  int last_status = 0;
  bool last_was_timeout = false;

  for (unsigned attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff_delay(cfg_, attempt - 1));
    }

    httplib::Client client(ep.base);
    const auto secs =
        std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout);
    client.set_connection_timeout(secs.count(), 0);
    client.set_read_timeout(secs.count(), 0);
    client.set_write_timeout(secs.count(), 0);

    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_status = 0;
      last_was_timeout = res.error() == httplib::Error::ConnectionTimeout ||
                         res.error() == httplib::Error::Read ||
                         res.error() == httplib::Error::Write;
      last_failure = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) {
      std::string content;
      try {
        const auto parsed = Json::parse(res->body);
        content = parsed.at("choices").at(0).at("message").at("content")
                      .get<std::string>();
      } catch (const std::exception& e) {
        throw Error(ErrorKind::Backend,
                    std::string("malformed completion response: ") + e.what());
      }
      const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - started);
      return RawPrediction{p.sample_id, rstrip(content), latency, attempt + 1};
    }
    if (!retryable_status(res->status)) {
      throw ServerErrorError(res->status);
    }
    last_status = res->status;
    last_was_timeout = false;
    last_failure = "status " + std::to_string(res->status);
  }

  if (last_status == 429) throw RateLimitedError();
  if (last_was_timeout) throw TimeoutError(last_failure);
  if (last_status != 0) throw ServerErrorError(last_status);
  throw Error(ErrorKind::Backend,
              "request failed after " + std::to_string(cfg_.max_retries + 1) +
                  " attempts: " + last_failure);
}

BatchOutcome Backend::query_batch(
    const std::vector<PromptRecord>& prompts) const {
  BatchOutcome outcome;
  outcome.results.resize(prompts.size());
  std::vector<std::optional<std::string>> failures(prompts.size());

  const std::size_t workers =
      std::min<std::size_t>(cfg_.concurrency_limit, prompts.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < prompts.size(); ++i) {
      try {
        outcome.results[i] = query(prompts[i]);
      } catch (const std::exception& e) {
        if (cfg_.fail_fast) throw;
        failures[i] = e.what();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= prompts.size()) return;
          try {
            outcome.results[i] = query(prompts[i]);
          } catch (const std::exception& e) {
            failures[i] = e.what();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (cfg_.fail_fast) {
      for (std::size_t i = 0; i < failures.size(); ++i) {
        if (failures[i]) {
          throw Error(ErrorKind::Backend, "sample \"" + prompts[i].sample_id +
                                              "\": " + *failures[i]);
        }
      }
    }
  }

  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (failures[i]) {
      outcome.errors.emplace_back(prompts[i].sample_id, *failures[i]);
    }
  }
  return outcome;
}

}  // namespace svi
