#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "svi/prompt.hpp"

namespace svi {

enum class BackendKind { Http, Replay };

struct BackendConfig {
  BackendKind kind = BackendKind::Replay;

  // Http: base URL of an OpenAI-compatible server, e.g.
  // "http://localhost:8000" or "https://api.openai.com". A path prefix is
  // honored. The API key is read from `api_key_env` and never logged.
  std::string endpoint;
  std::string model_name;
  double temperature = 0.0;  // 0 for reproducibility
  unsigned max_output_tokens = 256;
  std::chrono::milliseconds timeout{30000};
  unsigned max_retries = 3;  // retries after the first attempt
  unsigned concurrency_limit = 1;
  bool fail_fast = false;
  std::string api_key_env = "SVI_API_KEY";

  // Backoff between retry attempts: initial * 2^attempt, jittered, capped.
  std::chrono::milliseconds initial_backoff{1000};
  std::chrono::milliseconds max_backoff{30000};

  // Replay: canned responses keyed by sample id ({"id", "raw"} JSONL).
  std::filesystem::path replay_file;
};

struct RawPrediction {
  std::string sample_id;
  std::string raw_text;  // verbatim except trailing whitespace
  std::chrono::milliseconds latency{0};
  unsigned attempt_count = 0;
};

struct BatchOutcome {
  // Index-aligned with the input prompts; an empty slot means that sample
  // failed and has an entry in `errors`.
  std::vector<std::optional<RawPrediction>> results;
  std::vector<std::pair<std::string, std::string>> errors;  // (id, message)

  bool all_ok() const { return errors.empty(); }
};

class Backend {
 public:
  // Loads the replay table eagerly so missing files fail fast.
  static Backend open(BackendConfig cfg);

  RawPrediction query(const PromptRecord& p) const;

  // Up to concurrency_limit requests in flight; output is input-ordered
  // regardless of completion order. With fail_fast the first error is
  // rethrown, otherwise failures are collected per sample.
  BatchOutcome query_batch(const std::vector<PromptRecord>& prompts) const;

  const BackendConfig& config() const { return cfg_; }

 private:
  explicit Backend(BackendConfig cfg) : cfg_(std::move(cfg)) {}
  RawPrediction query_http(const PromptRecord& p) const;
  RawPrediction query_replay(const PromptRecord& p) const;

  BackendConfig cfg_;
  std::unordered_map<std::string, std::string> replay_;
};

}  // namespace svi
