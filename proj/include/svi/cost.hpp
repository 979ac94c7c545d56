#pragma once

#include <cstdint>
#include <string>

namespace svi {

struct GpuCostSpec {
  double hours = 0.0;
  std::uint32_t gpu_count = 0;
  double rate_per_gpu_hour = 0.0;  // currency per GPU-hour
};

struct ApiCostSpec {
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  double price_in = 0.0;   // currency per 1M prompt tokens
  double price_out = 0.0;  // currency per 1M completion tokens
};

struct ArchSpec {
  std::uint64_t parameter_count = 0;
  std::uint64_t sequence_length = 0;
  std::string name;
};

struct FlopsEstimate {
  std::uint64_t flops = 0;
  std::uint64_t macs = 0;
};

// Rounds a currency amount to cents, half away from zero.
double round_cents(double amount);

// hours x gpus x rate, rounded to cents once at the end.
double gpu_cost(const GpuCostSpec& s);

// prompt_tokens*price_in/1e6 + completion_tokens*price_out/1e6, rounded once.
double api_cost(const ApiCostSpec& s);

// Dense forward-pass approximation: one multiply-accumulate per parameter
// per token, so macs = parameters x sequence length and flops = 2 x macs.
// Attention-specific terms are intentionally ignored.
FlopsEstimate flops_macs(const ArchSpec& a);

}  // namespace svi
