#include "svi/cost.hpp"

#include <cmath>
#include <limits>

#include "svi/errors.hpp"

namespace svi {

double round_cents(double amount) {
  return static_cast<double>(std::llround(amount * 100.0)) / 100.0;
}

double gpu_cost(const GpuCostSpec& s) {
  if (s.hours < 0 || s.rate_per_gpu_hour < 0) {
    throw Error(ErrorKind::Data, "GPU cost inputs must be non-negative");
  }
  return round_cents(s.hours * static_cast<double>(s.gpu_count) *
                     s.rate_per_gpu_hour);
}

double api_cost(const ApiCostSpec& s) {
  if (s.price_in < 0 || s.price_out < 0) {
    throw Error(ErrorKind::Data, "API prices must be non-negative");
  }
  const double total =
      static_cast<double>(s.prompt_tokens) * s.price_in / 1e6 +
      static_cast<double>(s.completion_tokens) * s.price_out / 1e6;
  return round_cents(total);
}

FlopsEstimate flops_macs(const ArchSpec& a) {
  if (a.parameter_count == 0) {
    throw Error(ErrorKind::Data, "parameter count must be positive");
  }
  const auto wide = static_cast<unsigned __int128>(a.parameter_count) *
                    a.sequence_length;
  if (wide > std::numeric_limits<std::uint64_t>::max() / 2) {
    throw Error(ErrorKind::Data, "FLOPs estimate overflows 64 bits");
  }
  const auto macs = static_cast<std::uint64_t>(wide);
  return FlopsEstimate{2 * macs, macs};
}

}  // namespace svi
