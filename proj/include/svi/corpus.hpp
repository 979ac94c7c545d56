#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "svi/label.hpp"

namespace svi {

// One labeled source snippet. `origin` names the source dataset
// (e.g. "bigvul", "diversevul", "sven", "coreutils").
struct CodeSample {
  std::string id;
  std::string code;
  Label label = Label::benign();
  std::string origin;
};

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<CodeSample> samples)
      : samples_(std::move(samples)) {}

  const std::vector<CodeSample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  // Always recomputed from the samples, never read from a file.
  std::map<Label, std::size_t> label_histogram() const;

 private:
  std::vector<CodeSample> samples_;
};

struct SplitResult {
  Dataset train;
  Dataset test;
};

// Record grammar: {"id": str, "code": str, "label": "CWE-787"|"benign",
// "origin": str}. Labels outside `allowed` are rejected; pass std::nullopt
// to accept any syntactically valid label.
Dataset load_dataset(
    const std::filesystem::path& path,
    const std::optional<std::set<Label>>& allowed = default_label_set());

void save_dataset(const std::filesystem::path& path, const Dataset& d);

// The nine configured CWEs plus benign.
std::optional<std::set<Label>> default_label_set();

// Draws exactly `per_label_test` samples of every label into the test set,
// the rest into train, both in input order. Pure function of
// (d, per_label_test, seed): shuffling is mt19937_64-driven Fisher-Yates
// over each label's sample indices, labels visited in canonical order.
SplitResult stratified_split(const Dataset& d, std::size_t per_label_test,
                             std::uint64_t seed);

}  // namespace svi
