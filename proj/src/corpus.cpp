#include "svi/corpus.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

#include "svi/errors.hpp"
#include "svi/jsonl.hpp"

namespace svi {

namespace {

bool all_whitespace(const std::string& s) {
  return s.find_first_not_of(" \t\r\n\v\f") == std::string::npos;
}

std::string require_string_field(const Json& record, const char* key,
                                 std::size_t line) {
  if (!record.contains(key)) {
    throw MalformedRecordError(line, std::string("missing field \"") + key +
                                         "\"");
  }
  if (!record[key].is_string()) {
    throw MalformedRecordError(line, std::string("field \"") + key +
                                         "\" is not a string");
  }
  return record[key].get<std::string>();
}

}  // namespace

std::map<Label, std::size_t> Dataset::label_histogram() const {
  std::map<Label, std::size_t> hist;
  for (const auto& s : samples_) ++hist[s.label];
  return hist;
}

std::optional<std::set<Label>> default_label_set() {
  std::set<Label> labels;
  for (std::uint32_t id : kDefaultCweIds) labels.insert(Label::cwe(id));
  labels.insert(Label::benign());
  return labels;
}

Dataset load_dataset(const std::filesystem::path& path,
                     const std::optional<std::set<Label>>& allowed) {
  std::vector<CodeSample> samples;
  std::unordered_set<std::string> seen_ids;

  for_each_jsonl(path, [&](std::size_t line, const Json& record) {
    if (!record.is_object()) {
      throw MalformedRecordError(line, "record is not a JSON object");
    }
    CodeSample s;
    s.id = require_string_field(record, "id", line);
    s.code = require_string_field(record, "code", line);
    const std::string label_text = require_string_field(record, "label", line);
    s.origin = require_string_field(record, "origin", line);

    if (s.id.empty()) throw MalformedRecordError(line, "empty id");
    if (all_whitespace(s.code)) throw MalformedRecordError(line, "empty code");
    if (!seen_ids.insert(s.id).second) throw DuplicateIdError(s.id);

    s.label = Label::parse(label_text);
    if (allowed && !allowed->count(s.label)) {
      throw UnknownLabelError(label_text);
    }
    samples.push_back(std::move(s));
  });

  return Dataset(std::move(samples));
}

void save_dataset(const std::filesystem::path& path, const Dataset& d) {
  std::vector<Json> records;
  records.reserve(d.size());
  for (const auto& s : d.samples()) {
    records.push_back(Json{{"id", s.id},
                           {"code", s.code},
                           {"label", s.label.to_string()},
                           {"origin", s.origin}});
  }
  write_jsonl(path, records);
}

SplitResult stratified_split(const Dataset& d, std::size_t per_label_test,
                             std::uint64_t seed) {
  // Indices per label, in dataset order; labels iterate in canonical order
  // so the PRNG stream is consumed identically across runs.
  std::map<Label, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < d.samples().size(); ++i) {
    by_label[d.samples()[i].label].push_back(i);
  }

  for (const auto& [label, idx] : by_label) {
    if (idx.size() < per_label_test) {
      throw InsufficientLabelError(label.to_string(), idx.size(),
                                   per_label_test);
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<bool> in_test(d.size(), false);
  for (auto& [label, idx] : by_label) {
    // Hand-rolled Fisher-Yates: std::shuffle is not bit-portable across
    // standard library implementations.
    for (std::size_t i = idx.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(idx[i - 1], idx[j]);
    }
    for (std::size_t k = 0; k < per_label_test; ++k) in_test[idx[k]] = true;
  }

  std::vector<CodeSample> train, test;
  for (std::size_t i = 0; i < d.samples().size(); ++i) {
    (in_test[i] ? test : train).push_back(d.samples()[i]);
  }
  return SplitResult{Dataset(std::move(train)), Dataset(std::move(test))};
}

}  // namespace svi
