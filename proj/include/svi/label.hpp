#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace svi {

// Classification target: a concrete CWE id or the benign class.
// Ordering is numeric CWE id ascending with benign sorted last; this is the
// canonical order used for splits, confusion matrices and tie-breaking.
class Label {
 public:
  static Label benign() { return Label(std::nullopt); }
  static Label cwe(std::uint32_t id) { return Label(id); }

  bool is_benign() const { return !id_.has_value(); }
  std::uint32_t cwe_id() const { return id_.value(); }

  // Canonical surface form: "CWE-787" or "benign".
  std::string to_string() const;

  // Accepts "CWE-787" / "cwe-787" / "benign" (case-insensitive);
  // throws UnknownLabelError on anything else.
  static Label parse(const std::string& text);

  friend bool operator==(const Label& a, const Label& b) {
    return a.id_ == b.id_;
  }
  friend bool operator!=(const Label& a, const Label& b) { return !(a == b); }
  friend bool operator<(const Label& a, const Label& b) {
    if (a.is_benign() != b.is_benign()) return !a.is_benign();  // benign last
    if (a.is_benign()) return false;
    return a.cwe_id() < b.cwe_id();
  }

 private:
  explicit Label(std::optional<std::uint32_t> id) : id_(id) {}
  std::optional<std::uint32_t> id_;
};

// The nine weakness classes the harness is configured for, numeric order.
inline constexpr std::array<std::uint32_t, 9> kDefaultCweIds = {
    20, 119, 125, 190, 200, 416, 476, 703, 787};

// Expected response for benign samples and the benign matcher candidate.
inline constexpr const char* kBenignResponse = "The code is not vulnerable.";

}  // namespace svi
