#include "svi/label.hpp"

#include <algorithm>
#include <cctype>

#include "svi/errors.hpp"

namespace svi {

std::string Label::to_string() const {
  if (is_benign()) return "benign";
  return "CWE-" + std::to_string(cwe_id());
}

Label Label::parse(const std::string& text) {
  std::string lower(text.size(), '\0');
  std::transform(text.begin(), text.end(), lower.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });

  if (lower == "benign") return Label::benign();

  if (lower.rfind("cwe-", 0) == 0 && lower.size() > 4) {
    const std::string digits = lower.substr(4);
    if (std::all_of(digits.begin(), digits.end(), [](unsigned char c) {
          return std::isdigit(c) != 0;
        })) {
      unsigned long id = 0;
      try {
        id = std::stoul(digits);
      } catch (const std::exception&) {
        throw UnknownLabelError(text);
      }
      if (id == 0 || id > 0xFFFFFFFFul) throw UnknownLabelError(text);
      return Label::cwe(static_cast<std::uint32_t>(id));
    }
  }
  throw UnknownLabelError(text);
}

}  // namespace svi
