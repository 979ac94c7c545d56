#pragma once

#include <string>

namespace svi {

struct PreprocessConfig {
  bool strip_comments = true;
  bool collapse_whitespace = true;  // newline/tab/CR and friends -> space
  bool normalize_indent = true;     // collapse space runs, trim ends
};

// Removes // and /* */ comments with a five-state scanner (code, line
// comment, block comment, string literal, char literal). String and char
// literal bodies pass through verbatim, backslash escapes included;
// unterminated literals and block comments run to end of input. A removed
// comment leaves a single space behind when deleting it would have fused
// the surrounding tokens (`a/*c*/b` -> `a b`), nothing otherwise.
//
// Known limitations: raw string literals R"(...)" and trigraphs are not
// recognized. A ' between two hex digits is treated as a digit separator,
// not a char-literal quote.
std::string strip_comments(const std::string& code);

// All ASCII whitespace (\t \n \r \v \f) becomes a space, runs of spaces
// collapse to one, leading/trailing whitespace is dropped.
std::string normalize_whitespace(const std::string& code);

// Comments first, then whitespace. Idempotent.
std::string preprocess(const std::string& code,
                       const PreprocessConfig& cfg = {});

}  // namespace svi
