#include "svi/preprocess.hpp"

namespace svi {

namespace {

bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

bool is_hex_digit(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') ||
         (c >= 'A' && c <= 'F');
}

}  // namespace

std::string strip_comments(const std::string& code) {
  enum class State { Code, LineComment, BlockComment, String, Char };

  std::string out;
  out.reserve(code.size());
  State state = State::Code;
  std::size_t i = 0;
  const std::size_t n = code.size();

  // Emits the comment replacement: a space only when the characters on both
  // sides would otherwise become adjacent non-whitespace.
  auto end_comment = [&](std::size_t next_index) {
    const bool prev_solid = !out.empty() && !is_ws(out.back());
    const bool next_solid = next_index < n && !is_ws(code[next_index]);
    if (prev_solid && next_solid) out.push_back(' ');
  };

  while (i < n) {
    const char c = code[i];
    switch (state) {
      case State::Code:
        if (c == '/' && i + 1 < n && code[i + 1] == '/') {
          state = State::LineComment;
          i += 2;
        } else if (c == '/' && i + 1 < n && code[i + 1] == '*') {
          state = State::BlockComment;
          i += 2;
        } else if (c == '"') {
          out.push_back(c);
          state = State::String;
          ++i;
        } else if (c == '\'') {
          // 1'000'000 / 0xFF'EC style digit separators stay plain code.
          const bool separator = !out.empty() && is_hex_digit(out.back()) &&
                                 i + 1 < n && is_hex_digit(code[i + 1]);
          out.push_back(c);
          if (!separator) state = State::Char;
          ++i;
        } else {
          out.push_back(c);
          ++i;
        }
        break;

      case State::LineComment:
        if (c == '\\' && i + 1 < n &&
            (code[i + 1] == '\n' ||
             (code[i + 1] == '\r' && i + 2 < n && code[i + 2] == '\n'))) {
          // Line splice: the comment continues on the next physical line.
          i += (code[i + 1] == '\n') ? 2 : 3;
        } else if (c == '\n') {
          end_comment(i);  // terminating newline stays in the output
          out.push_back(c);
          state = State::Code;
          ++i;
        } else {
          ++i;
        }
        break;

      case State::BlockComment:
        if (c == '*' && i + 1 < n && code[i + 1] == '/') {
          i += 2;
          end_comment(i);
          state = State::Code;
        } else {
          ++i;
        }
        break;

      case State::String:
        if (c == '\\' && i + 1 < n) {
          out.push_back(c);
          out.push_back(code[i + 1]);
          i += 2;
        } else {
          out.push_back(c);
          if (c == '"') state = State::Code;
          ++i;
        }
        break;

      case State::Char:
        if (c == '\\' && i + 1 < n) {
          out.push_back(c);
          out.push_back(code[i + 1]);
          i += 2;
        } else {
          out.push_back(c);
          if (c == '\'') state = State::Code;
          ++i;
        }
        break;
    }
  }
  return out;
}

std::string normalize_whitespace(const std::string& code) {
  std::string out;
  out.reserve(code.size());
  for (char c : code) {
    if (is_ws(c)) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string preprocess(const std::string& code, const PreprocessConfig& cfg) {
  std::string text = cfg.strip_comments ? strip_comments(code) : code;

  if (cfg.collapse_whitespace) {
    for (char& c : text) {
      if (is_ws(c)) c = ' ';
    }
  }
  if (cfg.normalize_indent) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
      if (c == ' ' && !out.empty() && out.back() == ' ') continue;
      out.push_back(c);
    }
    while (!out.empty() && out.front() == ' ') out.erase(out.begin());
    while (!out.empty() && out.back() == ' ') out.pop_back();
    text = std::move(out);
  }
  return text;
}

}  // namespace svi
