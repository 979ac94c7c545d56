#include "svi/prompt.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "svi/errors.hpp"
#include "svi/hash.hpp"

namespace svi {

namespace {

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

void check_placeholder(const std::string& text) {
  const auto first = text.find(kCodePlaceholder);
  if (first == std::string::npos ||
      text.find(kCodePlaceholder, first + 1) != std::string::npos) {
    throw Error(ErrorKind::Data,
                "template must contain [CODE] exactly once: \"" + text + "\"");
  }
}

}  // namespace

PromptTemplate PromptTemplate::builtin(TemplateName name) {
  switch (name) {
    case TemplateName::Simple:
      return {name, "Find CWE in: [CODE]"};
    case TemplateName::CppSpecified:
      return {name,
              "Examine the given C/C++ code snippet and detect "
              "vulnerabilities: [CODE]"};
    case TemplateName::CodeT5Style:
      return {name, "Defect: [CODE]"};
    case TemplateName::Descriptive:
      return {name,
              "Analyze the following code and identify potential security "
              "vulnerabilities in: [CODE]"};
  }
  return {TemplateName::Simple, "Find CWE in: [CODE]"};
}

PromptTemplate PromptTemplate::custom(const std::string& text) {
  check_placeholder(text);
  return {TemplateName::Simple, text};
}

TemplateName template_from_string(const std::string& text) {
  if (text == "simple") return TemplateName::Simple;
  if (text == "cpp") return TemplateName::CppSpecified;
  if (text == "codet5") return TemplateName::CodeT5Style;
  if (text == "descriptive") return TemplateName::Descriptive;
  throw Error(ErrorKind::Data, "unknown template \"" + text + "\"");
}

std::string to_string(TemplateName name) {
  switch (name) {
    case TemplateName::Simple:
      return "simple";
    case TemplateName::CppSpecified:
      return "cpp";
    case TemplateName::CodeT5Style:
      return "codet5";
    case TemplateName::Descriptive:
      return "descriptive";
  }
  return "simple";
}

StyleKind style_from_string(const std::string& text) {
  if (text == "hard") return StyleKind::Hard;
  if (text == "soft") return StyleKind::Soft;
  if (text == "mixed") return StyleKind::Mixed;
  throw Error(ErrorKind::Data, "unknown prompt style \"" + text + "\"");
}

std::string to_string(StyleKind kind) {
  switch (kind) {
    case StyleKind::Hard:
      return "hard";
    case StyleKind::Soft:
      return "soft";
    case StyleKind::Mixed:
      return "mixed";
  }
  return "hard";
}

ResponseVariant response_from_string(const std::string& text) {
  if (text == "desc") return ResponseVariant::DescriptionOnly;
  if (text == "id") return ResponseVariant::IdOnly;
  if (text == "id+desc") return ResponseVariant::IdWithDescription;
  throw Error(ErrorKind::Data, "unknown response variant \"" + text + "\"");
}

std::string to_string(ResponseVariant rv) {
  switch (rv) {
    case ResponseVariant::DescriptionOnly:
      return "desc";
    case ResponseVariant::IdOnly:
      return "id";
    case ResponseVariant::IdWithDescription:
      return "id+desc";
  }
  return "desc";
}

std::string render_query(const PromptTemplate& t, const PromptStyle& style) {
  check_placeholder(t.text);
  if (style.kind == StyleKind::Hard) return t.text;

  if (t.text.find(style.soft_token) != std::string::npos) {
    throw SoftTokenCollisionError("template text");
  }

  const auto tokens = split_tokens(t.text);

  if (style.kind == StyleKind::Soft) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out.push_back(' ');
      out += (tokens[i] == kCodePlaceholder) ? tokens[i] : style.soft_token;
    }
    return out;
  }

  // Mixed: tokens minus [CODE] are the query; soft tokens land at ceil(n/2)
  // distinct boundaries of that query, drawn by seeded partial Fisher-Yates.
  std::vector<std::string> query;
  std::size_t code_pos = 0;
  for (const auto& tok : tokens) {
    if (tok == kCodePlaceholder) {
      code_pos = query.size();
    } else {
      query.push_back(tok);
    }
  }
  const std::size_t n = query.size();
  const std::size_t insertions = (n + 1) / 2;

  std::vector<std::size_t> gaps(n + 1);
  for (std::size_t g = 0; g <= n; ++g) gaps[g] = g;
  std::mt19937_64 rng(style.seed);
  for (std::size_t k = 0; k < insertions; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(
                                  rng() % (gaps.size() - k));
    std::swap(gaps[k], gaps[j]);
  }
  std::vector<bool> chosen(n + 1, false);
  for (std::size_t k = 0; k < insertions; ++k) chosen[gaps[k]] = true;

  std::vector<std::string> out_tokens;
  for (std::size_t g = 0; g <= n; ++g) {
    if (chosen[g]) out_tokens.push_back(style.soft_token);
    if (g == code_pos) out_tokens.push_back(kCodePlaceholder);
    if (g < n) out_tokens.push_back(query[g]);
  }

  std::string out;
  for (std::size_t i = 0; i < out_tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += out_tokens[i];
  }
  return out;
}

std::uint64_t record_seed(std::uint64_t corpus_seed,
                          const std::string& sample_id) {
  return mix64(corpus_seed ^ fnv1a64(sample_id));
}

PromptRecord build_record(const CodeSample& s, const PromptTemplate& t,
                          const PromptStyle& style, ResponseVariant rv,
                          const CweTaxonomy& taxonomy) {
  if (s.code.find(style.soft_token) != std::string::npos) {
    throw SoftTokenCollisionError("code of sample \"" + s.id + "\"");
  }

  PromptStyle effective = style;
  if (style.kind == StyleKind::Mixed) {
    effective.seed = record_seed(style.seed, s.id);
  }
  std::string query = render_query(t, effective);

  std::string expected;
  if (s.label.is_benign()) {
    expected = kBenignResponse;
  } else {
    const auto id = s.label.cwe_id();
    if (!taxonomy.contains(id)) throw MissingDescriptionError(id);
    switch (rv) {
      case ResponseVariant::DescriptionOnly:
        expected = taxonomy.description(id);
        break;
      case ResponseVariant::IdOnly:
        expected = s.label.to_string();
        break;
      case ResponseVariant::IdWithDescription:
        expected = s.label.to_string() + ": " + taxonomy.description(id);
        break;
    }
  }

  const auto pos = query.find(kCodePlaceholder);
  std::string prompt = query.substr(0, pos) + s.code +
                       query.substr(pos + std::string(kCodePlaceholder).size());

  return PromptRecord{s.id, std::move(prompt), std::move(expected), style, t};
}

std::vector<PromptRecord> build_corpus(const Dataset& d,
                                       const PromptTemplate& t,
                                       const PromptStyle& style,
                                       ResponseVariant rv,
                                       const CweTaxonomy& taxonomy) {
  std::vector<PromptRecord> records;
  records.reserve(d.size());
  for (const auto& s : d.samples()) {
    try {
      records.push_back(build_record(s, t, style, rv, taxonomy));
    } catch (const Error& e) {
      throw Error(e.kind(),
                  "sample \"" + s.id + "\": " + std::string(e.what()));
    }
  }
  return records;
}

std::vector<std::pair<Label, std::string>> candidate_set(
    const CweTaxonomy& taxonomy, const std::vector<std::uint32_t>& cwe_ids) {
  std::vector<std::pair<Label, std::string>> candidates;
  candidates.reserve(cwe_ids.size() + 1);
  for (auto id : cwe_ids) {
    if (!taxonomy.contains(id)) throw MissingDescriptionError(id);
    candidates.emplace_back(Label::cwe(id), taxonomy.description(id));
  }
  candidates.emplace_back(Label::benign(), kBenignResponse);
  return candidates;
}

}  // namespace svi
