#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "svi/corpus.hpp"
#include "svi/taxonomy.hpp"

namespace svi {

inline constexpr const char* kCodePlaceholder = "[CODE]";
inline constexpr const char* kDefaultSoftToken = "[SOFT]";

enum class TemplateName { Simple, CppSpecified, CodeT5Style, Descriptive };

struct PromptTemplate {
  TemplateName name = TemplateName::Simple;
  std::string text;  // must contain [CODE] exactly once

  static PromptTemplate builtin(TemplateName name);
  static PromptTemplate custom(const std::string& text);
};

TemplateName template_from_string(const std::string& text);
std::string to_string(TemplateName name);

enum class StyleKind { Hard, Soft, Mixed };

StyleKind style_from_string(const std::string& text);
std::string to_string(StyleKind kind);

struct PromptStyle {
  StyleKind kind = StyleKind::Hard;
  std::string soft_token = kDefaultSoftToken;
  std::uint64_t seed = 0;  // mixed placement only
};

enum class ResponseVariant { IdWithDescription, IdOnly, DescriptionOnly };

ResponseVariant response_from_string(const std::string& text);
std::string to_string(ResponseVariant rv);

struct PromptRecord {
  std::string sample_id;
  std::string prompt;
  std::string expected;
  PromptStyle style;
  PromptTemplate tmpl;
};

// Produces the query text, still containing [CODE]:
//   hard  - template text verbatim
//   soft  - every query token replaced by the soft token, count preserved
//   mixed - ceil(n/2) soft tokens inserted at distinct token boundaries
//           chosen by a PRNG seeded with style.seed
// Throws SoftTokenCollisionError when the soft token already occurs in the
// template text.
std::string render_query(const PromptTemplate& t, const PromptStyle& style);

// Per-record seed for mixed placement so corpora rebuild identically
// record by record.
std::uint64_t record_seed(std::uint64_t corpus_seed,
                          const std::string& sample_id);

// Substitutes the (already preprocessed) code into the rendered query and
// attaches the expected response text drawn from the taxonomy description
// (or the benign response). Mixed placement derives its seed from
// (style.seed, s.id).
PromptRecord build_record(const CodeSample& s, const PromptTemplate& t,
                          const PromptStyle& style, ResponseVariant rv,
                          const CweTaxonomy& taxonomy);

// build_record over every sample, input order preserved. Errors carry the
// offending sample id.
std::vector<PromptRecord> build_corpus(const Dataset& d,
                                       const PromptTemplate& t,
                                       const PromptStyle& style,
                                       ResponseVariant rv,
                                       const CweTaxonomy& taxonomy);

// The matcher's candidate set: one description per configured CWE plus the
// benign response. This is exactly the closed set build_record draws
// DescriptionOnly responses from.
std::vector<std::pair<Label, std::string>> candidate_set(
    const CweTaxonomy& taxonomy, const std::vector<std::uint32_t>& cwe_ids);

}  // namespace svi
