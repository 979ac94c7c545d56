#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "svi/label.hpp"

namespace svi {

// Canonical tokenizer used everywhere text is compared: lowercase, split on
// any non-alphanumeric byte, drop empties.
std::vector<std::string> tokenize(const std::string& text);

// Sentence BLEU with modified n-gram precision and brevity penalty.
// The order is clamped to the candidate length (descriptions are short);
// no smoothing, so any zero precision gives a zero score. An empty
// candidate scores 0. Throws EmptyReferenceError when the reference has
// no tokens.
double bleu(const std::vector<std::string>& candidate,
            const std::vector<std::string>& reference, unsigned max_n = 4);

// Size of the multiset intersection of the two token lists.
std::size_t word_overlap(const std::vector<std::string>& generated,
                         const std::vector<std::string>& candidate);

enum class TieBreak { None, Bleu, LabelOrder };

std::string to_string(TieBreak t);
TieBreak tie_break_from_string(const std::string& text);

struct MatchResult {
  Label label = Label::benign();
  std::size_t word_overlap = 0;
  double bleu = 0.0;
  TieBreak tie_broken_by = TieBreak::None;
};

// Maps free-form model text onto the closest candidate description:
// highest word overlap first, ties resolved by BLEU against the candidate
// description, remaining ties by label order (smallest CWE id, benign
// last). Candidates must include the benign response.
MatchResult match(const std::string& generated,
                  const std::vector<std::pair<Label, std::string>>& candidates);

// Matched prediction for one sample, as written to predictions JSONL.
struct PredictionRecord {
  std::string id;
  std::string raw;
  Label label = Label::benign();
  std::size_t word_overlap = 0;
  double bleu = 0.0;
  TieBreak tie_broken_by = TieBreak::None;
};

}  // namespace svi
