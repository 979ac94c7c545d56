#include "svi/textsim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

#include "svi/errors.hpp"

namespace svi {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

// n-grams keyed as unit-separator joined strings.
std::unordered_map<std::string, std::size_t> ngram_counts(
    const std::vector<std::string>& tokens, unsigned n) {
  std::unordered_map<std::string, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (unsigned k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key.append(tokens[i + k]);
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

double bleu(const std::vector<std::string>& candidate,
            const std::vector<std::string>& reference, unsigned max_n) {
  if (reference.empty()) throw EmptyReferenceError();
  if (candidate.empty()) return 0.0;
  if (max_n == 0) max_n = 1;

  const std::size_t c = candidate.size();
  const std::size_t r = reference.size();
  const unsigned order = static_cast<unsigned>(
      std::min<std::size_t>(max_n, c));

  double log_sum = 0.0;
  for (unsigned n = 1; n <= order; ++n) {
    const auto cand = ngram_counts(candidate, n);
    const auto ref = ngram_counts(reference, n);
    std::size_t matched = 0;
    for (const auto& [gram, count] : cand) {
      auto it = ref.find(gram);
      if (it != ref.end()) matched += std::min(count, it->second);
    }
    if (matched == 0) return 0.0;
    const std::size_t total = c - n + 1;
    log_sum += std::log(static_cast<double>(matched) /
                        static_cast<double>(total));
  }
  double score = std::exp(log_sum / order);

  if (c < r) {
    score *= std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  }
  return score;
}

std::size_t word_overlap(const std::vector<std::string>& generated,
                         const std::vector<std::string>& candidate) {
  std::unordered_map<std::string, std::size_t> gen_counts;
  for (const auto& t : generated) ++gen_counts[t];
  std::size_t overlap = 0;
  std::unordered_map<std::string, std::size_t> used;
  for (const auto& t : candidate) {
    auto it = gen_counts.find(t);
    if (it != gen_counts.end() && used[t] < it->second) {
      ++used[t];
      ++overlap;
    }
  }
  return overlap;
}

std::string to_string(TieBreak t) {
  switch (t) {
    case TieBreak::None:
      return "none";
    case TieBreak::Bleu:
      return "bleu";
    case TieBreak::LabelOrder:
      return "label_order";
  }
  return "none";
}

TieBreak tie_break_from_string(const std::string& text) {
  if (text == "none") return TieBreak::None;
  if (text == "bleu") return TieBreak::Bleu;
  if (text == "label_order") return TieBreak::LabelOrder;
  throw Error(ErrorKind::Data, "unknown tie break \"" + text + "\"");
}

MatchResult match(
    const std::string& generated,
    const std::vector<std::pair<Label, std::string>>& candidates) {
  if (candidates.empty()) throw NoCandidatesError();

  const auto gen = tokenize(generated);

  std::vector<std::size_t> overlaps(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    overlaps[i] = word_overlap(gen, tokenize(candidates[i].second));
  }
  const std::size_t best_overlap =
      *std::max_element(overlaps.begin(), overlaps.end());

  std::vector<std::size_t> contenders;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (overlaps[i] == best_overlap) contenders.push_back(i);
  }

  auto finish = [&](std::size_t idx, TieBreak tie, double score) {
    return MatchResult{candidates[idx].first, overlaps[idx], score, tie};
  };

  if (contenders.size() == 1) {
    const auto idx = contenders.front();
    return finish(idx, TieBreak::None,
                  bleu(gen, tokenize(candidates[idx].second)));
  }

  std::vector<double> scores(contenders.size());
  for (std::size_t k = 0; k < contenders.size(); ++k) {
    scores[k] = bleu(gen, tokenize(candidates[contenders[k]].second));
  }
  const double best_score = *std::max_element(scores.begin(), scores.end());

  std::vector<std::size_t> finalists;
  for (std::size_t k = 0; k < contenders.size(); ++k) {
    if (scores[k] == best_score) finalists.push_back(contenders[k]);
  }
  if (finalists.size() == 1) {
    return finish(finalists.front(), TieBreak::Bleu, best_score);
  }

  const auto winner =
      *std::min_element(finalists.begin(), finalists.end(),
                        [&](std::size_t a, std::size_t b) {
                          return candidates[a].first < candidates[b].first;
                        });
  return finish(winner, TieBreak::LabelOrder, best_score);
}

}  // namespace svi
