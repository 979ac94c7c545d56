#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svi/corpus.hpp"
#include "svi/jsonl.hpp"
#include "svi/label.hpp"
#include "svi/taxonomy.hpp"
#include "svi/textsim.hpp"

namespace svi {

// Rows are ground truth, columns are predictions, in canonical label order.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<Label> labels);

  void add(const Label& truth, const Label& predicted,
           std::uint64_t count = 1);

  const std::vector<Label>& labels() const { return labels_; }
  std::uint64_t at(const Label& truth, const Label& predicted) const;
  std::uint64_t at(std::size_t truth_idx, std::size_t pred_idx) const {
    return counts_[truth_idx][pred_idx];
  }
  std::uint64_t total() const;
  std::uint64_t abstained() const { return abstained_; }
  void note_abstention() { ++abstained_; }

 private:
  std::size_t index(const Label& l) const;
  std::vector<Label> labels_;
  std::vector<std::vector<std::uint64_t>> counts_;
  std::uint64_t abstained_ = 0;
};

enum class MissingPolicy { Error, Abstain };

// Tallies predictions against ground truth. Every prediction id must exist
// in the truth dataset exactly once; truth samples without a prediction
// either raise MissingPredictionError or are counted as abstentions.
ConfusionMatrix confusion(const std::vector<PredictionRecord>& preds,
                          const Dataset& truth,
                          const std::vector<Label>& labels,
                          MissingPolicy missing = MissingPolicy::Error);

std::vector<Label> canonical_labels();

struct DistanceErrorHistogram {
  std::map<unsigned, std::uint64_t> by_distance;
  std::uint64_t unreachable = 0;  // CWE pairs with no taxonomy path
  std::uint64_t benign_confused = 0;

  std::uint64_t total() const;
};

// All percentages are kept at full precision here; rounding to two decimals
// (half up) happens once, when a report is serialized.
struct EvalReport {
  std::vector<Label> labels;
  std::map<Label, double> per_label_accuracy;  // row recall, percent
  double micro_accuracy = 0.0;    // plain trace/total, percent
  double balanced_accuracy = 0.0; // unweighted mean of per-label accuracy
  double macro_f1 = 0.0;
  double fnr = 0.0;  // vulnerable predicted benign / vulnerable
  double fpr = 0.0;  // benign predicted vulnerable / benign
  std::uint64_t total_samples = 0;
  std::uint64_t total_errors = 0;
  std::uint64_t abstained = 0;
  DistanceErrorHistogram errors_by_distance;
  std::vector<std::vector<std::uint64_t>> confusion_counts;
};

// Per-label accuracy, balanced accuracy, macro-F1 and the benign-collapse
// FNR/FPR. F1 for a label with an empty row or column is 0.
EvalReport metrics(const ConfusionMatrix& cm);

// Buckets every off-diagonal CWE-to-CWE cell by taxonomy distance; cells
// touching benign go to the benign bucket, pairs with no path to the
// unreachable bucket. Bucket mass always sums to the off-diagonal total.
DistanceErrorHistogram error_by_distance(const ConfusionMatrix& cm,
                                         const CweTaxonomy& taxonomy);

// Convenience: metrics + distance histogram in one report.
EvalReport evaluate(const ConfusionMatrix& cm, const CweTaxonomy& taxonomy);

enum class ReportFormat { Json, Csv, Markdown };

double round_percent(double value);  // half-up to 2 decimals

Json report_to_json(const EvalReport& r);
EvalReport report_from_json(const Json& j);

// Json: the full report. Csv: the distance histogram (`distance,count`).
// Markdown: headline metrics plus one table row per label.
std::string emit_report(const EvalReport& r, ReportFormat format);

}  // namespace svi
