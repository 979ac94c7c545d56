#include "svi/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "svi/errors.hpp"

namespace svi {

ConfusionMatrix::ConfusionMatrix(std::vector<Label> labels)
    : labels_(std::move(labels)),
      counts_(labels_.size(), std::vector<std::uint64_t>(labels_.size(), 0)) {}

std::size_t ConfusionMatrix::index(const Label& l) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == l) return i;
  }
  throw UnknownLabelError(l.to_string());
}

void ConfusionMatrix::add(const Label& truth, const Label& predicted,
                          std::uint64_t count) {
  counts_[index(truth)][index(predicted)] += count;
}

std::uint64_t ConfusionMatrix::at(const Label& truth,
                                  const Label& predicted) const {
  return counts_[index(truth)][index(predicted)];
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t sum = 0;
  for (const auto& row : counts_) {
    for (auto c : row) sum += c;
  }
  return sum;
}

std::vector<Label> canonical_labels() {
  std::vector<Label> labels;
  for (auto id : kDefaultCweIds) labels.push_back(Label::cwe(id));
  labels.push_back(Label::benign());
  return labels;
}

ConfusionMatrix confusion(const std::vector<PredictionRecord>& preds,
                          const Dataset& truth,
                          const std::vector<Label>& labels,
                          MissingPolicy missing) {
  std::unordered_map<std::string, const CodeSample*> truth_by_id;
  for (const auto& s : truth.samples()) truth_by_id.emplace(s.id, &s);

  ConfusionMatrix cm(labels);
  std::unordered_set<std::string> seen;
  for (const auto& p : preds) {
    auto it = truth_by_id.find(p.id);
    if (it == truth_by_id.end()) throw UnknownSampleError(p.id);
    if (!seen.insert(p.id).second) throw DuplicateIdError(p.id);
    cm.add(it->second->label, p.label);
  }

  for (const auto& s : truth.samples()) {
    if (seen.count(s.id)) continue;
    if (missing == MissingPolicy::Error) throw MissingPredictionError(s.id);
    cm.note_abstention();
  }
  return cm;
}

std::uint64_t DistanceErrorHistogram::total() const {
  std::uint64_t sum = unreachable + benign_confused;
  for (const auto& [d, c] : by_distance) sum += c;
  return sum;
}

EvalReport metrics(const ConfusionMatrix& cm) {
  const auto& labels = cm.labels();
  const std::uint64_t total = cm.total();
  if (total == 0) throw EmptyMatrixError();

  EvalReport r;
  r.labels = labels;
  r.total_samples = total;
  r.abstained = cm.abstained();

  std::uint64_t trace = 0;
  double accuracy_sum = 0.0;
  double f1_sum = 0.0;
  const std::size_t k = labels.size();

  for (std::size_t i = 0; i < k; ++i) {
    std::uint64_t row_sum = 0, col_sum = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row_sum += cm.at(i, j);
      col_sum += cm.at(j, i);
    }
    const std::uint64_t tp = cm.at(i, i);
    trace += tp;

    const double recall =
        row_sum ? static_cast<double>(tp) / static_cast<double>(row_sum) : 0.0;
    r.per_label_accuracy[labels[i]] = 100.0 * recall;
    accuracy_sum += 100.0 * recall;

    double f1 = 0.0;
    if (row_sum > 0 && col_sum > 0) {
      const double precision =
          static_cast<double>(tp) / static_cast<double>(col_sum);
      if (precision + recall > 0.0) {
        f1 = 2.0 * precision * recall / (precision + recall);
      }
    }
    f1_sum += f1;
  }

  r.micro_accuracy =
      100.0 * static_cast<double>(trace) / static_cast<double>(total);
  r.balanced_accuracy = accuracy_sum / static_cast<double>(k);
  r.macro_f1 = 100.0 * f1_sum / static_cast<double>(k);
  r.total_errors = total - trace;

  // FNR/FPR on the benign-vs-vulnerable collapse: predicting the wrong CWE
  // still counts as a detected vulnerability.
  std::uint64_t vuln_total = 0, vuln_pred_benign = 0;
  std::uint64_t benign_total = 0, benign_pred_vuln = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto c = cm.at(i, j);
      if (labels[i].is_benign()) {
        benign_total += c;
        if (!labels[j].is_benign()) benign_pred_vuln += c;
      } else {
        vuln_total += c;
        if (labels[j].is_benign()) vuln_pred_benign += c;
      }
    }
  }
  r.fnr = vuln_total ? 100.0 * static_cast<double>(vuln_pred_benign) /
                           static_cast<double>(vuln_total)
                     : 0.0;
  r.fpr = benign_total ? 100.0 * static_cast<double>(benign_pred_vuln) /
                             static_cast<double>(benign_total)
                       : 0.0;

  r.confusion_counts.assign(k, std::vector<std::uint64_t>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) r.confusion_counts[i][j] = cm.at(i, j);
  }
  return r;
}

DistanceErrorHistogram error_by_distance(const ConfusionMatrix& cm,
                                         const CweTaxonomy& taxonomy) {
  DistanceErrorHistogram h;
  const auto& labels = cm.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (i == j) continue;
      const auto c = cm.at(i, j);
      if (c == 0) continue;
      if (labels[i].is_benign() || labels[j].is_benign()) {
        h.benign_confused += c;
        continue;
      }
      const auto d = taxonomy.distance(labels[i].cwe_id(),
                                       labels[j].cwe_id());
      if (d.has_value()) {
        h.by_distance[*d] += c;
      } else {
        h.unreachable += c;
      }
    }
  }
  return h;
}

EvalReport evaluate(const ConfusionMatrix& cm, const CweTaxonomy& taxonomy) {
  EvalReport r = metrics(cm);
  r.errors_by_distance = error_by_distance(cm, taxonomy);
  return r;
}

double round_percent(double value) {
  return static_cast<double>(std::llround(value * 100.0)) / 100.0;
}

namespace {

std::string fixed2(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

}  // namespace

Json report_to_json(const EvalReport& r) {
  Json per_label = Json::object();
  for (const auto& l : r.labels) {
    per_label[l.to_string()] = round_percent(r.per_label_accuracy.at(l));
  }

  Json by_distance = Json::object();
  for (const auto& [d, c] : r.errors_by_distance.by_distance) {
    by_distance[std::to_string(d)] = c;
  }

  Json labels = Json::array();
  for (const auto& l : r.labels) labels.push_back(l.to_string());

  return Json{
      {"total_samples", r.total_samples},
      {"abstained", r.abstained},
      {"micro_accuracy", round_percent(r.micro_accuracy)},
      {"balanced_accuracy", round_percent(r.balanced_accuracy)},
      {"macro_f1", round_percent(r.macro_f1)},
      {"fnr", round_percent(r.fnr)},
      {"fpr", round_percent(r.fpr)},
      {"per_label_accuracy", per_label},
      {"labels", labels},
      {"confusion", r.confusion_counts},
      {"errors",
       Json{{"total", r.total_errors},
            {"by_distance", by_distance},
            {"unreachable", r.errors_by_distance.unreachable},
            {"benign_confused", r.errors_by_distance.benign_confused}}},
  };
}

EvalReport report_from_json(const Json& j) {
  EvalReport r;
  for (const auto& text : j.at("labels")) {
    r.labels.push_back(Label::parse(text.get<std::string>()));
  }
  for (const auto& l : r.labels) {
    r.per_label_accuracy[l] =
        j.at("per_label_accuracy").at(l.to_string()).get<double>();
  }
  r.total_samples = j.at("total_samples").get<std::uint64_t>();
  r.abstained = j.at("abstained").get<std::uint64_t>();
  r.micro_accuracy = j.at("micro_accuracy").get<double>();
  r.balanced_accuracy = j.at("balanced_accuracy").get<double>();
  r.macro_f1 = j.at("macro_f1").get<double>();
  r.fnr = j.at("fnr").get<double>();
  r.fpr = j.at("fpr").get<double>();
  r.confusion_counts =
      j.at("confusion").get<std::vector<std::vector<std::uint64_t>>>();
  const auto& errors = j.at("errors");
  r.total_errors = errors.at("total").get<std::uint64_t>();
  for (const auto& [key, value] : errors.at("by_distance").items()) {
    r.errors_by_distance.by_distance[static_cast<unsigned>(
        std::stoul(key))] = value.get<std::uint64_t>();
  }
  r.errors_by_distance.unreachable =
      errors.at("unreachable").get<std::uint64_t>();
  r.errors_by_distance.benign_confused =
      errors.at("benign_confused").get<std::uint64_t>();
  return r;
}

std::string emit_report(const EvalReport& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json:
      return report_to_json(r).dump(2) + "\n";

    case ReportFormat::Csv: {
      std::ostringstream out;
      out << "distance,count\n";
      for (const auto& [d, c] : r.errors_by_distance.by_distance) {
        out << d << ',' << c << '\n';
      }
      out << "unreachable," << r.errors_by_distance.unreachable << '\n';
      out << "benign," << r.errors_by_distance.benign_confused << '\n';
      return out.str();
    }

    case ReportFormat::Markdown: {
      std::ostringstream out;
      out << "# Evaluation report\n\n";
      out << "| metric | value |\n|---|---|\n";
      out << "| samples | " << r.total_samples << " |\n";
      out << "| balanced accuracy | " << fixed2(round_percent(
          r.balanced_accuracy)) << " |\n";
      out << "| micro accuracy | " << fixed2(round_percent(r.micro_accuracy))
          << " |\n";
      out << "| macro F1 | " << fixed2(round_percent(r.macro_f1)) << " |\n";
      out << "| FNR | " << fixed2(round_percent(r.fnr)) << " |\n";
      out << "| FPR | " << fixed2(round_percent(r.fpr)) << " |\n\n";
      out << "| label | accuracy |\n|---|---|\n";
      for (const auto& l : r.labels) {
        out << "| " << l.to_string() << " | "
            << fixed2(round_percent(r.per_label_accuracy.at(l))) << " |\n";
      }
      return out.str();
    }
  }
  return {};
}

}  // namespace svi
