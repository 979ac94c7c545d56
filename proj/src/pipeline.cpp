#include "svi/pipeline.hpp"

#include <functional>
#include <iostream>
#include <map>

#include "svi/corpus.hpp"
#include "svi/errors.hpp"
#include "svi/eval.hpp"
#include "svi/hash.hpp"
#include "svi/jsonl.hpp"
#include "svi/textsim.hpp"
#include "svi/version.hpp"

namespace svi {

namespace fs = std::filesystem;

void stage_prep(const fs::path& in, const fs::path& out,
                const PreprocessConfig& cfg) {
  std::vector<Json> records;
  for_each_jsonl(in, [&](std::size_t line, const Json& j) {
    if (!j.is_object() || !j.contains("code") || !j["code"].is_string()) {
      throw MalformedRecordError(line, "missing string field \"code\"");
    }
    Json rewritten = j;
    rewritten["code"] = preprocess(j["code"].get<std::string>(), cfg);
    records.push_back(std::move(rewritten));
  });
  write_jsonl(out, records);
}

void stage_split(const fs::path& in, const fs::path& train_out,
                 const fs::path& test_out, std::size_t per_label_test,
                 std::uint64_t seed) {
  const auto dataset = load_dataset(in);
  auto split = stratified_split(dataset, per_label_test, seed);
  save_dataset(train_out, split.train);
  save_dataset(test_out, split.test);
}

void stage_prompt(const fs::path& in, const fs::path& out,
                  const PromptTemplate& t, const PromptStyle& style,
                  ResponseVariant rv, const fs::path& taxonomy_path) {
  const auto taxonomy = CweTaxonomy::load(taxonomy_path);
  const auto dataset = load_dataset(in);
  const auto records = build_corpus(dataset, t, style, rv, taxonomy);

  std::vector<Json> lines;
  lines.reserve(records.size());
  for (const auto& r : records) {
    lines.push_back(Json{{"id", r.sample_id},
                         {"prompt", r.prompt},
                         {"expected", r.expected}});
  }
  write_jsonl(out, lines);
}

namespace {

std::vector<PromptRecord> load_prompts(const fs::path& in) {
  std::vector<PromptRecord> prompts;
  for_each_jsonl(in, [&](std::size_t line, const Json& j) {
    if (!j.contains("id") || !j.contains("prompt")) {
      throw MalformedRecordError(line, "prompt records need id and prompt");
    }
    PromptRecord p;
    p.sample_id = j["id"].get<std::string>();
    p.prompt = j["prompt"].get<std::string>();
    if (j.contains("expected")) p.expected = j["expected"].get<std::string>();
    prompts.push_back(std::move(p));
  });
  return prompts;
}

}  // namespace

std::size_t stage_run(const fs::path& in, const fs::path& out,
                      const BackendConfig& cfg, bool quiet) {
  const auto prompts = load_prompts(in);
  const auto backend = Backend::open(cfg);
  const auto outcome = backend.query_batch(prompts);

  std::vector<Json> lines;
  for (const auto& result : outcome.results) {
    if (result.has_value()) {
      lines.push_back(Json{{"id", result->sample_id},
                           {"raw", result->raw_text}});
    }
  }
  write_jsonl(out, lines);

  if (!quiet) {
    for (const auto& [id, message] : outcome.errors) {
      std::cerr << "sample \"" << id << "\": " << message << '\n';
    }
  }
  return outcome.errors.size();
}

void stage_match(const fs::path& in, const fs::path& out,
                 const fs::path& taxonomy_path,
                 const std::vector<std::uint32_t>& cwe_ids) {
  const auto taxonomy = CweTaxonomy::load(taxonomy_path);
  const auto candidates = candidate_set(taxonomy, cwe_ids);

  std::vector<Json> lines;
  for_each_jsonl(in, [&](std::size_t line, const Json& j) {
    if (!j.contains("id") || !j.contains("raw")) {
      throw MalformedRecordError(line, "raw records need id and raw");
    }
    const auto raw = j["raw"].get<std::string>();
    const auto result = match(raw, candidates);
    lines.push_back(Json{{"id", j["id"].get<std::string>()},
                         {"raw", raw},
                         {"label", result.label.to_string()},
                         {"word_overlap", result.word_overlap},
                         {"bleu", result.bleu},
                         {"tie_broken_by", to_string(result.tie_broken_by)}});
  });
  write_jsonl(out, lines);
}

void stage_eval(const fs::path& preds_path, const fs::path& truth_path,
                const fs::path& taxonomy_path, const fs::path& report_out,
                bool markdown, const std::optional<fs::path>& csv_dir) {
  const auto taxonomy = CweTaxonomy::load(taxonomy_path);
  const auto truth = load_dataset(truth_path);

  std::vector<PredictionRecord> preds;
  for_each_jsonl(preds_path, [&](std::size_t line, const Json& j) {
    if (!j.contains("id") || !j.contains("label")) {
      throw MalformedRecordError(line, "prediction records need id and label");
    }
    PredictionRecord p;
    p.id = j["id"].get<std::string>();
    p.label = Label::parse(j["label"].get<std::string>());
    if (j.contains("raw")) p.raw = j["raw"].get<std::string>();
    if (j.contains("word_overlap")) {
      p.word_overlap = j["word_overlap"].get<std::size_t>();
    }
    if (j.contains("bleu")) p.bleu = j["bleu"].get<double>();
    if (j.contains("tie_broken_by")) {
      p.tie_broken_by =
          tie_break_from_string(j["tie_broken_by"].get<std::string>());
    }
    preds.push_back(std::move(p));
  });

  const auto cm = confusion(preds, truth, canonical_labels());
  const auto report = evaluate(cm, taxonomy);

  write_text_file(report_out, emit_report(report, ReportFormat::Json));
  if (markdown) {
    auto md_path = report_out;
    md_path.replace_extension(".md");
    write_text_file(md_path, emit_report(report, ReportFormat::Markdown));
  }
  if (csv_dir) {
    fs::create_directories(*csv_dir);
    write_text_file(*csv_dir / "distance_histogram.csv",
                    emit_report(report, ReportFormat::Csv));

    std::string per_label = "label,accuracy\n";
    for (const auto& l : report.labels) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%s,%.2f\n", l.to_string().c_str(),
                    round_percent(report.per_label_accuracy.at(l)));
      per_label += buf;
    }
    write_text_file(*csv_dir / "per_label_accuracy.csv", per_label);

    std::string confusion_csv = "truth\\pred";
    for (const auto& l : report.labels) confusion_csv += "," + l.to_string();
    confusion_csv += "\n";
    for (std::size_t i = 0; i < report.labels.size(); ++i) {
      confusion_csv += report.labels[i].to_string();
      for (std::size_t j = 0; j < report.labels.size(); ++j) {
        confusion_csv += "," + std::to_string(report.confusion_counts[i][j]);
      }
      confusion_csv += "\n";
    }
    write_text_file(*csv_dir / "confusion.csv", confusion_csv);
  }
}

PipelineManifest PipelineManifest::load(const fs::path& path) {
  Json doc;
  try {
    doc = Json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Data,
                "manifest " + path.string() + ": " + e.what());
  }

  const fs::path base = path.has_parent_path() ? path.parent_path() : ".";
  auto resolve = [&](const std::string& p) -> fs::path {
    fs::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };

  PipelineManifest m;
  m.workdir = resolve(doc.at("workdir").get<std::string>());
  m.seed = doc.value("seed", 42u);
  m.dataset = resolve(doc.at("dataset").get<std::string>());
  m.taxonomy = resolve(doc.at("taxonomy").get<std::string>());

  if (doc.contains("prep")) {
    const auto& p = doc["prep"];
    m.prep.strip_comments = !p.value("keep_comments", false);
    const bool keep_ws = p.value("keep_whitespace", false);
    m.prep.collapse_whitespace = !keep_ws;
    m.prep.normalize_indent = !keep_ws;
  }
  m.per_label_test = doc.at("split").at("per_label_test").get<std::size_t>();

  if (doc.contains("prompt")) {
    const auto& p = doc["prompt"];
    m.template_name = template_from_string(p.value("template", "simple"));
    m.style = style_from_string(p.value("style", "hard"));
    m.response = response_from_string(p.value("response", "desc"));
    m.soft_token = p.value("soft_token", kDefaultSoftToken);
  }

  const auto& r = doc.at("run");
  const auto backend_kind = r.value("backend", "replay");
  if (backend_kind == "replay") {
    m.backend.kind = BackendKind::Replay;
    m.backend.replay_file = resolve(r.at("replay_file").get<std::string>());
  } else if (backend_kind == "http") {
    m.backend.kind = BackendKind::Http;
    m.backend.endpoint = r.at("endpoint").get<std::string>();
    m.backend.model_name = r.value("model", "");
  } else {
    throw Error(ErrorKind::Data, "unknown backend \"" + backend_kind + "\"");
  }
  m.backend.temperature = r.value("temperature", 0.0);
  m.backend.max_output_tokens = r.value("max_tokens", 256u);
  m.backend.concurrency_limit = r.value("concurrency", 1u);
  m.backend.max_retries = r.value("retries", 3u);

  if (doc.contains("labels")) {
    m.cwe_ids = doc["labels"].get<std::vector<std::uint32_t>>();
  }
  if (doc.contains("eval")) {
    m.markdown = doc["eval"].value("markdown", false);
    if (doc["eval"].contains("csv_dir")) {
      m.csv_dir = resolve(doc["eval"]["csv_dir"].get<std::string>());
    }
  }
  return m;
}

namespace {

struct Stage {
  std::string name;
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  std::function<void()> execute;
};

std::string content_hash(const fs::path& path) {
  return "fnv1a:" + hex64(fnv1a64(read_text_file(path)));
}

Json hash_map(const std::vector<fs::path>& paths) {
  Json out = Json::object();
  for (const auto& p : paths) out[p.string()] = content_hash(p);
  return out;
}

}  // namespace

void run_pipeline(const PipelineManifest& m, bool resume, bool quiet) {
  fs::create_directories(m.workdir);

  Json previous;
  if (resume && fs::exists(m.run_log_path())) {
    try {
      previous = Json::parse(read_text_file(m.run_log_path()));
    } catch (const std::exception&) {
      previous = Json();  // unreadable log: rerun everything
    }
  }

  const PromptTemplate tmpl = PromptTemplate::builtin(m.template_name);
  PromptStyle style{m.style, m.soft_token, m.seed};

  std::vector<Stage> stages;
  stages.push_back(Stage{
      "prep",
      {m.dataset},
      {m.prep_out()},
      [&] { stage_prep(m.dataset, m.prep_out(), m.prep); }});
  stages.push_back(Stage{
      "split",
      {m.prep_out()},
      {m.train_out(), m.test_out()},
      [&] {
        stage_split(m.prep_out(), m.train_out(), m.test_out(),
                    m.per_label_test, m.seed);
      }});
  stages.push_back(Stage{
      "prompt",
      {m.train_out(), m.test_out(), m.taxonomy},
      {m.prompts_train_out(), m.prompts_test_out()},
      [&] {
        stage_prompt(m.train_out(), m.prompts_train_out(), tmpl, style,
                     m.response, m.taxonomy);
        stage_prompt(m.test_out(), m.prompts_test_out(), tmpl, style,
                     m.response, m.taxonomy);
      }});

  Stage run_stage{"run", {m.prompts_test_out()}, {m.raw_out()}, nullptr};
  if (m.backend.kind == BackendKind::Replay) {
    run_stage.inputs.push_back(m.backend.replay_file);
  }
  run_stage.execute = [&] {
    const auto failures = stage_run(m.prompts_test_out(), m.raw_out(),
                                    m.backend, quiet);
    if (failures > 0) {
      throw Error(ErrorKind::Backend,
                  std::to_string(failures) + " sample(s) failed");
    }
  };
  stages.push_back(std::move(run_stage));

  stages.push_back(Stage{
      "match",
      {m.raw_out(), m.taxonomy},
      {m.preds_out()},
      [&] { stage_match(m.raw_out(), m.preds_out(), m.taxonomy, m.cwe_ids); }});

  Stage eval_stage{"eval",
                   {m.preds_out(), m.test_out(), m.taxonomy},
                   {m.report_out()},
                   nullptr};
  if (m.markdown) {
    auto md = m.report_out();
    md.replace_extension(".md");
    eval_stage.outputs.push_back(md);
  }
  eval_stage.execute = [&] {
    stage_eval(m.preds_out(), m.test_out(), m.taxonomy, m.report_out(),
               m.markdown, m.csv_dir);
  };
  stages.push_back(std::move(eval_stage));

  Json log{{"version", kVersion},
           {"seed", m.seed},
           {"stages", Json::array()}};

  for (auto& stage : stages) {
    for (const auto& input : stage.inputs) {
      if (!fs::exists(input)) {
        throw Error(ErrorKind::Data, "stage " + stage.name +
                                         ": missing input " + input.string());
      }
    }
    const Json input_hashes = hash_map(stage.inputs);

    bool skip = false;
    if (resume && previous.contains("stages")) {
      for (const auto& prev : previous["stages"]) {
        if (prev.value("name", "") != stage.name) continue;
        if (prev.value("inputs", Json()) != input_hashes) break;
        skip = true;
        for (const auto& out : stage.outputs) {
          if (!fs::exists(out) ||
              prev.value("outputs", Json()).value(out.string(), "") !=
                  content_hash(out)) {
            skip = false;
            break;
          }
        }
        break;
      }
    }

    if (!skip) {
      try {
        stage.execute();
      } catch (const Error& e) {
        throw Error(e.kind(), "stage " + stage.name + ": " + e.what());
      }
    }
    if (!quiet) {
      std::cerr << "stage " << stage.name << (skip ? ": up to date" : ": done")
                << '\n';
    }

    log["stages"].push_back(Json{{"name", stage.name},
                                 {"skipped", skip},
                                 {"inputs", input_hashes},
                                 {"outputs", hash_map(stage.outputs)}});
  }

  write_text_file(m.run_log_path(), log.dump(2) + "\n");
}

}  // namespace svi
