#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "svi/backend.hpp"
#include "svi/preprocess.hpp"
#include "svi/prompt.hpp"

namespace svi {

// File-to-file stage functions; the CLI subcommands and the manifest runner
// share these so both paths always behave identically. Stages communicate
// via JSONL on disk only.

void stage_prep(const std::filesystem::path& in,
                const std::filesystem::path& out, const PreprocessConfig& cfg);

void stage_split(const std::filesystem::path& in,
                 const std::filesystem::path& train_out,
                 const std::filesystem::path& test_out,
                 std::size_t per_label_test, std::uint64_t seed);

void stage_prompt(const std::filesystem::path& in,
                  const std::filesystem::path& out, const PromptTemplate& t,
                  const PromptStyle& style, ResponseVariant rv,
                  const std::filesystem::path& taxonomy_path);

// Returns the number of failed samples (0 when everything succeeded);
// failures are reported on stderr keyed by sample id.
std::size_t stage_run(const std::filesystem::path& in,
                      const std::filesystem::path& out,
                      const BackendConfig& cfg, bool quiet);

void stage_match(const std::filesystem::path& in,
                 const std::filesystem::path& out,
                 const std::filesystem::path& taxonomy_path,
                 const std::vector<std::uint32_t>& cwe_ids);

void stage_eval(const std::filesystem::path& preds,
                const std::filesystem::path& truth,
                const std::filesystem::path& taxonomy_path,
                const std::filesystem::path& report_out, bool markdown,
                const std::optional<std::filesystem::path>& csv_dir);

// Full-pipeline configuration. Relative paths in the manifest file resolve
// against the manifest's own directory.
struct PipelineManifest {
  std::filesystem::path workdir;
  std::uint64_t seed = 42;
  std::filesystem::path dataset;
  std::filesystem::path taxonomy;

  PreprocessConfig prep;
  std::size_t per_label_test = 0;
  TemplateName template_name = TemplateName::Simple;
  StyleKind style = StyleKind::Hard;
  ResponseVariant response = ResponseVariant::DescriptionOnly;
  std::string soft_token = kDefaultSoftToken;
  BackendConfig backend;
  std::vector<std::uint32_t> cwe_ids{kDefaultCweIds.begin(),
                                     kDefaultCweIds.end()};
  bool markdown = false;
  std::optional<std::filesystem::path> csv_dir;

  static PipelineManifest load(const std::filesystem::path& path);

  // Stage artifact locations under workdir.
  std::filesystem::path prep_out() const { return workdir / "01_prep.jsonl"; }
  std::filesystem::path train_out() const {
    return workdir / "02_train.jsonl";
  }
  std::filesystem::path test_out() const { return workdir / "02_test.jsonl"; }
  std::filesystem::path prompts_train_out() const {
    return workdir / "03_prompts_train.jsonl";
  }
  std::filesystem::path prompts_test_out() const {
    return workdir / "03_prompts_test.jsonl";
  }
  std::filesystem::path raw_out() const { return workdir / "04_raw.jsonl"; }
  std::filesystem::path preds_out() const {
    return workdir / "05_preds.jsonl";
  }
  std::filesystem::path report_out() const {
    return workdir / "06_report.json";
  }
  std::filesystem::path run_log_path() const {
    return workdir / "run_log.json";
  }
};

// Executes prep, split, prompt, run, match, eval in order. With `resume`,
// stages whose recorded input and output content hashes still match are
// skipped. Writes a machine-readable run log (version, seed, hashes); the
// log contains no timestamps so reruns are byte-identical.
void run_pipeline(const PipelineManifest& manifest, bool resume, bool quiet);

}  // namespace svi
