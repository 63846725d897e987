#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "specdec/metrics.hpp"
#include "specdec/records.hpp"
#include "specdec/tabed.hpp"
#include "specdec/transform.hpp"

namespace specdec {

// --- Experiment configuration (JSON-backed; schema documented in README) ---

struct ModelSpec {
  enum class Kind { kKgram, kKgramSnapshot, kOracle };
  Kind kind = Kind::kKgram;
  std::filesystem::path corpus;  // kgram: training corpus (one doc per line)
  int k = 2;
  double lambda = 0.05;
  std::filesystem::path snapshot;  // kgram_snapshot: saved model JSON
  std::uint64_t oracle_seed = 0;   // oracle: Dirichlet seed
  double concentration = 0.5;      // oracle: Dirichlet concentration
};

struct SourceSpec {
  std::string name;
  ModelSpec model;
  TransformKind transform = TransformKind::kIdentity;
  TransformParams transform_params;
};

struct PromptSpec {
  enum class Kind { kCorpusLines, kRandom };
  Kind kind = Kind::kRandom;
  std::filesystem::path path;  // corpus_lines: file to draw prompts from
  int count = 8;
  int prefix_tokens = 12;  // corpus_lines: tokens kept per line
  int text_length = 8;     // random: length of the TEXT segment
  int visual_length = 0;   // both: optional random VISUAL segment length
};

struct DraftingSpec {
  enum class Type { kSingle, kTabed };
  Type type = Type::kSingle;
  std::string source;  // single: which source drafts
  WeightPolicy policy = WeightPolicy::grid(10);
  SelectionCriterion criterion = SelectionCriterion::kSoftKl;
  std::size_t window = kWindowAll;
};

struct VerificationSpec {
  enum class Kind { kLinear, kTree };
  Kind kind = Kind::kLinear;
  int tree_width = 2;
};

struct ExperimentConfig {
  std::string scenario;
  std::string method;
  std::uint64_t seed = 0;
  int vocab_size = 128;
  ModelSpec target;
  std::vector<SourceSpec> sources;
  DraftingSpec drafting;
  VerificationSpec verification;
  DecodeConfig decode;
  PromptSpec prompts;
  double latency_ratio = 0.063;
  std::string summary_filename = "summary.json";
  std::string weights_filename = "weights.csv";
  std::filesystem::path base_dir;  // directory relative paths resolve against
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::filesystem::path& base_dir);

// --- Running ---

struct PromptReport {
  int prompt_index = 0;
  int tokens_generated = 0;
  double block_efficiency = 0.0;
  RunRecords records;
};

struct RunReport {
  int schema_version = 1;
  std::string scenario;
  std::string method;
  int gamma = 5;
  std::string verification = "linear";  // "linear" or "tree"
  int tree_width = 1;
  std::uint64_t seed = 0;
  double latency_ratio = 0.063;
  double block_efficiency = 0.0;  // pooled over all prompts' blocks
  double modeled_speedup = 0.0;
  std::vector<PromptReport> prompts;
};

// Build models, decode every prompt, pool the metrics. Pure compute — the
// write_* functions below handle emission.
RunReport run_experiment(const ExperimentConfig& cfg);

// Instantiate a model spec (shared so sources can alias the target).
std::shared_ptr<const SequenceModel> build_model(const ModelSpec& spec, int vocab_size,
                                                 const std::filesystem::path& base_dir);
std::vector<Context> build_prompts(const PromptSpec& spec, int vocab_size,
                                   std::uint64_t seed,
                                   const std::filesystem::path& base_dir);

// Byte-stable JSON summary (schema_version 1) and the weight-trajectory CSV
// with columns block_index, position, w_0..w_{m-1}, accepted_count.
std::string summary_to_json(const RunReport& report);
std::string weights_to_csv(const RunReport& report);
void write_run_outputs(const RunReport& report, const ExperimentConfig& cfg,
                       const std::filesystem::path& out_dir);
RunReport load_summary(const std::filesystem::path& path);

// --- Comparison across runs ---

struct ComparisonCell {
  double block_efficiency = 0.0;
  double modeled_speedup = 0.0;
  int rank = 1;  // 1 = best in scenario; ties share a rank
};

struct ComparisonTable {
  std::vector<std::string> scenarios;                // sorted
  std::vector<std::string> methods;                  // sorted
  std::vector<std::vector<ComparisonCell>> cells;    // [method][scenario]
};

// Rank methods per scenario by block efficiency (higher is better). Every
// method must appear exactly once in every scenario.
ComparisonTable compare_report(const std::vector<RunReport>& reports);

std::string comparison_to_text(const ComparisonTable& table);
std::string comparison_to_csv(const ComparisonTable& table);
std::string comparison_to_json(const ComparisonTable& table);

}  // namespace specdec
