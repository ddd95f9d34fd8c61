#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bicorpus/manifest.hpp"

namespace bicorpus {

// Stages in execution order.
enum class Stage {
  kIngest,
  kFilter,
  kDedup,
  kSample,
  kTrainVocab,
  kConvertVocab,
  kGenerateExamples,
  kStats,
};

const std::vector<Stage>& all_stages();
std::string_view stage_name(Stage stage);
// Accepts the subcommand spellings ("train-vocab", "generate-examples", ...).
Stage parse_stage(std::string_view name);

struct RunOptions {
  unsigned threads = 1;
  // Skip a stage whose recorded input digest matches and whose outputs exist.
  bool resume = false;
  // Reports carry a constant timestamp instead of the wall clock.
  bool fixed_clock = false;
  std::ostream* log = nullptr;
};

struct StageOutcome {
  Stage stage;
  bool skipped = false;
  std::vector<std::filesystem::path> outputs;  // relative to the output directory
};

struct RunResult {
  std::vector<StageOutcome> stages;
};

// Raised when a stage fails; files the stage had already written are renamed
// with a ".partial" suffix.
class StageFailure : public std::runtime_error {
 public:
  StageFailure(Stage stage, const std::string& message)
      : std::runtime_error(std::string(stage_name(stage)) + ": " + message), stage_(stage) {}
  Stage stage() const noexcept { return stage_; }

 private:
  Stage stage_;
};

// Validates the manifest (throws Error before anything is written), then runs
// the requested stages in pipeline order. Each stage reads the outputs of the
// earlier stages from the output directory:
//
//   ingest/<source>.docs      filter/<source>.docs      dedup/<source>.docs
//   vocab/sample.txt          vocab/merges.txt          vocab/bpe_pieces.txt
//   vocab/vocab.txt           examples/<source>.p<k>.bin
//   reports/*.kv, reports/*.txt, stamps/<stage>.stamp
RunResult run_pipeline(const Manifest& manifest, const std::vector<Stage>& stages,
                       const RunOptions& options = {});

}  // namespace bicorpus
