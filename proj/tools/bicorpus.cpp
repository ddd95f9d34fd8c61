// bicorpus: manifest-driven bilingual pre-training corpus pipeline.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bicorpus/error.hpp"
#include "bicorpus/manifest.hpp"
#include "bicorpus/pipeline.hpp"
#include "bicorpus/stats.hpp"
#include "bicorpus/tokenizer.hpp"
#include "bicorpus/vocabulary.hpp"

namespace fs = std::filesystem;
using namespace bicorpus;

namespace {

constexpr int kExitStageFailed = 1;
constexpr int kExitInvalid = 2;

unsigned default_threads() {
  if (const char* env = std::getenv("BICORPUS_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid BICORPUS_THREADS='" << env << "'\n";
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Options shared by the manifest-driven subcommands.
struct StageOptions {
  fs::path manifest;
  std::vector<std::string> overrides;  // section.key=value
  std::optional<fs::path> output;
  std::optional<std::uint64_t> seed;
  unsigned threads = default_threads();
  bool resume = false;
  bool fixed_clock = false;
  bool print_config = false;
  bool quiet = false;
  // Shortcuts for frequently overridden keys, as (manifest key, value).
  std::vector<std::pair<std::string, std::optional<std::string>>> shortcuts;
  std::vector<std::string> stages;
};

struct Command {
  CLI::App* app;
  std::vector<Stage> stages;
  StageOptions options;
};

void add_shortcut(CLI::App* cmd, StageOptions& o, const std::string& flag, std::string key,
                  const std::string& help) {
  o.shortcuts.emplace_back(std::move(key), std::nullopt);
  cmd->add_option(flag, o.shortcuts.back().second, help);
}

void add_stage_options(CLI::App* cmd, StageOptions& o) {
  o.shortcuts.reserve(8);
  cmd->add_option("-m,--manifest", o.manifest, "Run manifest (INI file)");
  cmd->add_option("--set", o.overrides, "Override a manifest value: section.key=value");
  cmd->add_option("-o,--output", o.output, "Output directory (overrides run.output_dir)");
  cmd->add_option("--seed", o.seed, "Global seed (overrides run.seed)");
  cmd->add_option("-j,--threads", o.threads,
                  "Worker threads (default: $BICORPUS_THREADS, else all cores)");
  cmd->add_flag("--resume", o.resume, "Skip stages whose recorded inputs are unchanged");
  cmd->add_flag("--fixed-clock", o.fixed_clock, "Write a constant timestamp into reports");
  cmd->add_flag("--print-config", o.print_config, "Print the effective configuration and exit");
  cmd->add_flag("-q,--quiet", o.quiet, "Suppress progress output");
}

Manifest effective_manifest(const StageOptions& o) {
  Manifest m = o.manifest.empty() ? Manifest{} : Manifest::load(o.manifest);
  const fs::path cwd = fs::current_path();
  for (const auto& item : o.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "--set expects section.key=value, got '" + item + "'");
    }
    m.set(item.substr(0, eq), item.substr(eq + 1), cwd);
  }
  for (const auto& [key, value] : o.shortcuts) {
    if (value) m.set(key, *value, cwd);
  }
  if (o.output) m.output_dir = fs::absolute(*o.output).lexically_normal();
  if (o.seed) m.seed = *o.seed;
  return m;
}

int run_stages(const Command& cmd) {
  const auto& o = cmd.options;
  Manifest manifest;
  try {
    manifest = effective_manifest(o);
    if (o.print_config) {
      std::cout << manifest.to_string();
      return 0;
    }
    if (o.manifest.empty()) throw Error(ErrorCode::kInvalidArgument, "--manifest is required");
    manifest.validate();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  std::vector<Stage> stages = cmd.stages;
  if (!o.stages.empty()) {
    stages.clear();
    try {
      for (const auto& name : o.stages) stages.push_back(parse_stage(name));
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitInvalid;
    }
  }
  RunOptions options;
  options.threads = std::max(1u, o.threads);
  options.resume = o.resume;
  options.fixed_clock = o.fixed_clock;
  options.log = o.quiet ? nullptr : &std::cerr;
  try {
    run_pipeline(manifest, stages, options);
  } catch (const StageFailure& e) {
    std::cerr << "error: stage '" << stage_name(e.stage()) << "' failed: " << e.what() << "\n";
    return kExitStageFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStageFailed;
  }
  return 0;
}

int run_tokenize(const fs::path& vocab_path, std::size_t max_chars) {
  const Vocabulary vocab = Vocabulary::load(vocab_path);
  std::string line;
  std::string out;
  while (std::getline(std::cin, line)) {
    out.clear();
    for (const auto& piece : tokenize_text(line, vocab, max_chars)) {
      if (!out.empty()) out += ' ';
      out += piece;
    }
    std::cout << out << '\n';
  }
  return 0;
}

int run_audit(const fs::path& vocab_path, const std::vector<fs::path>& shards, bool key_values) {
  const Vocabulary vocab = Vocabulary::load(vocab_path);
  AuditReport total;
  for (const auto& shard : shards) total += audit_instances(shard, vocab);
  std::cout << (key_values ? total.to_key_values().to_string() : total.to_text());
  return total.violations == 0 ? 0 : kExitStageFailed;
}

int run_coverage(const fs::path& vocab_path, const fs::path& reference_path) {
  const auto mine = read_piece_lines(vocab_path);
  const auto reference = read_piece_lines(reference_path);
  const auto result = vocab_coverage(mine, reference);
  char percent[32];
  std::snprintf(percent, sizeof percent, "%.1f%%", result.fraction * 100.0);
  KeyValueReport kv;
  kv.set("shared", result.shared);
  kv.set("reference_size", result.reference_size);
  kv.set("fraction", result.fraction);
  kv.set("percent", percent);
  std::cout << kv.to_string();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilingual pre-training corpus pipeline: cleaning, deduplication, vocabulary and "
               "masked-LM instance generation"};
  app.require_subcommand(1);

  struct StageCommand {
    const char* name;
    const char* help;
    std::vector<Stage> stages;
  };
  const std::vector<StageCommand> stage_commands = {
      {"ingest", "Read sources into the canonical document stream", {Stage::kIngest}},
      {"filter", "Apply language detection and cleaning heuristics", {Stage::kFilter}},
      {"dedup", "Remove duplicated content with shingle overlap", {Stage::kDedup}},
      {"sample", "Draw the language-balanced vocabulary sample", {Stage::kSample}},
      {"train-vocab", "Learn BPE merges on the sample", {Stage::kTrainVocab}},
      {"convert-vocab", "Convert BPE pieces to a WordPiece vocabulary", {Stage::kConvertVocab}},
      {"generate-examples", "Generate masked-LM / next-sentence instances",
       {Stage::kGenerateExamples}},
      {"stats", "Corpus statistics, fertility and instance audit", {Stage::kStats}},
      {"run", "Run every stage in order", all_stages()},
  };

  std::vector<Command> commands;
  commands.reserve(stage_commands.size());
  for (const auto& sc : stage_commands) {
    auto& cmd = commands.emplace_back();
    cmd.app = app.add_subcommand(sc.name, sc.help);
    cmd.stages = sc.stages;
    add_stage_options(cmd.app, cmd.options);
    const std::string name = sc.name;
    if (name == "sample" || name == "run") {
      add_shortcut(cmd.app, cmd.options, "--sample-total", "vocab.sample_total",
                   "Sentences to sample (0 = largest balanced sample)");
    }
    if (name == "train-vocab" || name == "run") {
      add_shortcut(cmd.app, cmd.options, "--target-size", "vocab.target_size",
                   "Vocabulary size including special tokens");
      add_shortcut(cmd.app, cmd.options, "--min-char-count", "vocab.min_char_count",
                   "Minimum occurrences for a character to enter the alphabet");
    }
    if (name == "convert-vocab" || name == "run") {
      add_shortcut(cmd.app, cmd.options, "--coverage-reference", "vocab.coverage_reference",
                   "Reference vocabulary for the coverage report");
    }
    if (name == "generate-examples" || name == "run" || name == "stats") {
      add_shortcut(cmd.app, cmd.options, "--vocab", "examples.vocab",
                   "WordPiece vocabulary (default: the pipeline's own)");
    }
    if (name == "generate-examples" || name == "run") {
      add_shortcut(cmd.app, cmd.options, "--max-seq-len", "examples.max_seq_len",
                   "Maximum instance length in pieces");
    }
    if (name == "run") {
      cmd.app->add_option("--stages", cmd.options.stages, "Subset of stages to run");
    }
  }

  fs::path tokenize_vocab;
  std::size_t tokenize_max_chars = kDefaultMaxWordChars;
  auto* tokenize = app.add_subcommand("tokenize", "WordPiece-tokenize standard input line by line");
  tokenize->add_option("--vocab", tokenize_vocab, "WordPiece vocabulary")->required()->check(CLI::ExistingFile);
  tokenize->add_option("--max-chars", tokenize_max_chars, "Longer words become [UNK]")->capture_default_str();

  fs::path audit_vocab;
  std::vector<fs::path> audit_shards;
  bool audit_kv = false;
  auto* audit = app.add_subcommand("audit", "Check instance shards against the masking and layout invariants");
  audit->add_option("--vocab", audit_vocab, "Vocabulary the shards were generated with")
      ->required()->check(CLI::ExistingFile);
  audit->add_option("shards", audit_shards, "Instance shard files")->required()->check(CLI::ExistingFile);
  audit->add_flag("--kv", audit_kv, "Print key=value lines instead of tables");

  fs::path coverage_vocab;
  fs::path coverage_reference;
  auto* coverage = app.add_subcommand("coverage", "Share of a reference vocabulary's pieces found in a vocabulary");
  coverage->add_option("--vocab", coverage_vocab, "Vocabulary")->required()->check(CLI::ExistingFile);
  coverage->add_option("--reference", coverage_reference, "Reference vocabulary")
      ->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (tokenize->parsed()) return run_tokenize(tokenize_vocab, tokenize_max_chars);
    if (audit->parsed()) return run_audit(audit_vocab, audit_shards, audit_kv);
    if (coverage->parsed()) return run_coverage(coverage_vocab, coverage_reference);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStageFailed;
  }
  for (const auto& cmd : commands) {
    if (cmd.app->parsed()) return run_stages(cmd);
  }
  return kExitInvalid;
}
