// Acceptance checks for the bilingual corpus pipeline.
//
//   bicorpus_acceptance <criterion|all> --cli PATH --fixtures DIR --run DIR
//
// `--fixtures` holds the generated fixture corpus (manifest.ini, words.txt)
// and `--run` a completed `bicorpus run --threads 1 --fixed-clock` of that
// manifest. Each criterion prints one PASS or FAIL line; the exit status is
// nonzero when any printed line is a FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "bicorpus/bpe.hpp"
#include "bicorpus/dedup.hpp"
#include "bicorpus/examplegen.hpp"
#include "bicorpus/ingest.hpp"
#include "bicorpus/instance_io.hpp"
#include "bicorpus/random.hpp"
#include "bicorpus/report.hpp"
#include "bicorpus/sample.hpp"
#include "bicorpus/stats.hpp"
#include "bicorpus/tokenizer.hpp"
#include "bicorpus/unicode.hpp"
#include "bicorpus/vocabulary.hpp"
#include "bpe_oracle.hpp"
#include "temp_dir.hpp"

namespace fs = std::filesystem;
using namespace bicorpus;

namespace {

struct Context {
  fs::path cli;
  fs::path fixtures;
  fs::path run;
};

// Collects the sub-checks of one criterion and prints a single line.
class Verdict {
 public:
  explicit Verdict(std::string name) : name_(std::move(name)) {}

  void check(bool ok, const std::string& what) {
    if (!ok) failed_ = true;
    notes_.push_back((ok ? "" : "NOT ") + what);
  }
  void note(const std::string& what) { notes_.push_back(what); }

  bool print() const {
    std::cout << (failed_ ? "FAIL " : "PASS ") << name_ << ":";
    for (std::size_t i = 0; i < notes_.size(); ++i) std::cout << (i ? "; " : " ") << notes_[i];
    std::cout << std::endl;
    return !failed_;
  }

 private:
  std::string name_;
  std::vector<std::string> notes_;
  bool failed_ = false;
};

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

int run_cli(const Context& ctx, const std::string& args) {
  const std::string command = quote(ctx.cli) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string kv(const fs::path& path, const std::string& key) {
  return KeyValueReport::read(path).get(key).value_or("<missing>");
}

std::size_t count_lines(const fs::path& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

std::vector<fs::path> shards(const fs::path& run) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(run / "examples")) {
    if (e.path().extension() == ".bin") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> fixture_words(const Context& ctx) {
  std::ifstream in(ctx.fixtures / "words.txt");
  std::vector<std::string> words;
  for (std::string w; std::getline(in, w);) {
    if (!w.empty()) words.push_back(w);
  }
  return words;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = testing::read_file(e.path());
  }
  return out;
}

// --- 1 ----------------------------------------------------------------------

bool vocab_size(const Context& ctx) {
  Verdict v("vocab_size");
  const auto report = ctx.run / "reports/train_vocab.kv";
  v.check(kv(report, "target_size") == "1000", "target_size=1000 in the fixture manifest");
  v.check(kv(report, "vocab_size") == "1000", "vocab_size=" + kv(report, "vocab_size") + " == 1000");
  v.check(kv(report, "warning") == "false", "warning flag unset");
  const auto lines = count_lines(ctx.run / "vocab/vocab.txt");
  v.check(lines == 1000, "vocab.txt has " + std::to_string(lines) + " lines == 1000");

  testing::TempDir tmp;
  fs::copy(ctx.run / "vocab", tmp / "vocab", fs::copy_options::recursive);
  const auto manifest = ctx.fixtures / "manifest.ini";
  auto start = std::chrono::steady_clock::now();
  int status = run_cli(ctx, "train-vocab -q -m " + quote(manifest) + " -o " + quote(tmp.path()) +
                                " --target-size 1000");
  const double small = seconds_since(start);
  v.check(status == 0, "train-vocab target 1000 exit 0");
  v.check(testing::read_file(tmp / "vocab/merges.txt") == testing::read_file(ctx.run / "vocab/merges.txt"),
          "rerun reproduces merges.txt");
  v.check(small < 60.0, "target 1000 runtime " + fixed(small, 2) + " s < 60 s");

  start = std::chrono::steady_clock::now();
  status = run_cli(ctx, "train-vocab -q -m " + quote(manifest) + " -o " + quote(tmp.path()) +
                            " --target-size 80000");
  const double large = seconds_since(start);
  const auto big = tmp / "reports/train_vocab.kv";
  v.check(status == 0, "train-vocab target 80000 exit 0");
  v.check(kv(big, "warning") == "true", "target 80000 sets the warning flag");
  const auto actual = kv(big, "vocab_size");
  v.check(actual != "<missing>" && std::stoul(actual) < 80000 &&
              count_lines(tmp / "vocab/bpe_pieces.txt") + 5 == std::stoul(actual),
          "actual size reported (" + actual + ")");
  v.check(large < 60.0, "target 80000 runtime " + fixed(large, 2) + " s < 60 s");
  return v.print();
}

// --- 2 ----------------------------------------------------------------------

bool balanced_sampling(const Context&) {
  Verdict v("balanced_sampling");
  const std::uint64_t wiki = 130'000'000, books = 68'000'000, fi = 234'000'000, total = 10'000'000;
  const auto q = plan_sample({{"wikipedia", "en", wiki}, {"books", "en", books}, {"finnish", "fi", fi}}, total);

  // Largest remainder by integer arithmetic: floors, then the leftover
  // sentence goes to the larger fractional part.
  const std::uint64_t half = total / 2, en = wiki + books;
  std::uint64_t wiki_q = half * wiki / en, books_q = half * books / en;
  const std::uint64_t wiki_rem = half * wiki % en, books_rem = half * books % en;
  for (std::uint64_t left = half - wiki_q - books_q; left > 0; --left) {
    (wiki_rem >= books_rem ? wiki_q : books_q) += 1;
  }

  v.check(q.languages.at("en") == 5'000'000, "en total " + std::to_string(q.languages.at("en")) + " == 5000000");
  v.check(q.languages.at("fi") == 5'000'000, "fi total " + std::to_string(q.languages.at("fi")) + " == 5000000");
  v.check(q.find("wikipedia")->quota == 3'282'828 && wiki_q == 3'282'828,
          "Wikipedia " + std::to_string(q.find("wikipedia")->quota) + " == 3282828");
  v.check(q.find("books")->quota == 1'717'172 && books_q == 1'717'172,
          "Books " + std::to_string(q.find("books")->quota) + " == 1717172");
  v.check(q.find("finnish")->quota == 5'000'000, "Finnish source 5000000");
  return v.print();
}

// --- 3 ----------------------------------------------------------------------

bool bpe_oracle(const Context& ctx) {
  Verdict v("bpe_oracle");
  const auto words = fixture_words(ctx);
  Rng rng(20240601);
  const int corpora = 60;
  int equal = 0;
  std::size_t merges = 0;
  const auto start = std::chrono::steady_clock::now();
  for (int c = 0; c < corpora; ++c) {
    // Up to 1000 running words drawn with a Zipf-like skew from the fixture list.
    WordCounts table;
    const auto running = 200 + rng.uniform(801);
    const auto vocabulary = 20 + rng.uniform(400);
    for (std::uint64_t i = 0; i < running; ++i) {
      const double u = rng.uniform01();
      const auto rank = static_cast<std::size_t>(std::pow(static_cast<double>(vocabulary), u)) - 1;
      table[words[(rank * 7919 + static_cast<std::size_t>(c) * 104729) % words.size()]] += 1;
    }
    BpeOptions options;
    options.min_char_count = 1 + rng.uniform(3);
    std::set<char32_t> chars;
    for (const auto& [w, _] : table) {
      for (char32_t ch : unicode::to_u32(w)) chars.insert(ch);
    }
    options.target_size = options.special_count + 2 * chars.size() + 50 + rng.uniform(250);
    const auto learned = learn_bpe(table, options);
    const auto oracle = testing::brute_force_bpe(table, options);
    merges += learned.rules.merges.size();
    if (learned.rules.merges == oracle.merges && learned.vocab_size == oracle.vocab_size &&
        learned.target_reached == oracle.target_reached) {
      ++equal;
    }
  }
  const double elapsed = seconds_since(start);
  v.check(equal == corpora, std::to_string(equal) + "/" + std::to_string(corpora) + " merge lists identical");
  v.note(std::to_string(merges) + " merges compared");
  v.check(elapsed < 30.0, "runtime " + fixed(elapsed, 2) + " s < 30 s");
  return v.print();
}

// --- 4 ----------------------------------------------------------------------

bool masking_statistics(const Context& ctx) {
  Verdict v("masking_statistics");
  testing::TempDir tmp;
  fs::copy(ctx.run / "dedup", tmp / "dedup", fs::copy_options::recursive);
  fs::copy(ctx.run / "vocab", tmp / "vocab", fs::copy_options::recursive);
  const auto start = std::chrono::steady_clock::now();
  const int status = run_cli(ctx, "run -q --fixed-clock -m " + quote(ctx.fixtures / "manifest.ini") + " -o " +
                                      quote(tmp.path()) + " --stages generate-examples stats -j 1");
  const double elapsed = seconds_since(start);
  v.check(status == 0, "generate-examples and stats exit 0");

  const auto vocab = Vocabulary::load(tmp / "vocab/vocab.txt");
  AuditReport audit;
  for (const auto& shard : shards(tmp.path())) audit += audit_instances(shard, vocab);
  v.check(audit.instances >= 10'000, std::to_string(audit.instances) + " instances >= 10000");
  v.check(std::abs(audit.masked_fraction() - 0.15) <= 0.01, "masked fraction " + fixed(audit.masked_fraction()) + " in 0.15 +- 0.01");
  v.check(std::abs(audit.mask_share() - 0.80) <= 0.02, "[MASK] " + fixed(audit.mask_share()) + " in 0.80 +- 0.02");
  v.check(std::abs(audit.random_share() - 0.10) <= 0.015, "random " + fixed(audit.random_share()) + " in 0.10 +- 0.015");
  v.check(std::abs(audit.unchanged_share() - 0.10) <= 0.015,
          "unchanged " + fixed(audit.unchanged_share()) + " in 0.10 +- 0.015");
  v.check(std::abs(audit.random_next_share() - 0.50) <= 0.02,
          "NSP random-next " + fixed(audit.random_next_share()) + " in 0.50 +- 0.02");
  v.check(audit.violations == 0, std::to_string(audit.violations) + " invariant violations");
  v.check(kv(tmp / "reports/audit.kv", "violations") == "0", "stage audit report agrees");
  v.check(elapsed < 120.0, "runtime " + fixed(elapsed, 2) + " s < 120 s");
  return v.print();
}

// --- 5 ----------------------------------------------------------------------

bool whole_word_atomicity(const Context& ctx) {
  Verdict v("whole_word_atomicity");
  const auto vocab = Vocabulary::load(ctx.run / "vocab/vocab.txt");
  auto is_continuation = [&](TokenId id) {
    const auto& p = vocab.piece(id);
    return p.size() > 2 && p.rfind("##", 0) == 0;
  };
  std::size_t examined = 0, partial = 0, multi_piece_masked = 0;
  for (const auto& shard : shards(ctx.run)) {
    InstanceReader reader(shard, &vocab);
    PretrainingInstance x;
    while (examined < 1000 && reader.next(x)) {
      std::vector<TokenId> original = x.ids;
      for (std::size_t k = 0; k < x.masked_positions.size(); ++k) original[x.masked_positions[k]] = x.masked_labels[k];
      const std::set<std::uint32_t> masked(x.masked_positions.begin(), x.masked_positions.end());
      // Word spans: a head piece and the continuation pieces after it.
      std::vector<std::pair<std::size_t, std::size_t>> spans;
      for (std::size_t i = 0; i < original.size(); ++i) {
        if (vocab.is_special(original[i])) continue;
        if (is_continuation(original[i]) && !spans.empty() && spans.back().second == i) {
          spans.back().second = i + 1;
        } else {
          spans.emplace_back(i, i + 1);
        }
      }
      const bool has_multi = std::any_of(spans.begin(), spans.end(), [](auto s) { return s.second - s.first > 1; });
      if (!has_multi) continue;
      ++examined;
      for (auto [b, e] : spans) {
        std::size_t hits = 0;
        for (auto i = b; i < e; ++i) hits += masked.count(static_cast<std::uint32_t>(i));
        if (hits != 0 && hits != e - b) ++partial;
        if (hits != 0 && e - b > 1) ++multi_piece_masked;
      }
    }
    if (examined >= 1000) break;
  }
  v.check(examined == 1000, std::to_string(examined) + " instances with multi-piece words examined");
  v.check(multi_piece_masked > 0, std::to_string(multi_piece_masked) + " multi-piece words masked");
  v.check(partial == 0, std::to_string(partial) + " partially selected words");
  return v.print();
}

// --- 6 ----------------------------------------------------------------------

bool duplication_balancing(const Context&) {
  Verdict v("duplication_balancing");
  const auto plan = plan_duplication({{"a", "en", 1000}, {"news", "fi", 100}, {"disc", "fi", 300}, {"crawl", "fi", 200}},
                                     {"fi"}, 0.10);
  // Independent arithmetic: target per fi source = 1000 / 3, factor = round(target / count).
  const double target = 1000.0 / 3.0;
  const std::uint64_t f_news = std::llround(target / 100), f_disc = std::llround(target / 300),
                      f_crawl = std::llround(target / 200);
  const std::uint64_t arithmetic_total = f_news * 100 + f_disc * 300 + f_crawl * 200;
  const bool factors = plan.factor_of("news") == 3 && plan.factor_of("disc") == 1 && plan.factor_of("crawl") == 2 &&
                       plan.factor_of("a") == 1 && f_news == 3 && f_disc == 1 && f_crawl == 2;
  v.check(factors, "factors {news:" + std::to_string(plan.factor_of("news")) + ", disc:" +
                       std::to_string(plan.factor_of("disc")) + ", crawl:" + std::to_string(plan.factor_of("crawl")) +
                       "} == {3,1,2}");
  const auto fi_total = plan.language_totals.at("fi");
  v.check(plan.within_tolerance, "tolerance check passes at 10%");
  v.check(fi_total == arithmetic_total, "planned fi total " + std::to_string(fi_total) +
                                            " == independent arithmetic 3*100+1*300+2*200 = " +
                                            std::to_string(arithmetic_total));
  v.check(fi_total == 900, "achieved fi total " + std::to_string(fi_total) + " == 900 as stated");
  return v.print();
}

// --- 7 ----------------------------------------------------------------------

bool dedup_planted_copies(const Context& ctx) {
  Verdict v("dedup_planted_copies");
  const auto words = fixture_words(ctx);
  Rng rng(7);
  auto make = [&](const std::string& id) {
    Document d;
    d.doc_id = id;
    d.source_id = "planted";
    d.language = "en";
    for (int s = 0; s < 3; ++s) {
      Sentence sentence;
      for (int t = 0; t < 12; ++t) sentence.tokens.push_back(words[rng.uniform(words.size())]);
      d.sentences.push_back(std::move(sentence));
    }
    return d;
  };
  const Document planted = make("planted");
  std::vector<Document> corpus;
  std::size_t copies = 0;
  for (int i = 0; i < 1000; ++i) {
    corpus.push_back(make("unique/" + std::to_string(i)));
    if (i % 10 == 3) {
      Document copy = planted;
      copy.doc_id = "copy/" + std::to_string(copies++);
      corpus.push_back(std::move(copy));
    }
  }
  ShingleIndex index;
  DedupReport report;
  const auto kept = dedup_stream(corpus, index, report);
  std::size_t kept_copies = 0, kept_unique = 0;
  for (const auto& d : kept) (d.doc_id.rfind("copy/", 0) == 0 ? kept_copies : kept_unique) += 1;
  v.check(copies == 100, std::to_string(copies) + " planted copies");
  v.check(kept_copies == 1, std::to_string(kept_copies) + " copy survives");
  v.check(kept_unique == 1000, std::to_string(kept_unique) + "/1000 unique documents kept");
  v.check(!kept.empty() && std::any_of(kept.begin(), kept.end(), [](const Document& d) { return d.doc_id == "copy/0"; }),
          "first copy is the survivor");
  ShingleIndex fresh;
  DedupReport again;
  const auto second = dedup_stream(kept, fresh, again);
  v.check(second.size() == kept.size() && again.dropped == 0,
          "rerun on output drops " + std::to_string(again.dropped));
  return v.print();
}

// --- 8 ----------------------------------------------------------------------

bool round_trips(const Context& ctx) {
  Verdict v("round_trips");
  const auto vocab = Vocabulary::load(ctx.run / "vocab/vocab.txt");
  std::vector<PretrainingInstance> instances;
  InstanceFileHeader header;
  for (const auto& shard : shards(ctx.run)) {
    InstanceReader reader(shard, &vocab);
    header = reader.header();
    PretrainingInstance x;
    while (instances.size() < 10'000 && reader.next(x)) instances.push_back(x);
    if (instances.size() >= 10'000) break;
  }
  testing::TempDir tmp;
  write_instances(tmp / "copy.bin", instances, header);
  const auto back = read_instances(tmp / "copy.bin", &vocab);
  v.check(instances.size() == 10'000, std::to_string(instances.size()) + " instances");
  v.check(back == instances, "read(write(x)) == x field for field");
  write_instances(tmp / "again.bin", back, header);
  v.check(testing::read_file(tmp / "again.bin") == testing::read_file(tmp / "copy.bin"), "rewrite is byte-identical");

  const auto words = fixture_words(ctx);
  std::size_t covered = 0, mismatches = 0;
  for (const auto& w : words) {
    const auto pieces = wordpiece_tokenize(w, vocab);
    if (std::find(pieces.begin(), pieces.end(), "[UNK]") != pieces.end()) continue;
    ++covered;
    if (decode(pieces) != w) ++mismatches;
  }
  v.check(words.size() == 10'000, std::to_string(words.size()) + " fixture words");
  v.check(covered > 0, std::to_string(covered) + " fully covered");
  v.check(mismatches == 0, std::to_string(mismatches) + " decode(tokenize(w)) != w");
  return v.print();
}

// --- 9 ----------------------------------------------------------------------

bool determinism(const Context& ctx) {
  Verdict v("determinism");
  testing::TempDir tmp;
  const auto start = std::chrono::steady_clock::now();
  const int status = run_cli(ctx, "run -q --fixed-clock --threads 8 -m " + quote(ctx.fixtures / "manifest.ini") +
                                      " -o " + quote(tmp / "t8"));
  v.note("--threads 8 run " + fixed(seconds_since(start), 1) + " s");
  v.check(status == 0, "--threads 8 run exit 0");
  const auto one = tree(ctx.run), eight = tree(tmp / "t8");
  std::size_t differing = 0;
  for (const auto& [name, bytes] : one) {
    auto it = eight.find(name);
    if (it == eight.end() || it->second != bytes) {
      if (differing++ < 3) v.note("differs: " + name);
    }
  }
  v.check(one.size() == eight.size(), std::to_string(one.size()) + " vs " + std::to_string(eight.size()) + " files");
  v.check(differing == 0, std::to_string(differing) + " files differ between --threads 1 and --threads 8");
  return v.print();
}

// --- 10 ---------------------------------------------------------------------

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * fraction);
  return buf;
}

bool coverage_arithmetic(const Context&) {
  Verdict v("coverage_arithmetic");
  const std::vector<std::string> a = {"a", "b", "c"}, b = {"a", "b", "d", "e"};
  v.check(vocab_coverage(a, b).fraction == 0.5, "{a,b,c} vs {a,b,d,e} == 0.5");

  Rng rng(10);
  int exact = 0;
  const int rounds = 200;
  for (int r = 0; r < rounds; ++r) {
    std::set<std::string> sa, sb;
    const auto universe = 5 + rng.uniform(200);
    for (auto n = rng.uniform(universe); n > 0; --n) sa.insert("p" + std::to_string(rng.uniform(universe)));
    for (auto n = 1 + rng.uniform(universe); n > 0; --n) sb.insert("p" + std::to_string(rng.uniform(universe)));
    if (sa.empty()) sa.insert("p0");
    std::vector<std::string> inter;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(inter));
    const std::vector<std::string> va(sa.begin(), sa.end()), vb(sb.begin(), sb.end());
    const auto c = vocab_coverage(va, vb);
    if (c.shared == inter.size() && c.reference_size == sb.size() &&
        c.fraction == static_cast<double>(inter.size()) / static_cast<double>(sb.size())) {
      ++exact;
    }
  }
  v.check(exact == rounds, std::to_string(exact) + "/" + std::to_string(rounds) + " random sets == |A n B|/|B| exactly");

  const char* mine = std::getenv("BICORPUS_BILINGUAL_VOCAB");
  const char* bert = std::getenv("BICORPUS_BERT_VOCAB");
  const char* finbert = std::getenv("BICORPUS_FINBERT_VOCAB");
  if (mine && bert && finbert) {
    const auto bilingual = Vocabulary::load(mine);
    const auto en = vocab_coverage(bilingual, Vocabulary::load(bert)).fraction;
    const auto fi = vocab_coverage(bilingual, Vocabulary::load(finbert)).fraction;
    v.check(std::abs(100.0 * en - 87.5) <= 0.1, "English BERT coverage " + percent(en) + " == 87.5% +- 0.1");
    v.check(std::abs(100.0 * fi - 61.5) <= 0.1, "FinBERT coverage " + percent(fi) + " == 61.5% +- 0.1");
  } else {
    v.note("released vocabularies not supplied (BICORPUS_BILINGUAL_VOCAB, BICORPUS_BERT_VOCAB, "
           "BICORPUS_FINBERT_VOCAB); optional comparison skipped");
  }
  return v.print();
}

const std::vector<std::pair<std::string, std::function<bool(const Context&)>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<bool(const Context&)>>> table = {
      {"vocab_size", vocab_size},
      {"balanced_sampling", balanced_sampling},
      {"bpe_oracle", bpe_oracle},
      {"masking_statistics", masking_statistics},
      {"whole_word_atomicity", whole_word_atomicity},
      {"duplication_balancing", duplication_balancing},
      {"dedup_planted_copies", dedup_planted_copies},
      {"round_trips", round_trips},
      {"determinism", determinism},
      {"coverage_arithmetic", coverage_arithmetic},
  };
  return table;
}

int usage() {
  std::cerr << "usage: bicorpus_acceptance <criterion|all> --cli PATH --fixtures DIR --run DIR\ncriteria:";
  for (const auto& [name, _] : criteria()) std::cerr << " " << name;
  std::cerr << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) return usage();
  const std::string which = argv[1];
  Context ctx;
  for (int i = 2; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") ctx.cli = argv[i + 1];
    else if (flag == "--fixtures") ctx.fixtures = argv[i + 1];
    else if (flag == "--run") ctx.run = argv[i + 1];
    else return usage();
  }
  bool ok = true;
  bool found = false;
  for (const auto& [name, fn] : criteria()) {
    if (which != "all" && which != name) continue;
    found = true;
    try {
      ok = fn(ctx) && ok;
    } catch (const std::exception& e) {
      std::cout << "FAIL " << name << ": " << e.what() << std::endl;
      ok = false;
    }
  }
  if (!found) return usage();
  return ok ? 0 : 1;
}
