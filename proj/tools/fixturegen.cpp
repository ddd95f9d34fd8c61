// Deterministic synthetic bilingual corpora for tests, benchmarks and demos.
//
//   bicorpus-fixtures --out DIR [--wordlists DIR] [--scale F] [--seed N]
//
// Writes en/wiki.txt, en/books.txt, fi/news.txt, fi/discussion.txt,
// fi/crawl.txt (doc-blocks), words.txt (10,000 distinct words) and
// manifest.ini. At scale 1 each language gets about 5 MB of text.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "bicorpus/ingest.hpp"
#include "bicorpus/random.hpp"
#include "bicorpus/report.hpp"
#include "bicorpus/unicode.hpp"

namespace fs = std::filesystem;
using bicorpus::Rng;

namespace {

using WordClasses = std::map<std::string, std::vector<std::string>>;

WordClasses read_wordlist(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read wordlist " + path.string());
  WordClasses classes;
  std::string line;
  std::string current;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      current = line.substr(1, line.size() - 2);
      continue;
    }
    std::istringstream words(line);
    std::string w;
    while (words >> w) classes[current].push_back(w);
  }
  return classes;
}

struct Verb {
  std::string base;
  std::string past;
  std::string present;  // third person singular
};

std::vector<Verb> split_verbs(const std::vector<std::string>& entries) {
  std::vector<Verb> verbs;
  for (const auto& e : entries) {
    Verb v;
    const auto a = e.find('/');
    const auto b = e.find('/', a + 1);
    v.base = e.substr(0, a);
    v.past = b == std::string::npos ? e.substr(a + 1) : e.substr(a + 1, b - a - 1);
    v.present = b == std::string::npos ? v.base : e.substr(b + 1);
    verbs.push_back(v);
  }
  return verbs;
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

class Generator {
 public:
  Generator(WordClasses words, std::uint64_t seed) : w_(std::move(words)), rng_(seed) {}

  const std::string& pick(const std::string& cls) {
    const auto& list = w_.at(cls);
    return list[rng_.uniform(list.size())];
  }
  bool chance(double p) { return rng_.uniform01() < p; }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
    return static_cast<std::uint64_t>(rng_.uniform_int(static_cast<std::int64_t>(lo),
                                                       static_cast<std::int64_t>(hi)));
  }
  Rng& rng() { return rng_; }

 protected:
  WordClasses w_;
  Rng rng_;
};

class English : public Generator {
 public:
  English(WordClasses words, std::uint64_t seed)
      : Generator(std::move(words), seed), verbs_(split_verbs(w_.at("verb"))) {}

  std::string plural(const std::string& noun) {
    const char last = noun.back();
    if (last == 'y' && noun.size() > 1 && std::string("aeiou").find(noun[noun.size() - 2]) == std::string::npos) {
      return noun.substr(0, noun.size() - 1) + "ies";
    }
    if (last == 's' || last == 'h' || last == 'x') return noun + "es";
    return noun + "s";
  }
  std::string np() {
    std::string det = chance(0.6) ? "the" : (chance(0.5) ? "a" : "this");
    std::string n = pick("noun");
    if (det == "a" && std::string("aeiou").find(n[0]) != std::string::npos) det = "an";
    if (chance(0.4)) {
      std::string adj = pick("adj");
      if (det == "a" && std::string("aeiou").find(adj[0]) != std::string::npos) det = "an";
      if (det == "an" && std::string("aeiou").find(adj[0]) == std::string::npos) det = "a";
      return det + " " + adj + " " + n;
    }
    return det + " " + n;
  }
  const Verb& verb() { return verbs_[rng_.uniform(verbs_.size())]; }

  std::string encyclopedic() {
    switch (rng_.uniform(8)) {
      case 0:
        return capitalize(np()) + " " + verb().past + " " + np() + " " + pick("prep") + " " +
               pick("place") + ".";
      case 1:
        return "In " + std::to_string(between(1500, 2019)) + ", the " + plural(pick("noun")) +
               " of " + pick("place") + " " + verb().past + " " + np() + ".";
      case 2:
        return capitalize(np()) + " is one of the most " + pick("adj") + " " +
               plural(pick("noun")) + " in the " + pick("noun") + ".";
      case 3:
        return "The " + pick("noun") + " was " + pick("adj") + ", and the " +
               plural(pick("noun")) + " " + pick("verb_intransitive") + " " + pick("adverb") + ".";
      case 4:
        return "Many " + plural(pick("noun")) + " " + verb().base + " " + np() + " " +
               pick("prep") + " " + np() + " every " + pick("noun") + ".";
      case 5:
        return "According to " + np() + ", " + pick("name") + " " + verb().past + " " + np() +
               " in the " + pick("adj") + " " + pick("noun") + ".";
      case 6:
        return "It has " + pick("adverb") + " been described as " + np() + " with " +
               plural(pick("noun")) + " and " + plural(pick("noun")) + ".";
      default:
        return capitalize(np()) + " of " + pick("place") + " " + verb().present + " " + np() +
               " that " + verb().present + " " + np() + ".";
    }
  }

  std::string narrative() {
    switch (rng_.uniform(8)) {
      case 0:
        return pick("name") + " " + pick("verb_intransitive") + " " + pick("adverb") +
               " after the " + pick("noun") + " " + pick("verb_intransitive") + ".";
      case 1:
        return "\"I will " + verb().base + " " + np() + " " + pick("time") + ",\" said " +
               pick("name") + ".";
      case 2:
        return "She looked at " + np() + " and " + verb().past + " " + np() + " " +
               pick("adverb") + ".";
      case 3:
        return "He " + pick("verb_intransitive") + " " + pick("prep") + " " + np() +
               " while " + pick("name") + " " + verb().past + " " + np() + ".";
      case 4:
        return "The " + pick("adj") + " " + pick("noun") + " was " + pick("adverb") +
               " " + pick("adj") + " that " + pick("noun") + ".";
      case 5:
        return "They " + verb().past + " " + np() + " and " + pick("verb_intransitive") +
               " " + pick("prep") + " the " + pick("noun") + ".";
      case 6:
        return "When " + pick("name") + " " + pick("verb_intransitive") + ", " + np() + " " +
               verb().past + " " + np() + ".";
      default:
        return "Nobody knew why " + np() + " had " + pick("verb_intransitive") + " so " +
               pick("adverb") + ".";
    }
  }

 private:
  std::vector<Verb> verbs_;
};

class Finnish : public Generator {
 public:
  Finnish(WordClasses words, std::uint64_t seed)
      : Generator(std::move(words), seed), verbs_(split_verbs(w_.at("verb"))) {}

  static bool back_vowels(const std::string& word) {
    return word.find_first_of("aou") != std::string::npos;
  }
  static bool ends_in_vowel(const std::string& word) {
    const auto u = bicorpus::unicode::to_u32(word);
    return !u.empty() && std::u32string(U"aeiouyäö").find(u.back()) != std::u32string::npos;
  }
  // Case ending with vowel harmony; consonant stems stay in the nominative.
  static std::string inflect(const std::string& word, std::string_view ending) {
    if (!ends_in_vowel(word)) return word;
    std::string suffix(ending);
    if (!back_vowels(word)) {
      std::string front;
      for (char c : suffix) front += c == 'a' ? "ä" : std::string(1, c);
      suffix = front;
    }
    return word + suffix;
  }
  std::string noun() {
    std::string n = pick("noun");
    if (chance(0.15)) n = pick("noun") + n;  // compound
    return n;
  }
  std::string np(std::string_view ending = "") {
    std::string n = noun();
    std::string out = ending.empty() ? n : inflect(n, ending);
    if (chance(0.35)) {
      const std::string adj = pick("adj");
      out = (ending.empty() ? adj : inflect(adj, ending)) + " " + out;
    }
    return out;
  }
  const Verb& verb() { return verbs_[rng_.uniform(verbs_.size())]; }

  std::string formal() {
    switch (rng_.uniform(8)) {
      case 0:
        return capitalize(np()) + " " + verb().past + " " + np("n") + " " + np("ssa") + ".";
      case 1:
        return inflect(pick("place"), "ssa") + " " + pick("verb_intransitive") + " " +
               pick("time") + " " + np() + ", joka " + verb().past + " " + np("n") + ".";
      case 2:
        return "Vuonna " + std::to_string(between(1800, 2019)) + " " + np() + " " +
               verb().past + " " + np("sta") + " ja " + np("sta") + ".";
      case 3:
        return "Hallitus " + verb().past + " " + pick("adverb") + " " + np("n") + " " +
               noun() + ".";
      case 4:
        return capitalize(np()) + " on " + pick("adj") + ", mutta " + inflect(noun(), "t") +
               " ovat " + pick("adj") + ".";
      case 5:
        return pick("name") + " kertoi, että " + np() + " " + verb().past + " " + np("lla") +
               " " + pick("time") + ".";
      case 6:
        return "Tutkijoiden mukaan " + np() + " " + verb().base + " " + pick("adverb") + " " +
               np("lle") + ".";
      default:
        return capitalize(np("ssa")) + " " + pick("verb_intransitive") + " myös " + np() +
               " ja " + np() + ".";
    }
  }

  std::string colloquial() {
    switch (rng_.uniform(7)) {
      case 0:
        return "No mutta " + noun() + " on kyllä " + pick("adj") + ", eikö?";
      case 1:
        return "Minusta " + np() + " " + verb().base + " aivan liian " + pick("adverb") + ".";
      case 2:
        return "Onko kukaan muu huomannut, että " + np() + " " + verb().past + " " +
               np("n") + "?";
      case 3:
        return "Ei se " + noun() + " ole mitenkään " + pick("adj") + ", vaikka " +
               inflect(noun(), "t") + " niin väittävät.";
      case 4:
        return "Olen samaa mieltä, " + np() + " " + verb().past + " " + pick("time") + ".";
      case 5:
        return capitalize(pick("time")) + " " + np("ssa") + " oli taas " + pick("adj") + " " +
               noun() + "!";
      default:
        return "Kiitos vastauksesta, täytyy katsoa " + np("n") + " " + noun() + " uudestaan.";
    }
  }

 private:
  std::vector<Verb> verbs_;
};

// Lines that the cleaning rules are expected to remove.
struct Noise {
  double caps = 0.02;
  double digits = 0.015;
  double short_line = 0.025;
  double other_language = 0.015;
  double foreign_script = 0.007;
};

std::string caps_line(std::string s) {
  for (auto& c : s) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return s;
}

std::string digit_line(Rng& rng) {
  std::string s;
  const auto n = 4 + rng.uniform(6);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!s.empty()) s += ' ';
    s += std::to_string(rng.uniform(1000000));
  }
  return s + " total";
}

std::string foreign_script_line(Rng& rng) {
  static const char* kWords[] = {"привет", "город", "река", "школа", "время", "люди", "книга"};
  std::string s = "Город";
  for (int i = 0; i < 6; ++i) s += std::string(" ") + kWords[rng.uniform(7)];
  return s + ".";
}

std::string book_boilerplate(Rng& rng, const std::string& name) {
  switch (rng.uniform(5)) {
    case 0:
      return "Copyright © " + std::to_string(1990 + rng.uniform(30)) + " " + name +
             ". All rights reserved.";
    case 1:
      return "Chapter " + std::to_string(1 + rng.uniform(30)) + " .......... " +
             std::to_string(5 + rng.uniform(300));
    case 2:
      return "Table of Contents";
    case 3:
      return "ISBN 978-" + std::to_string(100000000 + rng.uniform(899999999));
    default:
      return "References";
  }
}

struct SourcePlan {
  std::string language;
  std::string source_id;
  double megabytes;
  bool book;
  bool paragraphs;  // several sentences per line, segmented at ingest
};

template <typename Fn>
std::string generate_source(const SourcePlan& plan, double scale, Rng& rng, Fn&& sentence,
                            const std::function<std::string()>& other_language,
                            const std::function<std::string()>& name) {
  const auto target = static_cast<std::size_t>(plan.megabytes * scale * 1e6);
  Noise noise;
  std::vector<std::string> documents;
  std::size_t bytes = 0;
  while (bytes < target) {
    std::string doc;
    if (!documents.empty() && rng.uniform01() < 0.03) {
      doc = documents[rng.uniform(documents.size())];  // planted exact duplicate
    } else {
      const auto sentences = 3 + rng.uniform(plan.book ? 16 : 10);
      std::vector<std::string> lines;
      if (plan.book && rng.uniform01() < 0.15) {
        for (std::uint64_t i = 0, n = 1 + rng.uniform(2); i < n; ++i) {
          lines.push_back(book_boilerplate(rng, name()));
        }
      }
      for (std::uint64_t i = 0; i < sentences; ++i) {
        const double r = rng.uniform01();
        double edge = noise.caps;
        if (r < edge) {
          lines.push_back(caps_line(sentence()));
          continue;
        }
        if (r < (edge += noise.digits)) {
          lines.push_back(digit_line(rng));
          continue;
        }
        if (r < (edge += noise.short_line)) {
          lines.push_back(rng.uniform01() < 0.5 ? "Yes." : "Ok!");
          continue;
        }
        if (r < (edge += noise.other_language)) {
          lines.push_back(other_language());
          continue;
        }
        if (r < (edge += noise.foreign_script)) {
          lines.push_back(foreign_script_line(rng));
          continue;
        }
        lines.push_back(sentence());
      }
      if (plan.paragraphs) {
        std::vector<std::string> merged;
        for (std::size_t i = 0; i < lines.size();) {
          std::string para = lines[i++];
          while (i < lines.size() && rng.uniform01() < 0.5) para += " " + lines[i++];
          merged.push_back(para);
        }
        lines = std::move(merged);
      }
      for (const auto& l : lines) doc += l + "\n";
    }
    bytes += doc.size() + 1;
    documents.push_back(std::move(doc));
  }
  std::string out;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    if (i > 0) out += "\n";
    out += documents[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate deterministic synthetic bilingual fixture corpora"};
  fs::path out_dir;
  fs::path wordlists = BICORPUS_DEFAULT_WORDLISTS;
  double scale = 1.0;
  std::uint64_t seed = 20200101;
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--wordlists", wordlists, "Directory holding en.txt and fi.txt")->capture_default_str();
  app.add_option("--scale", scale, "Size multiplier (1.0 = about 5 MB per language)")->capture_default_str();
  app.add_option("--seed", seed, "Generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    English en(read_wordlist(wordlists / "en.txt"), bicorpus::derive_seed(seed, "en"));
    Finnish fi(read_wordlist(wordlists / "fi.txt"), bicorpus::derive_seed(seed, "fi"));
    const std::vector<SourcePlan> plans = {
        {"en", "wiki", 3.3, false, false},
        {"en", "books", 1.7, true, false},
        {"fi", "news", 0.8, false, false},
        {"fi", "discussion", 2.6, false, true},
        {"fi", "crawl", 1.6, false, false},
    };
    std::vector<std::string> texts;
    for (const auto& plan : plans) {
      Rng rng(bicorpus::derive_seed(seed, "source/" + plan.source_id));
      std::string text;
      if (plan.language == "en") {
        auto other = [&] { return fi.formal(); };
        auto name = [&] { return en.pick("name") + " " + en.pick("place"); };
        text = plan.book ? generate_source(plan, scale, rng, [&] { return en.narrative(); }, other, name)
                         : generate_source(plan, scale, rng, [&] { return en.encyclopedic(); }, other, name);
      } else {
        auto other = [&] { return en.encyclopedic(); };
        auto name = [&] { return fi.pick("name"); };
        if (plan.source_id == "discussion") {
          text = generate_source(plan, scale, rng, [&] { return fi.colloquial(); }, other, name);
        } else if (plan.source_id == "crawl") {
          text = generate_source(plan, scale, rng,
                                 [&] { return rng.uniform01() < 0.5 ? fi.formal() : fi.colloquial(); },
                                 other, name);
        } else {
          text = generate_source(plan, scale, rng, [&] { return fi.formal(); }, other, name);
        }
      }
      fs::create_directories(out_dir / plan.language);
      bicorpus::write_file_atomic(out_dir / plan.language / (plan.source_id + ".txt"), text);
      texts.push_back(std::move(text));
    }

    // Word list: distinct alphabetic words in order of first occurrence,
    // topped up with Finnish compounds.
    std::vector<std::string> words;
    std::unordered_set<std::string> seen;
    auto add = [&](const std::string& w) {
      if (words.size() < 10000 && seen.insert(w).second) words.push_back(w);
    };
    for (const auto& text : texts) {
      std::istringstream lines(text);
      std::string line;
      while (std::getline(lines, line) && words.size() < 10000) {
        for (const auto& token : bicorpus::basic_tokenize(line)) {
          const auto u = bicorpus::unicode::to_u32(token);
          bool letters = !u.empty();
          for (char32_t c : u) letters = letters && bicorpus::unicode::is_letter(c);
          if (letters) add(token);
        }
      }
    }
    while (words.size() < 10000) add(fi.pick("noun") + fi.pick("noun"));
    std::string word_text;
    for (const auto& w : words) word_text += w + "\n";
    bicorpus::write_file_atomic(out_dir / "words.txt", word_text);

    std::ostringstream manifest;
    manifest << "; Synthetic bilingual fixture run.\n"
             << "[run]\nseed = 20201\noutput_dir = run\nlanguages = en, fi\n\n"
             << "[vocab]\nsample_total = 40000\ntarget_size = 1000\n\n"
             << "[examples]\nmax_seq_len = 128\nbalance_languages = fi\n\n";
    for (const auto& plan : plans) {
      manifest << "[source:" << plan.source_id << "]\n"
               << "language = " << plan.language << "\n"
               << "format = doc-blocks\n"
               << "paths = " << plan.language << "/" << plan.source_id << ".txt\n"
               << "book = " << (plan.book ? "true" : "false") << "\n"
               << "segment = " << (plan.paragraphs ? "true" : "false") << "\n\n";
    }
    bicorpus::write_file_atomic(out_dir / "manifest.ini", manifest.str());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
