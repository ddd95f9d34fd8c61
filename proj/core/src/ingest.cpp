#include "bicorpus/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "bicorpus/error.hpp"
#include "bicorpus/parallel.hpp"
#include "bicorpus/report.hpp"
#include "bicorpus/unicode.hpp"

namespace bicorpus {

std::string_view source_format_name(SourceFormat format) {
  return format == SourceFormat::kPlainLines ? "plain-lines" : "doc-blocks";
}

SourceFormat parse_source_format(std::string_view name) {
  if (name == "plain-lines") return SourceFormat::kPlainLines;
  if (name == "doc-blocks") return SourceFormat::kDocBlocks;
  throw Error(ErrorCode::kInvalidArgument, "unknown source format '" + std::string(name) + "'");
}

std::size_t Document::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.tokens.size();
  return n;
}

bool operator==(const Sentence& a, const Sentence& b) {
  return a.text == b.text && a.tokens == b.tokens;
}

bool operator==(const Document& a, const Document& b) {
  return a.doc_id == b.doc_id && a.source_id == b.source_id && a.language == b.language &&
         a.sentences == b.sentences;
}

std::string normalize_text(std::string_view text) {
  const std::string composed = unicode::nfc(text);
  std::string out;
  out.reserve(composed.size());
  bool pending_space = false;
  for (char32_t c : unicode::to_u32(composed)) {
    if (c == 0 || unicode::is_control(c)) continue;
    if (unicode::is_whitespace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    unicode::append_utf8(out, c);
  }
  return out;
}

std::vector<std::string> basic_tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };
  for (char32_t c : unicode::to_u32(unicode::nfc(sentence))) {
    if (c == 0 || unicode::is_control(c)) continue;
    if (unicode::is_whitespace(c)) {
      flush();
    } else if (unicode::is_punctuation(c) || unicode::is_cjk(c)) {
      flush();
      unicode::append_utf8(current, c);
      flush();
    } else {
      unicode::append_utf8(current, c);
    }
  }
  flush();
  return tokens;
}

void tokenize_documents(std::span<Document> documents, unsigned threads) {
  parallel_for(documents.size(), threads, [&](std::size_t i) {
    for (auto& sentence : documents[i].sentences) sentence.tokens = basic_tokenize(sentence.text);
  });
}

// --- Sentence segmentation -------------------------------------------------

const std::vector<std::string>& default_abbreviations(std::string_view language) {
  static const std::map<std::string, std::vector<std::string>, std::less<>> table = {
      {"en",
       {"Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "Sr.", "Jr.", "St.", "Mt.", "vs.", "etc.",
        "e.g.", "i.e.", "cf.", "No.", "Nos.", "Fig.", "Vol.", "Gen.", "Col.", "Lt.", "Sgt.",
        "Capt.", "Rev.", "Inc.", "Ltd.", "Co.", "Corp.", "Jan.", "Feb.", "Mar.", "Apr.",
        "Aug.", "Sep.", "Sept.", "Oct.", "Nov.", "Dec.", "approx.", "al."}},
      {"fi",
       {"esim.", "mm.", "ns.", "ks.", "kts.", "vrt.", "tri.", "prof.", "jne.", "yms.", "ym.",
        "klo.", "ts.", "eli.", "huom.", "n.", "s.", "v.", "vs.", "os.", "ao.", "em.", "nk.",
        "Oy.", "ry.", "as.", "puh.", "p.", "milj.", "mrd."}},
  };
  static const std::vector<std::string> none;
  auto it = table.find(language);
  return it == table.end() ? none : it->second;
}

namespace {

bool is_terminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

bool is_closer(char32_t c) {
  return c == U'"' || c == U'\'' || c == U')' || c == U']' || c == 0x201D || c == 0x2019 ||
         c == 0x00BB;
}

// True when the "." at `dot` ends an abbreviation or an initial.
bool protected_period(const std::u32string& text, std::size_t dot,
                      std::span<const std::string> abbreviations) {
  std::size_t begin = dot;
  while (begin > 0 && !unicode::is_whitespace(text[begin - 1])) --begin;
  const std::u32string word = text.substr(begin, dot + 1 - begin);
  if (word.size() == 2 && unicode::is_upper(word[0])) return true;
  const std::string utf8 = unicode::to_utf8(word);
  return std::find(abbreviations.begin(), abbreviations.end(), utf8) != abbreviations.end();
}

std::string trimmed(const std::u32string& text, std::size_t begin, std::size_t end) {
  while (begin < end && unicode::is_whitespace(text[begin])) ++begin;
  while (end > begin && unicode::is_whitespace(text[end - 1])) --end;
  return unicode::to_utf8(std::u32string_view(text).substr(begin, end - begin));
}

}  // namespace

std::vector<std::string> segment_sentences(std::string_view text,
                                           std::span<const std::string> abbreviations) {
  const std::u32string chars = unicode::to_u32(text);
  std::vector<std::string> sentences;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < chars.size()) {
    if (!is_terminal(chars[i])) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < chars.size() && is_terminal(chars[run_end])) ++run_end;
    const bool single_period = run_end == i + 1 && chars[i] == U'.';
    std::size_t end = run_end;
    while (end < chars.size() && is_closer(chars[end])) ++end;
    std::size_t next = end;
    while (next < chars.size() && unicode::is_whitespace(chars[next])) ++next;
    const bool has_space = next > end;
    const bool boundary = has_space && next < chars.size() &&
                          (unicode::is_upper(chars[next]) || unicode::is_digit(chars[next]));
    if (boundary && !(single_period && protected_period(chars, i, abbreviations))) {
      std::string sentence = trimmed(chars, start, end);
      if (!sentence.empty()) sentences.push_back(std::move(sentence));
      start = next;
    }
    i = end > i ? end : i + 1;
  }
  std::string tail = trimmed(chars, start, chars.size());
  if (!tail.empty()) sentences.push_back(std::move(tail));
  return sentences;
}

std::vector<std::string> segment_sentences(std::string_view text, std::string_view language) {
  return segment_sentences(text, default_abbreviations(language));
}

// --- Corpus reading --------------------------------------------------------

namespace {

struct FileResult {
  std::vector<Document> documents;
  std::size_t repairs = 0;
};

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
  });
}

FileResult read_file(const SourceSpec& spec, std::size_t file_index) {
  const auto& path = spec.paths[file_index];
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "source " + spec.source_id + ": cannot read " + path.string());

  FileResult result;
  std::size_t block_index = 0;
  Document current;
  auto start_document = [&] {
    current = Document{};
    current.doc_id = spec.source_id + "/" + std::to_string(file_index) + "/" +
                     std::to_string(block_index);
    current.source_id = spec.source_id;
    current.language = spec.language;
  };
  auto finish_document = [&] {
    if (!current.sentences.empty()) {
      result.documents.push_back(std::move(current));
      ++block_index;
    }
    start_document();
  };
  auto add_line = [&](const std::string& line) {
    if (spec.segment) {
      for (auto& s : segment_sentences(line, spec.language)) {
        std::string text = normalize_text(s);
        if (!text.empty()) current.sentences.push_back(Sentence{std::move(text), {}});
      }
    } else {
      std::string text = normalize_text(line);
      if (!text.empty()) current.sentences.push_back(Sentence{std::move(text), {}});
    }
  };

  start_document();
  std::string line;
  while (std::getline(in, line)) {
    result.repairs += unicode::repair_utf8(line);
    if (blank(line)) {
      if (spec.format == SourceFormat::kDocBlocks) finish_document();
      continue;
    }
    add_line(line);
    if (spec.format == SourceFormat::kPlainLines) finish_document();
  }
  finish_document();
  return result;
}

}  // namespace

IngestReport read_corpus(const SourceSpec& spec, const std::function<void(Document&&)>& sink,
                         unsigned threads) {
  for (const auto& path : spec.paths) {
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorCode::kNotFound,
                  "source " + spec.source_id + ": missing file " + path.string());
    }
  }
  std::vector<FileResult> files(spec.paths.size());
  parallel_for(files.size(), threads, [&](std::size_t i) { files[i] = read_file(spec, i); });

  IngestReport report;
  report.source_id = spec.source_id;
  report.files = files.size();
  for (auto& file : files) {
    report.decode_repairs += file.repairs;
    for (auto& doc : file.documents) {
      ++report.documents;
      report.sentences += doc.sentences.size();
      sink(std::move(doc));
    }
  }
  if (report.documents == 0) {
    report.warnings.push_back("source " + spec.source_id + " produced no documents");
  }
  return report;
}

std::vector<Document> read_corpus(const SourceSpec& spec, IngestReport* report,
                                  unsigned threads) {
  std::vector<Document> documents;
  IngestReport r = read_corpus(
      spec, [&](Document&& d) { documents.push_back(std::move(d)); }, threads);
  if (report != nullptr) *report = std::move(r);
  return documents;
}

// --- Canonical stream ------------------------------------------------------

void write_documents(std::ostream& out, std::span<const Document> documents) {
  for (const auto& doc : documents) {
    out << "#doc id=" << doc.doc_id << " source=" << doc.source_id << " lang=" << doc.language
        << '\n';
    for (const auto& s : doc.sentences) out << s.text << '\n';
    out << '\n';
  }
}

void write_document_file(const std::filesystem::path& path,
                         std::span<const Document> documents) {
  std::ostringstream out;
  write_documents(out, documents);
  write_file_atomic(path, out.str());
}

namespace {

std::string header_field(std::string_view header, std::string_view key) {
  const std::string needle = " " + std::string(key) + "=";
  const std::size_t pos = header.find(needle);
  if (pos == std::string_view::npos) return {};
  const std::size_t begin = pos + needle.size();
  const std::size_t end = header.find(' ', begin);
  return std::string(header.substr(begin, end == std::string_view::npos ? end : end - begin));
}

}  // namespace

std::vector<Document> read_documents(std::istream& in, bool tokenize, unsigned threads) {
  std::vector<Document> documents;
  std::string line;
  bool in_block = false;
  while (std::getline(in, line)) {
    if (line.empty()) {
      in_block = false;
      continue;
    }
    if (!in_block) {
      if (line.rfind("#doc ", 0) != 0) {
        throw Error(ErrorCode::kCorrupt, "expected '#doc' header, got: " + line);
      }
      Document doc;
      doc.doc_id = header_field(line, "id");
      doc.source_id = header_field(line, "source");
      doc.language = header_field(line, "lang");
      documents.push_back(std::move(doc));
      in_block = true;
      continue;
    }
    documents.back().sentences.push_back(Sentence{line, {}});
  }
  if (tokenize) tokenize_documents(documents, threads);
  return documents;
}

std::vector<Document> read_document_file(const std::filesystem::path& path, bool tokenize,
                                         unsigned threads) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  return read_documents(in, tokenize, threads);
}

}  // namespace bicorpus
