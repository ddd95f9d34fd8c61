#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bicorpus {

enum class SourceFormat {
  kPlainLines,  // one single-sentence document per nonblank line
  kDocBlocks,   // blank-line separated documents, one sentence per line
};

std::string_view source_format_name(SourceFormat format);
SourceFormat parse_source_format(std::string_view name);

struct SourceSpec {
  std::string source_id;
  std::string language;
  std::vector<std::filesystem::path> paths;
  SourceFormat format = SourceFormat::kDocBlocks;
  // Book-derived text: boilerplate lines are removed before sentence filters.
  bool book = false;
  // Treat each input line as a paragraph and split it into sentences.
  bool segment = false;
};

struct Sentence {
  std::string text;
  std::vector<std::string> tokens;  // basic tokens; empty until tokenized
};

struct Document {
  std::string doc_id;
  std::string source_id;
  std::string language;
  std::vector<Sentence> sentences;

  std::size_t token_count() const;
};

bool operator==(const Sentence& a, const Sentence& b);
bool operator==(const Document& a, const Document& b);

struct IngestReport {
  std::string source_id;
  std::size_t files = 0;
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t decode_repairs = 0;
  std::vector<std::string> warnings;
};

// Reads every file of `spec`. Files are decoded independently (up to
// `threads` at once) and documents are delivered to `sink` in file order.
// Document ids are "<source>/<file index>/<block index>". Throws
// Error(kNotFound) when a path does not exist.
IngestReport read_corpus(const SourceSpec& spec,
                         const std::function<void(Document&&)>& sink,
                         unsigned threads = 1);
std::vector<Document> read_corpus(const SourceSpec& spec,
                                  IngestReport* report = nullptr,
                                  unsigned threads = 1);

// Rule-based splitter: breaks after a run of ".", "!" or "?" (plus closing
// quotes/brackets) when followed by whitespace and an uppercase letter or a
// digit. A single "." ending a listed abbreviation, or a one-letter initial,
// does not end a sentence.
std::vector<std::string> segment_sentences(std::string_view text,
                                           std::span<const std::string> abbreviations);
std::vector<std::string> segment_sentences(std::string_view text, std::string_view language);

const std::vector<std::string>& default_abbreviations(std::string_view language);

// NFC, control characters removed, whitespace runs collapsed, trimmed.
std::string normalize_text(std::string_view text);

// BERT-style basic tokenization in cased mode: NFC, control characters
// stripped, whitespace split, every punctuation character and every CJK
// ideograph isolated as its own token.
std::vector<std::string> basic_tokenize(std::string_view sentence);

void tokenize_documents(std::span<Document> documents, unsigned threads = 1);

// Canonical stream: doc-blocks with a "#doc id=.. source=.. lang=.." header.
void write_documents(std::ostream& out, std::span<const Document> documents);
void write_document_file(const std::filesystem::path& path,
                         std::span<const Document> documents);
// Tokens are recomputed with basic_tokenize when `tokenize` is set.
std::vector<Document> read_documents(std::istream& in, bool tokenize = true,
                                     unsigned threads = 1);
std::vector<Document> read_document_file(const std::filesystem::path& path,
                                         bool tokenize = true, unsigned threads = 1);

}  // namespace bicorpus
