#include "bicorpus/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "bicorpus/error.hpp"
#include "bicorpus/unicode.hpp"

namespace bicorpus {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    auto item = trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw Error(ErrorCode::kInvalidArgument,
              "manifest key " + std::string(key) + ": expected " + std::string(want) + ", got '" +
                  std::string(value) + "'");
}

std::uint64_t parse_uint(std::string_view key, std::string_view text) {
  const std::string v = trim(text);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) bad_value(key, text, "an integer");
  return out;
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string v = trim(text);
  double out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) bad_value(key, text, "a number");
  return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string v = trim(text);
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  bad_value(key, text, "a boolean");
}

std::filesystem::path resolve(std::string_view value, const std::filesystem::path& base_dir) {
  std::filesystem::path p(trim(value));
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p.lexically_normal();
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ", ";
    out += item;
  }
  return out;
}

std::string_view granularity_name(DedupGranularity g) {
  return g == DedupGranularity::kDocument ? "document" : "paragraph";
}

}  // namespace

Manifest Manifest::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "manifest " + path.string() + " does not exist");
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto base = std::filesystem::absolute(path).parent_path();
  return parse(buffer.str(), base);
}

Manifest Manifest::parse(std::string_view text, const std::filesystem::path& base_dir) {
  boost::property_tree::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("manifest: ") + e.what());
  }
  Manifest m;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw Error(ErrorCode::kInvalidArgument, "manifest key '" + section + "' outside a section");
    }
    std::string prefix = section;
    if (section.rfind("source:", 0) == 0) prefix = "source." + section.substr(7);
    for (const auto& [key, value] : body) {
      m.set(prefix + "." + key, value.data(), base_dir);
    }
    if (section.rfind("source:", 0) == 0 && m.find_source(section.substr(7)) == nullptr) {
      m.sources.push_back(SourceSpec{section.substr(7), "", {}, SourceFormat::kDocBlocks, false, false});
    }
  }
  return m;
}

void Manifest::set(std::string_view dotted_key, std::string_view value,
                   const std::filesystem::path& base_dir) {
  const std::string key(dotted_key);
  const auto dot = key.find('.');
  if (dot == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "manifest key '" + key + "' needs a section");
  }
  const std::string section = key.substr(0, dot);
  std::string name = key.substr(dot + 1);
  auto unknown = [&]() -> Error {
    return Error(ErrorCode::kInvalidArgument, "unknown manifest key '" + key + "'");
  };

  if (section == "run") {
    if (name == "seed") seed = parse_uint(key, value);
    else if (name == "output_dir") output_dir = resolve(value, base_dir);
    else if (name == "languages") languages = split_list(value);
    else throw unknown();
  } else if (section == "filter") {
    auto& f = filter;
    if (name == "min_tokens") f.min_tokens = parse_uint(key, value);
    else if (name == "max_uppercase_ratio") f.max_uppercase_ratio = parse_double(key, value);
    else if (name == "max_digit_ratio") f.max_digit_ratio = parse_double(key, value);
    else if (name == "max_foreign_ratio") f.max_foreign_ratio = parse_double(key, value);
    else if (name == "min_lang_confidence") f.min_lang_confidence = parse_double(key, value);
    else if (name == "min_document_sentences") f.min_document_sentences = parse_uint(key, value);
    else if (name == "max_rejected_share") f.max_rejected_share = parse_double(key, value);
    else if (name == "language_check") f.language_check = parse_bool(key, value);
    else if (name.rfind("alphabet.", 0) == 0) f.alphabets[name.substr(9)] = unicode::to_u32(trim(value));
    else throw unknown();
  } else if (section == "dedup") {
    if (name == "n") dedup.n = parse_uint(key, value);
    else if (name == "threshold") dedup.threshold = parse_double(key, value);
    else if (name == "granularity") {
      const auto v = trim(value);
      if (v == "document") dedup.granularity = DedupGranularity::kDocument;
      else if (v == "paragraph") dedup.granularity = DedupGranularity::kParagraph;
      else bad_value(key, value, "document or paragraph");
    } else throw unknown();
  } else if (section == "vocab") {
    if (name == "sample_total") vocab.sample_total = parse_uint(key, value);
    else if (name == "target_size") vocab.target_size = parse_uint(key, value);
    else if (name == "min_char_count") vocab.min_char_count = parse_uint(key, value);
    else if (name == "coverage_reference") {
      if (trim(value).empty()) vocab.coverage_reference.reset();
      else vocab.coverage_reference = resolve(value, base_dir);
    } else throw unknown();
  } else if (section == "examples") {
    auto& c = examples.masking;
    if (name == "masked_lm_prob") c.masked_lm_prob = parse_double(key, value);
    else if (name == "mask_token_share") c.mask_token_share = parse_double(key, value);
    else if (name == "random_share") c.random_share = parse_double(key, value);
    else if (name == "keep_share") c.keep_share = parse_double(key, value);
    else if (name == "max_predictions") c.max_predictions = parse_uint(key, value);
    else if (name == "max_seq_len") c.max_seq_len = parse_uint(key, value);
    else if (name == "short_seq_prob") c.short_seq_prob = parse_double(key, value);
    else if (name == "random_next_prob") c.random_next_prob = parse_double(key, value);
    else if (name == "max_word_chars") c.max_word_chars = parse_uint(key, value);
    else if (name == "balance_languages") {
      const auto list = split_list(value);
      examples.balance_languages = {list.begin(), list.end()};
    } else if (name == "duplication_tolerance") examples.duplication_tolerance = parse_double(key, value);
    else if (name == "vocab") {
      if (trim(value).empty()) examples.vocab.reset();
      else examples.vocab = resolve(value, base_dir);
    } else throw unknown();
  } else if (section == "source") {
    const auto dot2 = name.rfind('.');
    if (dot2 == std::string::npos) throw unknown();
    const std::string id = name.substr(0, dot2);
    const std::string field = name.substr(dot2 + 1);
    auto it = std::find_if(sources.begin(), sources.end(),
                           [&](const SourceSpec& s) { return s.source_id == id; });
    if (it == sources.end()) {
      sources.push_back(SourceSpec{id, "", {}, SourceFormat::kDocBlocks, false, false});
      it = sources.end() - 1;
    }
    if (field == "language") it->language = trim(value);
    else if (field == "format") {
      try {
        it->format = parse_source_format(trim(value));
      } catch (const Error&) {
        bad_value(key, value, "plain-lines or doc-blocks");
      }
    } else if (field == "paths") {
      it->paths.clear();
      for (const auto& p : split_list(value)) it->paths.push_back(resolve(p, base_dir));
    } else if (field == "book") it->book = parse_bool(key, value);
    else if (field == "segment") it->segment = parse_bool(key, value);
    else throw unknown();
  } else {
    throw unknown();
  }
}

const SourceSpec* Manifest::find_source(std::string_view source_id) const {
  for (const auto& s : sources) {
    if (s.source_id == source_id) return &s;
  }
  return nullptr;
}

std::vector<std::string> Manifest::language_list() const {
  if (!languages.empty()) return languages;
  std::vector<std::string> out;
  for (const auto& s : sources) {
    if (std::find(out.begin(), out.end(), s.language) == out.end()) out.push_back(s.language);
  }
  return out;
}

void Manifest::validate() const {
  auto invalid = [](const std::string& what) { return Error(ErrorCode::kInvalidArgument, what); };
  if (sources.empty()) throw invalid("manifest declares no sources");
  const auto langs = language_list();
  std::set<std::string> ids;
  for (const auto& s : sources) {
    if (s.source_id.empty() || s.source_id.find_first_of("/ \t.") != std::string::npos) {
      throw invalid("source id '" + s.source_id + "' must be a non-empty name without '/', '.' or spaces");
    }
    if (!ids.insert(s.source_id).second) throw invalid("duplicate source id '" + s.source_id + "'");
    if (s.language.empty()) throw invalid("source '" + s.source_id + "' has no language");
    if (std::find(langs.begin(), langs.end(), s.language) == langs.end()) {
      throw invalid("source '" + s.source_id + "' uses unconfigured language '" + s.language + "'");
    }
    if (s.paths.empty()) throw invalid("source '" + s.source_id + "' lists no paths");
    for (const auto& p : s.paths) {
      if (!std::filesystem::is_regular_file(p)) {
        throw Error(ErrorCode::kNotFound,
                    "source '" + s.source_id + "': input file " + p.string() + " does not exist");
      }
    }
  }
  for (const auto& l : examples.balance_languages) {
    if (std::find(langs.begin(), langs.end(), l) == langs.end()) {
      throw invalid("balance language '" + l + "' is not configured");
    }
  }
  filter.validate();
  examples.masking.validate();
  if (dedup.n < 2) throw invalid("dedup.n must be at least 2");
  if (!(dedup.threshold > 0.0 && dedup.threshold <= 1.0)) throw invalid("dedup.threshold must be in (0, 1]");
  if (vocab.target_size == 0) throw invalid("vocab.target_size must be positive");
  if (examples.duplication_tolerance < 0.0) throw invalid("examples.duplication_tolerance must be >= 0");
  if (vocab.coverage_reference && !std::filesystem::is_regular_file(*vocab.coverage_reference)) {
    throw Error(ErrorCode::kNotFound,
                "coverage reference " + vocab.coverage_reference->string() + " does not exist");
  }
  if (examples.vocab && !std::filesystem::is_regular_file(*examples.vocab)) {
    throw Error(ErrorCode::kNotFound, "vocabulary " + examples.vocab->string() + " does not exist");
  }
}

std::string Manifest::to_string() const {
  std::ostringstream out;
  out << "[run]\n"
      << "seed = " << seed << "\n"
      << "output_dir = " << output_dir.string() << "\n"
      << "languages = " << join(language_list()) << "\n\n";
  out << "[filter]\n"
      << "min_tokens = " << filter.min_tokens << "\n"
      << "max_uppercase_ratio = " << format_double(filter.max_uppercase_ratio) << "\n"
      << "max_digit_ratio = " << format_double(filter.max_digit_ratio) << "\n"
      << "max_foreign_ratio = " << format_double(filter.max_foreign_ratio) << "\n"
      << "min_lang_confidence = " << format_double(filter.min_lang_confidence) << "\n"
      << "min_document_sentences = " << filter.min_document_sentences << "\n"
      << "max_rejected_share = " << format_double(filter.max_rejected_share) << "\n"
      << "language_check = " << (filter.language_check ? "true" : "false") << "\n";
  for (const auto& [lang, letters] : filter.alphabets) {
    out << "alphabet." << lang << " = " << unicode::to_utf8(letters) << "\n";
  }
  out << "\n[dedup]\n"
      << "n = " << dedup.n << "\n"
      << "threshold = " << format_double(dedup.threshold) << "\n"
      << "granularity = " << granularity_name(dedup.granularity) << "\n\n";
  out << "[vocab]\n"
      << "sample_total = " << vocab.sample_total << "\n"
      << "target_size = " << vocab.target_size << "\n"
      << "min_char_count = " << vocab.min_char_count << "\n"
      << "coverage_reference = "
      << (vocab.coverage_reference ? vocab.coverage_reference->string() : "") << "\n\n";
  const auto& c = examples.masking;
  out << "[examples]\n"
      << "masked_lm_prob = " << format_double(c.masked_lm_prob) << "\n"
      << "mask_token_share = " << format_double(c.mask_token_share) << "\n"
      << "random_share = " << format_double(c.random_share) << "\n"
      << "keep_share = " << format_double(c.keep_share) << "\n"
      << "max_predictions = " << c.max_predictions << "\n"
      << "max_seq_len = " << c.max_seq_len << "\n"
      << "short_seq_prob = " << format_double(c.short_seq_prob) << "\n"
      << "random_next_prob = " << format_double(c.random_next_prob) << "\n"
      << "max_word_chars = " << c.max_word_chars << "\n"
      << "balance_languages = "
      << join({examples.balance_languages.begin(), examples.balance_languages.end()}) << "\n"
      << "duplication_tolerance = " << format_double(examples.duplication_tolerance) << "\n"
      << "vocab = " << (examples.vocab ? examples.vocab->string() : "") << "\n";
  for (const auto& s : sources) {
    std::vector<std::string> paths;
    for (const auto& p : s.paths) paths.push_back(p.string());
    out << "\n[source:" << s.source_id << "]\n"
        << "language = " << s.language << "\n"
        << "format = " << source_format_name(s.format) << "\n"
        << "paths = " << join(paths) << "\n"
        << "book = " << (s.book ? "true" : "false") << "\n"
        << "segment = " << (s.segment ? "true" : "false") << "\n";
  }
  return out.str();
}

}  // namespace bicorpus
