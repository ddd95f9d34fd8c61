#include "bicorpus/sample.hpp"

#include <algorithm>
#include <numeric>

#include "bicorpus/error.hpp"

namespace bicorpus {

std::uint64_t SampleQuota::total() const {
  std::uint64_t t = 0;
  for (const auto& [_, n] : languages) t += n;
  return t;
}

const SourceQuota* SampleQuota::find(std::string_view source_id) const {
  for (const auto& s : sources) {
    if (s.source_id == source_id) return &s;
  }
  return nullptr;
}

KeyValueReport SampleQuota::to_key_values() const {
  KeyValueReport kv;
  for (const auto& [language, n] : languages) kv.set("language." + language + ".quota", n);
  for (const auto& s : sources) {
    kv.set("source." + s.source_id + ".language", s.language);
    kv.set("source." + s.source_id + ".available", s.available);
    kv.set("source." + s.source_id + ".quota", s.quota);
  }
  kv.set("total", total());
  return kv;
}

SampleQuota plan_sample(const std::vector<SourceSize>& sizes, std::uint64_t total) {
  std::map<std::string, std::vector<std::size_t>> by_language;
  for (std::size_t i = 0; i < sizes.size(); ++i) by_language[sizes[i].language].push_back(i);
  if (by_language.empty()) throw Error(ErrorCode::kInvalidArgument, "no sources to sample from");
  if (total % by_language.size() != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample total " + std::to_string(total) + " does not divide evenly across " +
                    std::to_string(by_language.size()) + " languages");
  }
  const std::uint64_t per_language = total / by_language.size();

  SampleQuota plan;
  for (const auto& s : sizes) plan.sources.push_back({s.source_id, s.language, s.sentences, 0});

  for (const auto& [language, members] : by_language) {
    unsigned __int128 language_size = 0;
    for (auto i : members) language_size += sizes[i].sentences;
    if (language_size == 0) {
      throw Error(ErrorCode::kInvalidArgument, "language " + language + " has no sentences");
    }
    std::uint64_t assigned = 0;
    std::vector<std::pair<unsigned __int128, std::size_t>> remainders;
    for (auto i : members) {
      const unsigned __int128 scaled =
          static_cast<unsigned __int128>(per_language) * sizes[i].sentences;
      plan.sources[i].quota = static_cast<std::uint64_t>(scaled / language_size);
      assigned += plan.sources[i].quota;
      remainders.emplace_back(scaled % language_size, i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::uint64_t k = 0; assigned < per_language; ++k, ++assigned) {
      ++plan.sources[remainders[k % remainders.size()].second].quota;
    }
    plan.languages[language] = per_language;
  }

  std::string shortfall;
  for (const auto& s : plan.sources) {
    if (s.quota > s.available) {
      if (!shortfall.empty()) shortfall += ", ";
      shortfall += s.source_id + " needs " + std::to_string(s.quota) + " has " +
                   std::to_string(s.available);
    }
  }
  if (!shortfall.empty()) {
    throw Error(ErrorCode::kShortfall, "sampling without replacement impossible: " + shortfall);
  }
  return plan;
}

SentenceReservoir::SentenceReservoir(std::uint64_t quota, std::uint64_t seed)
    : quota_(quota), rng_(seed) {
  slots_.reserve(quota);
}

void SentenceReservoir::offer(std::string_view sentence) {
  const std::uint64_t position = seen_++;
  if (position < quota_) {
    slots_.emplace_back(position, std::string(sentence));
    return;
  }
  const std::uint64_t j = rng_.uniform(position + 1);
  if (j < quota_) slots_[j] = {position, std::string(sentence)};
}

std::vector<std::string> SentenceReservoir::take() {
  if (seen_ < quota_) {
    throw Error(ErrorCode::kShortfall, "stream has " + std::to_string(seen_) +
                                           " sentences, quota is " + std::to_string(quota_));
  }
  std::sort(slots_.begin(), slots_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  out.reserve(slots_.size());
  for (auto& [_, s] : slots_) out.push_back(std::move(s));
  slots_.clear();
  return out;
}

std::vector<std::string> draw_sample(
    const SampleQuota& quota, const std::map<std::string, std::vector<std::string>>& streams,
    std::uint64_t seed) {
  std::vector<std::string> sample;
  for (const auto& source : quota.sources) {
    auto it = streams.find(source.source_id);
    if (it == streams.end()) {
      throw Error(ErrorCode::kNotFound, "no stream for source " + source.source_id);
    }
    SentenceReservoir reservoir(source.quota, derive_seed(seed, "sample/" + source.source_id));
    for (const auto& s : it->second) reservoir.offer(s);
    for (auto& s : reservoir.take()) sample.push_back(std::move(s));
  }
  return sample;
}

}  // namespace bicorpus
