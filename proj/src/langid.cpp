#include "parapipe/langid.hpp"

#include <algorithm>
#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "parapipe/io.hpp"
#include "parapipe/utf8.hpp"

namespace parapipe {

LanguageProfile::LanguageProfile(std::string lang, std::vector<std::string> ranked)
    : lang_(std::move(lang)), ranked_(std::move(ranked)) {
  for (std::size_t i = 0; i < ranked_.size(); ++i) {
    if (!rank_.emplace(ranked_[i], i).second) {
      throw std::invalid_argument(fmt::format("profile '{}': duplicate n-gram '{}'", lang_, ranked_[i]));
    }
  }
}

std::optional<std::size_t> LanguageProfile::rank(const std::string& ngram) const {
  if (auto it = rank_.find(ngram); it != rank_.end()) return it->second;
  return std::nullopt;
}

void LanguageProfile::save(const std::filesystem::path& path) const {
  std::string out;
  for (std::size_t i = 0; i < ranked_.size(); ++i) out += fmt::format("{}\t{}\n", ranked_[i], i);
  write_file(path, out);
}

LanguageProfile LanguageProfile::load(const std::filesystem::path& path, std::string lang) {
  LineReader lines(path);
  std::vector<std::pair<std::size_t, std::string>> entries;
  std::string line;
  while (lines.next(line)) {
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    std::size_t rank = 0;
    const char* first = line.data() + (tab == std::string::npos ? 0 : tab + 1);
    const auto [end, ec] = std::from_chars(first, line.data() + line.size(), rank);
    if (tab == std::string::npos || tab == 0 || ec != std::errc{} || end != line.data() + line.size()) {
      throw DataError(fmt::format("{}: expected '<ngram>\\t<rank>'", path.string()), lines.line_number());
    }
    entries.emplace_back(rank, line.substr(0, tab));
  }
  std::sort(entries.begin(), entries.end());
  std::vector<std::string> ranked;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first != i) throw DataError(fmt::format("{}: ranks must be 0..n-1", path.string()));
    ranked.push_back(std::move(entries[i].second));
  }
  return LanguageProfile(std::move(lang), std::move(ranked));
}

namespace {

bool is_letter(char32_t cp) {
  if (cp < 0x80) return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
  if (utf8::is_space(cp)) return false;
  if (cp <= 0xBF || cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, symbols, arrows
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF20) return false;
  return true;
}

// Lowercased words of letters only.
std::vector<std::u32string> letter_words(std::string_view text) {
  std::vector<std::u32string> words;
  std::u32string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::next(text, pos);
    if (is_letter(cp)) {
      current.push_back(utf8::to_lower(cp));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::string encode(std::u32string_view cps) {
  std::string out;
  for (char32_t cp : cps) utf8::append(out, cp);
  return out;
}

}  // namespace

std::vector<std::string> ranked_ngrams(std::string_view text, std::size_t limit) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& word : letter_words(text)) {
    const std::u32string padded = U" " + word + U" ";
    for (std::size_t n = 1; n <= kMaxNgram; ++n) {
      for (std::size_t i = 0; i + n <= padded.size(); ++i) {
        ++counts[encode(std::u32string_view(padded).substr(i, n))];
      }
    }
  }
  std::vector<std::pair<std::string, std::size_t>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> ranked;
  for (std::size_t i = 0; i < items.size() && i < limit; ++i) ranked.push_back(std::move(items[i].first));
  return ranked;
}

LanguageProfile build_profile(std::string lang, std::string_view sample) {
  if (!utf8::valid(sample)) throw std::invalid_argument(fmt::format("sample for '{}' is not valid UTF-8", lang));
  const std::size_t chars = utf8::length(sample);
  if (chars < kMinSampleChars) {
    throw std::invalid_argument(fmt::format("sample for '{}' has {} characters, need at least {}", lang, chars,
                                            kMinSampleChars));
  }
  auto ranked = ranked_ngrams(sample, kProfileSize);
  if (ranked.size() < kProfileSize) {
    throw std::invalid_argument(fmt::format("sample for '{}' yields only {} distinct n-grams", lang, ranked.size()));
  }
  return LanguageProfile(std::move(lang), std::move(ranked));
}

std::vector<LanguageProfile> langid_train(const std::vector<std::pair<std::string, std::string>>& samples) {
  std::vector<LanguageProfile> profiles;
  profiles.reserve(samples.size());
  for (const auto& [lang, sample] : samples) profiles.push_back(build_profile(lang, sample));
  return profiles;
}

std::size_t out_of_place_distance(const std::vector<std::string>& text_ranked, const LanguageProfile& profile) {
  std::size_t distance = 0;
  for (std::size_t i = 0; i < text_ranked.size(); ++i) {
    if (const auto r = profile.rank(text_ranked[i])) {
      distance += *r > i ? *r - i : i - *r;
    } else {
      distance += kProfileSize;
    }
  }
  return distance;
}

LanguageIdentifier::LanguageIdentifier(std::vector<LanguageProfile> profiles, std::size_t min_chars)
    : profiles_(std::move(profiles)), min_chars_(min_chars) {
  if (profiles_.size() < 2) throw std::invalid_argument("language identification needs at least two profiles");
  std::sort(profiles_.begin(), profiles_.end(),
            [](const LanguageProfile& a, const LanguageProfile& b) { return a.lang() < b.lang(); });
}

LanguageIdentifier LanguageIdentifier::from_directory(const std::filesystem::path& dir,
                                                      const std::vector<std::string>& langs, std::size_t min_chars) {
  std::vector<LanguageProfile> profiles;
  for (const auto& lang : langs) profiles.push_back(LanguageProfile::load(dir / (lang + ".tsv"), lang));
  return LanguageIdentifier(std::move(profiles), min_chars);
}

LanguageGuess LanguageIdentifier::classify(std::string_view text) const {
  const auto trimmed = utf8::trim(text);
  if (utf8::length(trimmed) < min_chars_) return {};
  const auto ranked = ranked_ngrams(trimmed, kProfileSize);
  if (ranked.empty()) return {};
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::size_t second = best;
  const LanguageProfile* winner = nullptr;
  for (const auto& profile : profiles_) {
    const std::size_t d = out_of_place_distance(ranked, profile);
    if (d < best) {
      second = best;
      best = d;
      winner = &profile;
    } else if (d < second) {
      second = d;
    }
  }
  return {winner->lang(), static_cast<double>(second - best)};
}

}  // namespace parapipe
