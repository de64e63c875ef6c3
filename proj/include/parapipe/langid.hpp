#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace parapipe {

inline constexpr std::size_t kProfileSize = 400;
inline constexpr std::size_t kMaxNgram = 5;
inline constexpr std::size_t kMinSampleChars = 10000;

// Rank-ordered character n-grams (n = 1..5) of one language.
class LanguageProfile {
 public:
  LanguageProfile() = default;
  LanguageProfile(std::string lang, std::vector<std::string> ranked);

  const std::string& lang() const { return lang_; }
  const std::vector<std::string>& ngrams() const { return ranked_; }
  std::optional<std::size_t> rank(const std::string& ngram) const;

  // "<ngram>\t<rank>" lines, rank 0-based.
  void save(const std::filesystem::path& path) const;
  static LanguageProfile load(const std::filesystem::path& path, std::string lang);

  friend bool operator==(const LanguageProfile& a, const LanguageProfile& b) {
    return a.lang_ == b.lang_ && a.ranked_ == b.ranked_;
  }

 private:
  std::string lang_;
  std::vector<std::string> ranked_;
  std::unordered_map<std::string, std::size_t> rank_;
};

// The `limit` most frequent n-grams of `text`; frequency ties broken by byte order.
// Words are lowercased and padded with one space on each side; non-letters separate words.
std::vector<std::string> ranked_ngrams(std::string_view text, std::size_t limit = kProfileSize);

// Throws std::invalid_argument when a sample has fewer than kMinSampleChars code points.
LanguageProfile build_profile(std::string lang, std::string_view sample);
std::vector<LanguageProfile> langid_train(const std::vector<std::pair<std::string, std::string>>& samples);

struct LanguageGuess {
  std::optional<std::string> lang;  // nullopt = UNKNOWN
  double margin = 0.0;              // distance gap between runner-up and winner
};

std::size_t out_of_place_distance(const std::vector<std::string>& text_ranked, const LanguageProfile& profile);

class LanguageIdentifier {
 public:
  LanguageIdentifier(std::vector<LanguageProfile> profiles, std::size_t min_chars);

  // Loads "<dir>/<lang>.tsv" for each language code given.
  static LanguageIdentifier from_directory(const std::filesystem::path& dir, const std::vector<std::string>& langs,
                                           std::size_t min_chars);

  LanguageGuess classify(std::string_view text) const;
  const std::vector<LanguageProfile>& profiles() const { return profiles_; }

 private:
  std::vector<LanguageProfile> profiles_;
  std::size_t min_chars_;
};

}  // namespace parapipe
