#include <gtest/gtest.h>

#include "parapipe/config.hpp"
#include "parapipe/io.hpp"
#include "parapipe/langid.hpp"

namespace parapipe {
namespace {

std::string sample(const std::string& lang) {
  return read_file(default_data_dir() / "langid" / "samples" / (lang + ".txt"));
}

const LanguageIdentifier& shipped() {
  static const LanguageIdentifier id =
      LanguageIdentifier::from_directory(default_data_dir() / "langid" / "profiles", {"de", "en", "fr"}, 20);
  return id;
}

TEST(Profile, EnglishTopUnigramIsSpaceOrE) {
  const auto profile = build_profile("en", sample("en"));
  ASSERT_EQ(profile.ngrams().size(), kProfileSize);
  const auto& top = profile.ngrams().front();
  EXPECT_TRUE(top == " " || top == "e") << "top n-gram: '" << top << "'";
}

TEST(Profile, IdenticalSamplesGiveIdenticalRankings) {
  const auto a = build_profile("xx", sample("de"));
  const auto b = build_profile("xx", sample("de"));
  EXPECT_EQ(a, b);
}

TEST(Profile, RejectsShortSamples) {
  EXPECT_THROW(build_profile("en", ""), std::invalid_argument);
  EXPECT_THROW(build_profile("en", sample("en").substr(0, 5000)), std::invalid_argument);
}

TEST(Profile, ShippedProfilesMatchShippedSamples) {
  for (const std::string lang : {"en", "de", "fr"}) {
    const auto built = build_profile(lang, sample(lang));
    const auto loaded = LanguageProfile::load(default_data_dir() / "langid" / "profiles" / (lang + ".tsv"), lang);
    EXPECT_EQ(built, loaded) << lang;
  }
}

TEST(Profile, SaveLoadRoundTrip) {
  const auto profile = build_profile("fr", sample("fr"));
  const auto path = std::filesystem::temp_directory_path() / "parapipe_profile_test.tsv";
  profile.save(path);
  EXPECT_EQ(LanguageProfile::load(path, "fr"), profile);
  std::filesystem::remove(path);
}

TEST(RankedNgrams, CountsPaddedWordNgrams) {
  // "ab ab": words " ab " twice -> " ", "a", "b", " a", "ab", "b ", " ab", "ab ", " ab " each twice
  const auto ranked = ranked_ngrams("ab ab", 100);
  EXPECT_EQ(ranked.size(), 9u);
  EXPECT_EQ(ranked.front(), " ");  // 4 occurrences of the pad
}

TEST(OutOfPlace, IdenticalRankingIsZero) {
  const auto profile = build_profile("en", sample("en"));
  EXPECT_EQ(out_of_place_distance(profile.ngrams(), profile), 0u);
}

TEST(Classify, Examples) {
  EXPECT_EQ(shipped().classify("the quick brown fox jumps over").lang, std::optional<std::string>("en"));
  EXPECT_EQ(shipped().classify("der schnelle braune Fuchs springt").lang, std::optional<std::string>("de"));
  EXPECT_EQ(shipped().classify("ok").lang, std::nullopt);
  EXPECT_EQ(shipped().classify("").lang, std::nullopt);
}

TEST(Classify, WithOnlyEnglishAndGermanProfiles) {
  const auto id = LanguageIdentifier::from_directory(default_data_dir() / "langid" / "profiles", {"en", "de"}, 20);
  EXPECT_EQ(id.classify("the quick brown fox jumps over").lang, std::optional<std::string>("en"));
  EXPECT_EQ(id.classify("der schnelle braune Fuchs springt").lang, std::optional<std::string>("de"));
}

TEST(Classify, FrenchSentence) {
  const auto guess = shipped().classify("Le chat dort sur le canapé depuis ce matin.");
  EXPECT_EQ(guess.lang, std::optional<std::string>("fr"));
  EXPECT_GT(guess.margin, 0.0);
}

TEST(Classify, NeedsTwoProfiles) {
  EXPECT_THROW(LanguageIdentifier({build_profile("en", sample("en"))}, 20), std::invalid_argument);
}

}  // namespace
}  // namespace parapipe
