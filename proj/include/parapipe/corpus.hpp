#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parapipe/extraction.hpp"

namespace parapipe {

struct CorpusSplit {
  std::vector<ParagraphPair> train;
  std::vector<ParagraphPair> dev;
  std::vector<ParagraphPair> test;
};

// Sorts canonically, shuffles with a seeded Fisher-Yates, deals dev then test
// then train, and restores canonical order within each part.
// Throws std::invalid_argument when dev_count + test_count exceeds the corpus.
CorpusSplit split_corpus(std::vector<ParagraphPair> pairs, std::size_t dev_count, std::size_t test_count,
                         std::uint64_t seed);

// Seeded permutation of 0..n-1 (Fisher-Yates over mt19937_64, rejection-sampled bounds).
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

struct CorpusStats {
  std::uint64_t paragraph_pairs = 0;
  std::uint64_t sentence_pairs = 0;
  std::uint64_t words_src = 0;
  std::uint64_t words_tgt = 0;

  CorpusStats& operator+=(const CorpusStats& other);
  friend CorpusStats operator+(CorpusStats a, const CorpusStats& b) { return a += b; }
  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

CorpusStats compute_stats(const std::vector<ParagraphPair>& pairs);

// Buckets by sentence pairs per paragraph: 2, 3, 4, 5-10, >10.
struct LengthHistogram {
  static constexpr std::array<std::string_view, 5> kLabels = {"2", "3", "4", "5~10", ">10"};
  std::array<std::uint64_t, 5> counts{};
  std::array<double, 5> percent{};
  std::uint64_t total = 0;
};

// Throws std::invalid_argument on an empty corpus or a pair shorter than 2.
LengthHistogram length_distribution(const std::vector<ParagraphPair>& pairs);

// 147000000 -> "147M", 11700000 -> "11.7M", 32000 -> "32K", 402 -> "402".
std::string human_count(std::uint64_t value);

struct NamedStats {
  std::string name;
  CorpusStats stats;
};

// Plain-text layouts of the corpus-statistics, funnel and length tables.
std::string render_stats_table(const std::vector<NamedStats>& rows, std::string_view src_lang,
                               std::string_view tgt_lang);
std::string render_length_table(const LengthHistogram& histogram);
// Table of sentence pairs remaining after vecalign, extraction and cleaning.
std::string funnel_report(const FunnelCounters& counters);
// Every stage counter, exact values.
std::string funnel_report_detailed(const FunnelCounters& counters);

}  // namespace parapipe
