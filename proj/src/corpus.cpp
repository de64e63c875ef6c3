#include "parapipe/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <stdexcept>

#include "parapipe/cleaning.hpp"
#include "parapipe/random.hpp"

namespace parapipe {

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

CorpusSplit split_corpus(std::vector<ParagraphPair> pairs, std::size_t dev_count, std::size_t test_count,
                         std::uint64_t seed) {
  if (dev_count + test_count > pairs.size()) {
    throw std::invalid_argument(fmt::format("dev ({}) + test ({}) exceeds corpus size ({})", dev_count, test_count,
                                            pairs.size()));
  }
  std::sort(pairs.begin(), pairs.end(), canonical_less);
  const auto order = seeded_permutation(pairs.size(), seed);
  CorpusSplit split;
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& part = k < dev_count ? split.dev : k < dev_count + test_count ? split.test : split.train;
    part.push_back(std::move(pairs[order[k]]));
  }
  for (auto* part : {&split.train, &split.dev, &split.test}) std::sort(part->begin(), part->end(), canonical_less);
  return split;
}

CorpusStats& CorpusStats::operator+=(const CorpusStats& o) {
  paragraph_pairs += o.paragraph_pairs;
  sentence_pairs += o.sentence_pairs;
  words_src += o.words_src;
  words_tgt += o.words_tgt;
  return *this;
}

CorpusStats compute_stats(const std::vector<ParagraphPair>& pairs) {
  CorpusStats stats;
  for (const auto& pair : pairs) {
    ++stats.paragraph_pairs;
    stats.sentence_pairs += pair.size();
    stats.words_src += count_words(pair, true);
    stats.words_tgt += count_words(pair, false);
  }
  return stats;
}

LengthHistogram length_distribution(const std::vector<ParagraphPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("length distribution of an empty corpus is undefined");
  LengthHistogram h;
  for (const auto& pair : pairs) {
    const std::size_t n = pair.size();
    if (n < 2) {
      throw std::invalid_argument(
          fmt::format("paragraph pair '{}' has {} sentence pair(s); the histogram starts at 2", pair.id(), n));
    }
    const std::size_t bucket = n <= 4 ? n - 2 : n <= 10 ? 3 : 4;
    ++h.counts[bucket];
    ++h.total;
  }
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    h.percent[b] = 100.0 * static_cast<double>(h.counts[b]) / static_cast<double>(h.total);
  }
  return h;
}

namespace {

std::string trim_decimal(std::string s) {
  if (const auto dot = s.find('.'); dot != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

}  // namespace

std::string human_count(std::uint64_t value) {
  const double v = static_cast<double>(value);
  if (value >= 1'000'000 || std::llround(v / 1e3) >= 1000) {
    const double m = v / 1e6;
    return (m >= 99.95 ? fmt::format("{:.0f}", m) : trim_decimal(fmt::format("{:.1f}", m))) + "M";
  }
  if (value >= 10'000) return fmt::format("{}K", std::llround(v / 1e3));
  return std::to_string(value);
}

std::string render_stats_table(const std::vector<NamedStats>& rows, std::string_view src_lang,
                               std::string_view tgt_lang) {
  auto lang_title = [](std::string_view lang) {
    std::string s(lang);
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
  };
  std::size_t name_width = 5;
  for (const auto& row : rows) name_width = std::max(name_width, row.name.size());
  auto line = [name_width](std::string_view name, std::string_view a, std::string_view b, std::string_view c,
                           std::string_view d) {
    std::string s = fmt::format("{:<{}} | {:>10} | {:>10} | {:>7} | {:>7}", name, name_width, a, b, c, d);
    s.erase(s.find_last_not_of(' ') + 1);
    return s + "\n";
  };
  std::string out = fmt::format("{:<{}} | {:>10} | {:>10} | {:^17}", "", name_width, "", "", "Words");
  out.erase(out.find_last_not_of(' ') + 1);
  out += "\n";
  out += line("", "Paragraphs", "Sentences", lang_title(src_lang), lang_title(tgt_lang));
  out += std::string(name_width + 46, '-') + "\n";
  for (const auto& row : rows) {
    out += line(row.name, human_count(row.stats.paragraph_pairs), human_count(row.stats.sentence_pairs),
                human_count(row.stats.words_src), human_count(row.stats.words_tgt));
  }
  return out;
}

std::string render_length_table(const LengthHistogram& histogram) {
  std::string out = fmt::format("{:<9} | {}\n", "Sentences", "Distribution");
  out += std::string(24, '-') + "\n";
  for (std::size_t b = 0; b < histogram.counts.size(); ++b) {
    out += fmt::format("{:<9} | {:.2f}%\n", LengthHistogram::kLabels[b], histogram.percent[b]);
  }
  return out;
}

std::string funnel_report(const FunnelCounters& counters) {
  const std::pair<std::string_view, std::uint64_t> rows[] = {
      {"Original vecalign", counters.links_input},
      {"After parallel paragraph extraction", counters.sentence_pairs_surviving},
      {"After cleaning", counters.sentence_pairs_after_cleaning},
  };
  std::string out;
  for (const auto& [label, value] : rows) out += fmt::format("{:<36} | {}\n", label, human_count(value));
  return out;
}

std::string funnel_report_detailed(const FunnelCounters& counters) {
  std::string out;
  for (const auto& stage : counters.stages()) out += fmt::format("{:<38} | {}\n", stage.label, stage.value);
  return out;
}

}  // namespace parapipe
