#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "parapipe/config.hpp"
#include "parapipe/extraction.hpp"
#include "parapipe/langid.hpp"

namespace parapipe {

// Removes every sentence pair with a side confidently identified as the wrong
// language. Returns nullopt when fewer than two sentence pairs survive.
std::optional<ParagraphPair> filter_language(ParagraphPair pair, const LanguageIdentifier& langid,
                                             const PipelineConfig& cfg);

std::size_t count_words(std::string_view text);
std::size_t count_words(const ParagraphPair& pair, bool source);

// True iff both sides have at least cfg.min_words whitespace tokens.
bool filter_length(const ParagraphPair& pair, const PipelineConfig& cfg);

// Sorted, unique 64-bit hashes of lowercased token k-grams. A text shorter than
// k tokens yields one shingle made of all its tokens.
using ShingleSet = std::vector<std::uint64_t>;
ShingleSet make_shingles(std::string_view text, std::size_t k);
// |A ∩ B| / |A ∪ B|; 0 when both are empty.
double jaccard(const ShingleSet& a, const ShingleSet& b);

inline constexpr std::size_t kMinHashPermutations = 128;
inline constexpr std::size_t kLshBands = 32;
inline constexpr std::size_t kLshRows = 4;
static_assert(kLshBands * kLshRows == kMinHashPermutations);

using MinHash = std::array<std::uint64_t, kMinHashPermutations>;
MinHash make_minhash(const ShingleSet& shingles);

struct OverlapSignature {
  ShingleSet src;
  ShingleSet tgt;
  MinHash src_minhash{};
  MinHash tgt_minhash{};
};
OverlapSignature make_signature(const ParagraphPair& pair, std::size_t shingle_size, bool with_minhash = true);

// Order-dependent near-duplicate admission: a pair is rejected iff, on the
// source side or on the target side, its shingle Jaccard with some previously
// admitted pair exceeds the threshold.
class OverlapFilter {
 public:
  OverlapFilter(double threshold, OverlapMethod method) : threshold_(threshold), method_(method) {}

  bool admit(const OverlapSignature& signature);
  std::size_t retained() const { return src_sets_.size(); }

 private:
  using Postings = std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>;

  std::vector<std::uint32_t> candidates(const OverlapSignature& signature) const;
  void index(const OverlapSignature& signature, std::uint32_t id);

  double threshold_;
  OverlapMethod method_;
  std::vector<ShingleSet> src_sets_;
  std::vector<ShingleSet> tgt_sets_;
  Postings src_postings_;  // shingle (exact) or band key (lsh) -> admitted ids
  Postings tgt_postings_;
  mutable std::vector<std::uint32_t> stamp_;
  mutable std::uint32_t epoch_ = 0;
};

std::vector<ParagraphPair> filter_overlap(std::vector<ParagraphPair> pairs, const PipelineConfig& cfg);

// Stateless per-pair cleaning work, computable in parallel.
struct CleaningCandidate {
  std::optional<ParagraphPair> pair;  // after the language filter
  bool long_enough = false;
  OverlapSignature signature;
};
CleaningCandidate prepare_cleaning(ParagraphPair pair, const LanguageIdentifier& langid, const PipelineConfig& cfg);

// Serial admission of prepared candidates in canonical order.
class CleaningAdmitter {
 public:
  explicit CleaningAdmitter(const PipelineConfig& cfg) : overlap_(cfg.overlap_threshold, cfg.overlap_method) {}
  std::optional<ParagraphPair> admit(CleaningCandidate candidate, FunnelCounters& counters);

 private:
  OverlapFilter overlap_;
};

std::vector<ParagraphPair> clean_pipeline(std::vector<ParagraphPair> pairs, const LanguageIdentifier& langid,
                                          const PipelineConfig& cfg, FunnelCounters& counters);

}  // namespace parapipe
