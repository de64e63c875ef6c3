#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "parapipe/hashing.hpp"
#include "parapipe/ingest.hpp"
#include "parapipe/segmentation.hpp"

namespace parapipe {

struct SentencePair {
  std::size_t src_idx = 0;
  std::size_t tgt_idx = 0;
  std::string src_text;
  std::string tgt_text;
  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

// An aligned paragraph pair: its retained one-to-one sentence links, ordered by source index.
struct ParagraphPair {
  std::string pair_id;
  std::size_t src_para = 0;
  std::size_t tgt_para = 0;
  std::vector<SentencePair> sentence_pairs;

  std::string id() const;
  std::size_t size() const { return sentence_pairs.size(); }
  friend bool operator==(const ParagraphPair&, const ParagraphPair&) = default;
};

// Canonical order: (pair_id, src_para, tgt_para).
bool canonical_less(const ParagraphPair& a, const ParagraphPair& b);

// Stage counters for the whole run. Extraction and cleaning both add to it.
struct FunnelCounters {
  // ingest
  std::uint64_t documents = 0;
  std::uint64_t documents_skipped = 0;
  std::uint64_t documents_without_alignments = 0;
  // extraction
  std::uint64_t links_input = 0;
  std::uint64_t links_one_to_one = 0;
  std::uint64_t src_paragraphs_linked = 0;
  std::uint64_t pairs_candidate = 0;
  std::uint64_t sentences_in_candidates = 0;
  std::uint64_t sentences_aligned = 0;
  std::uint64_t pairs_after_monotonic = 0;
  std::uint64_t pairs_after_dedup = 0;
  std::uint64_t pairs_after_singleton = 0;
  std::uint64_t sentence_pairs_surviving = 0;
  // cleaning
  std::uint64_t pairs_after_language = 0;
  std::uint64_t sentence_pairs_after_language = 0;
  std::uint64_t pairs_after_length = 0;
  std::uint64_t pairs_after_overlap = 0;
  std::uint64_t sentence_pairs_after_cleaning = 0;

  struct Stage {
    std::string_view key;
    std::string_view label;
    std::uint64_t value;
  };
  // Every counter in pipeline order.
  std::vector<Stage> stages() const;

  FunnelCounters& operator+=(const FunnelCounters& other);
  friend bool operator==(const FunnelCounters&, const FunnelCounters&) = default;
};

std::vector<AlignmentLink> filter_one_to_one(std::span<const AlignmentLink> links);

// Groups one-to-one links by paragraph and emits (P, Q) iff every link touching
// P lands in Q and every link touching Q starts in P. Sentences of P and Q that
// carry no link are left out. Output is ordered by source paragraph.
// Throws DataError when a link refers to a sentence the document does not have.
std::vector<ParagraphPair> consolidate(std::string_view pair_id, const SegmentedDocument& src,
                                       const SegmentedDocument& tgt, std::span<const AlignmentLink> links,
                                       FunnelCounters* counters = nullptr);

// Both index sequences strictly increasing (a repeated sentence breaks monotonicity).
bool check_monotonic(const ParagraphPair& pair);

// Lowercased, whitespace-collapsed source sentences, a TAB, then the target side.
std::string dedup_key(const ParagraphPair& pair);

// First-occurrence-wins admission over the whole run.
class Deduper {
 public:
  bool admit(const ParagraphPair& pair) { return admit_key(hash128(dedup_key(pair))); }
  bool admit_key(const Hash128& key) { return seen_.insert(key).second; }
  std::size_t size() const { return seen_.size(); }

 private:
  std::unordered_set<Hash128, Hash128Hasher> seen_;
};

std::vector<ParagraphPair> dedupe(std::vector<ParagraphPair> pairs, Deduper& deduper);

std::vector<ParagraphPair> drop_singletons(std::vector<ParagraphPair> pairs);

// Stateless per-document part: one-to-one filter, consolidation, monotonicity.
struct DocumentCandidates {
  std::vector<ParagraphPair> pairs;
  std::vector<Hash128> dedup_keys;
  FunnelCounters counters;
};
DocumentCandidates extract_candidates(std::string_view pair_id, const SegmentedDocument& src,
                                      const SegmentedDocument& tgt, std::span<const AlignmentLink> links);

// Stateful part: dedup against everything admitted so far, then the singleton rule.
std::vector<ParagraphPair> admit_candidates(DocumentCandidates candidates, Deduper& deduper,
                                            FunnelCounters& counters);

std::vector<ParagraphPair> extract_pipeline(std::string_view pair_id, const SegmentedDocument& src,
                                            const SegmentedDocument& tgt, std::span<const AlignmentLink> links,
                                            FunnelCounters& counters, Deduper& deduper);
std::vector<ParagraphPair> extract_pipeline(std::string_view pair_id, const SegmentedDocument& src,
                                            const SegmentedDocument& tgt, std::span<const AlignmentLink> links,
                                            FunnelCounters& counters);

// Exhaustive reference for the extraction rules, for small inputs only
// (at most kOracleMaxSentences per side). Output is in canonical order.
inline constexpr std::size_t kOracleMaxSentences = 64;
std::vector<ParagraphPair> oracle_extract(std::string_view pair_id, const SegmentedDocument& src,
                                          const SegmentedDocument& tgt, std::span<const AlignmentLink> links);

// One JSON object per line: {id, src, tgt, src_para, tgt_para, pair_id}.
std::string to_json_line(const ParagraphPair& pair);
// Sentence indices are not serialized; parsed pairs get positional indices.
ParagraphPair parse_paragraph_pair_line(std::string_view line, std::size_t line_no = 0);
std::vector<ParagraphPair> read_paragraph_pairs(LineReader& lines);

}  // namespace parapipe
