#include "parapipe/cleaning.hpp"

#include <algorithm>
#include <limits>

#include "parapipe/hashing.hpp"
#include "parapipe/utf8.hpp"

namespace parapipe {

std::optional<ParagraphPair> filter_language(ParagraphPair pair, const LanguageIdentifier& langid,
                                             const PipelineConfig& cfg) {
  auto wrong = [&](std::string_view text, const std::string& expected) {
    const auto guess = langid.classify(text);
    return guess.lang.has_value() && *guess.lang != expected;
  };
  std::erase_if(pair.sentence_pairs, [&](const SentencePair& sp) {
    return wrong(sp.src_text, cfg.expected_src_lang) || wrong(sp.tgt_text, cfg.expected_tgt_lang);
  });
  if (pair.sentence_pairs.size() < 2) return std::nullopt;
  return pair;
}

std::size_t count_words(std::string_view text) { return utf8::split_whitespace(text).size(); }

std::size_t count_words(const ParagraphPair& pair, bool source) {
  // Sentences never contain a token that spans a sentence boundary, so the
  // per-sentence sum equals the count over the space-joined side.
  std::size_t n = 0;
  for (const auto& sp : pair.sentence_pairs) n += count_words(source ? sp.src_text : sp.tgt_text);
  return n;
}

bool filter_length(const ParagraphPair& pair, const PipelineConfig& cfg) {
  return count_words(pair, true) >= cfg.min_words && count_words(pair, false) >= cfg.min_words;
}

ShingleSet make_shingles(std::string_view text, std::size_t k) {
  std::vector<std::string> tokens;
  for (auto token : utf8::split_whitespace(text)) tokens.push_back(utf8::lower(token));
  ShingleSet out;
  if (tokens.empty()) return out;
  const std::size_t width = std::min(k, tokens.size());
  std::string shingle;
  for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
    shingle.clear();
    for (std::size_t j = 0; j < width; ++j) {
      if (j) shingle.push_back(' ');
      shingle += tokens[i + j];
    }
    out.push_back(hash64(shingle));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double jaccard(const ShingleSet& a, const ShingleSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t shared = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++shared;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(shared) / static_cast<double>(a.size() + b.size() - shared);
}

namespace {

const std::array<std::uint64_t, kMinHashPermutations>& permutation_seeds() {
  static const auto seeds = [] {
    std::array<std::uint64_t, kMinHashPermutations> s{};
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = mix64(0x6D696E68617368ULL + i);
    return s;
  }();
  return seeds;
}

std::uint64_t band_key(const MinHash& mh, std::size_t band) {
  std::uint64_t h = mix64(0xBA4D0000ULL + band);
  for (std::size_t r = 0; r < kLshRows; ++r) h = mix64(h ^ mh[band * kLshRows + r]);
  return h;
}

std::string join_side(const ParagraphPair& pair, bool source) {
  std::string out;
  for (const auto& sp : pair.sentence_pairs) {
    if (!out.empty()) out.push_back(' ');
    out += source ? sp.src_text : sp.tgt_text;
  }
  return out;
}

}  // namespace

MinHash make_minhash(const ShingleSet& shingles) {
  MinHash mh;
  mh.fill(std::numeric_limits<std::uint64_t>::max());
  const auto& seeds = permutation_seeds();
  for (const std::uint64_t s : shingles) {
    for (std::size_t i = 0; i < kMinHashPermutations; ++i) mh[i] = std::min(mh[i], mix64(s ^ seeds[i]));
  }
  return mh;
}

OverlapSignature make_signature(const ParagraphPair& pair, std::size_t shingle_size, bool with_minhash) {
  OverlapSignature sig;
  sig.src = make_shingles(join_side(pair, true), shingle_size);
  sig.tgt = make_shingles(join_side(pair, false), shingle_size);
  if (with_minhash) {
    sig.src_minhash = make_minhash(sig.src);
    sig.tgt_minhash = make_minhash(sig.tgt);
  }
  return sig;
}

std::vector<std::uint32_t> OverlapFilter::candidates(const OverlapSignature& sig) const {
  std::vector<std::uint32_t> out;
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  auto collect = [&](const Postings& postings, std::uint64_t key) {
    const auto it = postings.find(key);
    if (it == postings.end()) return;
    for (const std::uint32_t id : it->second) {
      if (stamp_[id] == epoch_) continue;
      stamp_[id] = epoch_;
      out.push_back(id);
    }
  };
  if (method_ == OverlapMethod::kExact) {
    for (const auto s : sig.src) collect(src_postings_, s);
    for (const auto s : sig.tgt) collect(tgt_postings_, s);
  } else {
    for (std::size_t b = 0; b < kLshBands; ++b) {
      if (!sig.src.empty()) collect(src_postings_, band_key(sig.src_minhash, b));
      if (!sig.tgt.empty()) collect(tgt_postings_, band_key(sig.tgt_minhash, b));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void OverlapFilter::index(const OverlapSignature& sig, std::uint32_t id) {
  if (method_ == OverlapMethod::kExact) {
    for (const auto s : sig.src) src_postings_[s].push_back(id);
    for (const auto s : sig.tgt) tgt_postings_[s].push_back(id);
  } else {
    for (std::size_t b = 0; b < kLshBands; ++b) {
      if (!sig.src.empty()) src_postings_[band_key(sig.src_minhash, b)].push_back(id);
      if (!sig.tgt.empty()) tgt_postings_[band_key(sig.tgt_minhash, b)].push_back(id);
    }
  }
}

bool OverlapFilter::admit(const OverlapSignature& sig) {
  for (const std::uint32_t id : candidates(sig)) {
    if (jaccard(sig.src, src_sets_[id]) > threshold_ || jaccard(sig.tgt, tgt_sets_[id]) > threshold_) return false;
  }
  const auto id = static_cast<std::uint32_t>(src_sets_.size());
  index(sig, id);
  src_sets_.push_back(sig.src);
  tgt_sets_.push_back(sig.tgt);
  stamp_.push_back(0);
  return true;
}

std::vector<ParagraphPair> filter_overlap(std::vector<ParagraphPair> pairs, const PipelineConfig& cfg) {
  OverlapFilter filter(cfg.overlap_threshold, cfg.overlap_method);
  std::vector<ParagraphPair> kept;
  for (auto& pair : pairs) {
    if (filter.admit(make_signature(pair, cfg.shingle_size, cfg.overlap_method == OverlapMethod::kLsh))) {
      kept.push_back(std::move(pair));
    }
  }
  return kept;
}

CleaningCandidate prepare_cleaning(ParagraphPair pair, const LanguageIdentifier& langid, const PipelineConfig& cfg) {
  CleaningCandidate c;
  c.pair = filter_language(std::move(pair), langid, cfg);
  if (!c.pair) return c;
  c.long_enough = filter_length(*c.pair, cfg);
  if (c.long_enough) c.signature = make_signature(*c.pair, cfg.shingle_size, cfg.overlap_method == OverlapMethod::kLsh);
  return c;
}

std::optional<ParagraphPair> CleaningAdmitter::admit(CleaningCandidate candidate, FunnelCounters& counters) {
  if (!candidate.pair) return std::nullopt;
  ++counters.pairs_after_language;
  counters.sentence_pairs_after_language += candidate.pair->size();
  if (!candidate.long_enough) return std::nullopt;
  ++counters.pairs_after_length;
  if (!overlap_.admit(candidate.signature)) return std::nullopt;
  ++counters.pairs_after_overlap;
  counters.sentence_pairs_after_cleaning += candidate.pair->size();
  return std::move(candidate.pair);
}

std::vector<ParagraphPair> clean_pipeline(std::vector<ParagraphPair> pairs, const LanguageIdentifier& langid,
                                          const PipelineConfig& cfg, FunnelCounters& counters) {
  CleaningAdmitter admitter(cfg);
  std::vector<ParagraphPair> kept;
  for (auto& pair : pairs) {
    if (auto out = admitter.admit(prepare_cleaning(std::move(pair), langid, cfg), counters)) {
      kept.push_back(std::move(*out));
    }
  }
  return kept;
}

}  // namespace parapipe
