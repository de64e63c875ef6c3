#include "parapipe/extraction.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <json.hpp>
#include <set>
#include <tuple>

#include "parapipe/utf8.hpp"

namespace parapipe {

std::string ParagraphPair::id() const { return fmt::format("{}:{}:{}", pair_id, src_para, tgt_para); }

bool canonical_less(const ParagraphPair& a, const ParagraphPair& b) {
  return std::tie(a.pair_id, a.src_para, a.tgt_para) < std::tie(b.pair_id, b.src_para, b.tgt_para);
}

std::vector<FunnelCounters::Stage> FunnelCounters::stages() const {
  return {
      {"documents", "Document pairs read", documents},
      {"documents_skipped", "Document pairs skipped (malformed)", documents_skipped},
      {"documents_without_alignments", "Document pairs without alignments", documents_without_alignments},
      {"links_input", "Alignment links", links_input},
      {"links_one_to_one", "One-to-one links", links_one_to_one},
      {"src_paragraphs_linked", "Source paragraphs with links", src_paragraphs_linked},
      {"pairs_candidate", "Exclusive paragraph pairs", pairs_candidate},
      {"sentences_in_candidates", "Sentences in exclusive pairs", sentences_in_candidates},
      {"sentences_aligned", "Aligned sentences in exclusive pairs", sentences_aligned},
      {"pairs_after_monotonic", "Pairs after monotonicity filter", pairs_after_monotonic},
      {"pairs_after_dedup", "Pairs after dedup", pairs_after_dedup},
      {"pairs_after_singleton", "Pairs after singleton filter", pairs_after_singleton},
      {"sentence_pairs_surviving", "Sentence pairs after extraction", sentence_pairs_surviving},
      {"pairs_after_language", "Pairs after language filter", pairs_after_language},
      {"sentence_pairs_after_language", "Sentence pairs after language filter", sentence_pairs_after_language},
      {"pairs_after_length", "Pairs after length filter", pairs_after_length},
      {"pairs_after_overlap", "Pairs after overlap filter", pairs_after_overlap},
      {"sentence_pairs_after_cleaning", "Sentence pairs after cleaning", sentence_pairs_after_cleaning},
  };
}

FunnelCounters& FunnelCounters::operator+=(const FunnelCounters& o) {
  documents += o.documents;
  documents_skipped += o.documents_skipped;
  documents_without_alignments += o.documents_without_alignments;
  links_input += o.links_input;
  links_one_to_one += o.links_one_to_one;
  src_paragraphs_linked += o.src_paragraphs_linked;
  pairs_candidate += o.pairs_candidate;
  sentences_in_candidates += o.sentences_in_candidates;
  sentences_aligned += o.sentences_aligned;
  pairs_after_monotonic += o.pairs_after_monotonic;
  pairs_after_dedup += o.pairs_after_dedup;
  pairs_after_singleton += o.pairs_after_singleton;
  sentence_pairs_surviving += o.sentence_pairs_surviving;
  pairs_after_language += o.pairs_after_language;
  sentence_pairs_after_language += o.sentence_pairs_after_language;
  pairs_after_length += o.pairs_after_length;
  pairs_after_overlap += o.pairs_after_overlap;
  sentence_pairs_after_cleaning += o.sentence_pairs_after_cleaning;
  return *this;
}

std::vector<AlignmentLink> filter_one_to_one(std::span<const AlignmentLink> links) {
  std::vector<AlignmentLink> kept;
  kept.reserve(links.size());
  std::copy_if(links.begin(), links.end(), std::back_inserter(kept),
               [](const AlignmentLink& link) { return link.one_to_one(); });
  return kept;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr std::size_t kMany = static_cast<std::size_t>(-2);

void touch(std::vector<std::size_t>& partner, std::size_t para, std::size_t other) {
  std::size_t& slot = partner[para];
  if (slot == kNone) {
    slot = other;
  } else if (slot != other) {
    slot = kMany;
  }
}

std::size_t count_distinct(std::vector<std::size_t> values) {
  std::sort(values.begin(), values.end());
  return static_cast<std::size_t>(std::unique(values.begin(), values.end()) - values.begin());
}

}  // namespace

std::vector<ParagraphPair> consolidate(std::string_view pair_id, const SegmentedDocument& src,
                                       const SegmentedDocument& tgt, std::span<const AlignmentLink> links,
                                       FunnelCounters* counters) {
  for (const auto& link : links) {
    if (link.src.front() >= src.sentence_count()) {
      throw DataError(fmt::format("pair '{}': source sentence index {} out of range ({} sentences)", pair_id,
                                  link.src.front(), src.sentence_count()));
    }
    if (link.tgt.front() >= tgt.sentence_count()) {
      throw DataError(fmt::format("pair '{}': target sentence index {} out of range ({} sentences)", pair_id,
                                  link.tgt.front(), tgt.sentence_count()));
    }
  }

  // For every paragraph: the single paragraph on the other side it links to, or kMany.
  std::vector<std::size_t> src_partner(src.paragraphs.size(), kNone);
  std::vector<std::size_t> tgt_partner(tgt.paragraphs.size(), kNone);
  std::vector<std::vector<std::size_t>> links_by_src_para(src.paragraphs.size());
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::size_t p = src.sent_to_para[links[i].src.front()];
    const std::size_t q = tgt.sent_to_para[links[i].tgt.front()];
    touch(src_partner, p, q);
    touch(tgt_partner, q, p);
    links_by_src_para[p].push_back(i);
  }

  std::vector<ParagraphPair> pairs;
  for (std::size_t p = 0; p < src.paragraphs.size(); ++p) {
    const std::size_t q = src_partner[p];
    if (q == kNone) continue;
    if (counters != nullptr) ++counters->src_paragraphs_linked;
    if (q == kMany || tgt_partner[q] != p) continue;

    ParagraphPair pair;
    pair.pair_id = std::string(pair_id);
    pair.src_para = p;
    pair.tgt_para = q;
    std::vector<std::size_t> src_used;
    std::vector<std::size_t> tgt_used;
    for (const std::size_t i : links_by_src_para[p]) {
      const std::size_t s = links[i].src.front();
      const std::size_t t = links[i].tgt.front();
      pair.sentence_pairs.push_back({s, t, src.sentence_text(s), tgt.sentence_text(t)});
      src_used.push_back(s);
      tgt_used.push_back(t);
    }
    std::sort(pair.sentence_pairs.begin(), pair.sentence_pairs.end(), [](const auto& a, const auto& b) {
      return std::tie(a.src_idx, a.tgt_idx) < std::tie(b.src_idx, b.tgt_idx);
    });
    if (counters != nullptr) {
      ++counters->pairs_candidate;
      counters->sentences_in_candidates += src.paragraphs[p].sentences.size() + tgt.paragraphs[q].sentences.size();
      counters->sentences_aligned += count_distinct(std::move(src_used)) + count_distinct(std::move(tgt_used));
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

bool check_monotonic(const ParagraphPair& pair) {
  const auto& sp = pair.sentence_pairs;
  for (std::size_t i = 1; i < sp.size(); ++i) {
    if (sp[i].src_idx <= sp[i - 1].src_idx || sp[i].tgt_idx <= sp[i - 1].tgt_idx) return false;
  }
  return true;
}

std::string dedup_key(const ParagraphPair& pair) {
  std::string src;
  std::string tgt;
  for (const auto& sp : pair.sentence_pairs) {
    src += sp.src_text;
    src.push_back(' ');
    tgt += sp.tgt_text;
    tgt.push_back(' ');
  }
  return utf8::normalize_for_key(src) + '\t' + utf8::normalize_for_key(tgt);
}

std::vector<ParagraphPair> dedupe(std::vector<ParagraphPair> pairs, Deduper& deduper) {
  std::vector<ParagraphPair> kept;
  for (auto& pair : pairs) {
    if (deduper.admit(pair)) kept.push_back(std::move(pair));
  }
  return kept;
}

std::vector<ParagraphPair> drop_singletons(std::vector<ParagraphPair> pairs) {
  std::erase_if(pairs, [](const ParagraphPair& pair) { return pair.size() < 2; });
  return pairs;
}

DocumentCandidates extract_candidates(std::string_view pair_id, const SegmentedDocument& src,
                                      const SegmentedDocument& tgt, std::span<const AlignmentLink> links) {
  DocumentCandidates out;
  FunnelCounters& c = out.counters;
  c.links_input += links.size();
  const auto one_to_one = filter_one_to_one(links);
  c.links_one_to_one += one_to_one.size();
  auto pairs = consolidate(pair_id, src, tgt, one_to_one, &c);
  for (auto& pair : pairs) {
    if (!check_monotonic(pair)) continue;
    ++c.pairs_after_monotonic;
    out.dedup_keys.push_back(hash128(dedup_key(pair)));
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

std::vector<ParagraphPair> admit_candidates(DocumentCandidates candidates, Deduper& deduper,
                                            FunnelCounters& counters) {
  counters += candidates.counters;
  std::vector<ParagraphPair> kept;
  for (std::size_t i = 0; i < candidates.pairs.size(); ++i) {
    if (!deduper.admit_key(candidates.dedup_keys[i])) continue;
    ++counters.pairs_after_dedup;
    if (candidates.pairs[i].size() < 2) continue;
    ++counters.pairs_after_singleton;
    counters.sentence_pairs_surviving += candidates.pairs[i].size();
    kept.push_back(std::move(candidates.pairs[i]));
  }
  return kept;
}

std::vector<ParagraphPair> extract_pipeline(std::string_view pair_id, const SegmentedDocument& src,
                                            const SegmentedDocument& tgt, std::span<const AlignmentLink> links,
                                            FunnelCounters& counters, Deduper& deduper) {
  return admit_candidates(extract_candidates(pair_id, src, tgt, links), deduper, counters);
}

std::vector<ParagraphPair> extract_pipeline(std::string_view pair_id, const SegmentedDocument& src,
                                            const SegmentedDocument& tgt, std::span<const AlignmentLink> links,
                                            FunnelCounters& counters) {
  Deduper deduper;
  return extract_pipeline(pair_id, src, tgt, links, counters, deduper);
}

std::vector<ParagraphPair> oracle_extract(std::string_view pair_id, const SegmentedDocument& src,
                                          const SegmentedDocument& tgt, std::span<const AlignmentLink> links) {
  if (src.sentence_count() > kOracleMaxSentences || tgt.sentence_count() > kOracleMaxSentences) {
    throw std::invalid_argument(fmt::format("oracle_extract: instance too large ({} x {} sentences, limit {})",
                                            src.sentence_count(), tgt.sentence_count(), kOracleMaxSentences));
  }
  auto members = [](const Paragraph& para) {
    std::set<std::size_t> out;
    for (const auto& s : para.sentences) out.insert(s.index);
    return out;
  };
  std::vector<std::pair<std::size_t, std::size_t>> retained;
  for (const auto& link : links) {
    if (link.src.size() == 1 && link.tgt.size() == 1) retained.emplace_back(link.src[0], link.tgt[0]);
  }

  std::vector<ParagraphPair> candidates;
  for (const auto& p : src.paragraphs) {
    const auto in_p = members(p);
    for (const auto& q : tgt.paragraphs) {
      const auto in_q = members(q);
      bool linked = false;
      bool exclusive = true;
      for (const auto& [s, t] : retained) {
        const bool s_in = in_p.contains(s);
        const bool t_in = in_q.contains(t);
        linked = linked || (s_in && t_in);
        if (s_in != t_in) exclusive = false;
      }
      if (!linked || !exclusive) continue;

      ParagraphPair pair;
      pair.pair_id = std::string(pair_id);
      pair.src_para = p.index;
      pair.tgt_para = q.index;
      std::vector<std::pair<std::size_t, std::size_t>> inside;
      for (const auto& [s, t] : retained) {
        if (in_p.contains(s)) inside.emplace_back(s, t);
      }
      std::sort(inside.begin(), inside.end());
      bool monotonic = true;
      for (std::size_t i = 1; i < inside.size(); ++i) {
        if (!(inside[i - 1].first < inside[i].first && inside[i - 1].second < inside[i].second)) monotonic = false;
      }
      if (!monotonic) continue;
      for (const auto& [s, t] : inside) {
        std::string src_text;
        std::string tgt_text;
        for (const auto& sent : p.sentences) {
          if (sent.index == s) src_text = sent.text;
        }
        for (const auto& sent : q.sentences) {
          if (sent.index == t) tgt_text = sent.text;
        }
        pair.sentence_pairs.push_back({s, t, src_text, tgt_text});
      }
      candidates.push_back(std::move(pair));
    }
  }
  std::sort(candidates.begin(), candidates.end(), canonical_less);

  std::set<std::string> seen;
  std::vector<ParagraphPair> out;
  for (auto& pair : candidates) {
    if (!seen.insert(dedup_key(pair)).second) continue;
    if (pair.sentence_pairs.size() < 2) continue;
    out.push_back(std::move(pair));
  }
  return out;
}

std::string to_json_line(const ParagraphPair& pair) {
  nlohmann::ordered_json j;
  j["id"] = pair.id();
  // ordered_json keeps members in a vector: build the arrays before inserting them.
  auto src = nlohmann::ordered_json::array();
  auto tgt = nlohmann::ordered_json::array();
  for (const auto& sp : pair.sentence_pairs) {
    src.push_back(sp.src_text);
    tgt.push_back(sp.tgt_text);
  }
  j["src"] = std::move(src);
  j["tgt"] = std::move(tgt);
  j["src_para"] = pair.src_para;
  j["tgt_para"] = pair.tgt_para;
  j["pair_id"] = pair.pair_id;
  return j.dump();
}

ParagraphPair parse_paragraph_pair_line(std::string_view line, std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& err) {
    throw DataError(fmt::format("invalid JSON: {}", err.what()), line_no);
  }
  try {
    ParagraphPair pair;
    pair.pair_id = j.at("pair_id").get<std::string>();
    pair.src_para = j.at("src_para").get<std::size_t>();
    pair.tgt_para = j.at("tgt_para").get<std::size_t>();
    const auto& src = j.at("src");
    const auto& tgt = j.at("tgt");
    if (!src.is_array() || !tgt.is_array() || src.size() != tgt.size()) {
      throw DataError("'src' and 'tgt' must be arrays of equal length", line_no);
    }
    for (std::size_t i = 0; i < src.size(); ++i) {
      pair.sentence_pairs.push_back({i, i, src[i].get<std::string>(), tgt[i].get<std::string>()});
    }
    return pair;
  } catch (const nlohmann::json::exception& err) {
    throw DataError(fmt::format("bad paragraph pair record: {}", err.what()), line_no);
  }
}

std::vector<ParagraphPair> read_paragraph_pairs(LineReader& lines) {
  std::vector<ParagraphPair> pairs;
  std::string line;
  while (lines.next(line)) {
    if (line.empty()) continue;
    pairs.push_back(parse_paragraph_pair_line(line, lines.line_number()));
  }
  return pairs;
}

}  // namespace parapipe
