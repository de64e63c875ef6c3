#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "parapipe/io.hpp"

namespace parapipe {

// One aligned webpage pair.
struct RawDocPair {
  std::string pair_id;
  std::string src_url;
  std::string tgt_url;
  std::string src_text;
  std::string tgt_text;

  friend bool operator==(const RawDocPair&, const RawDocPair&) = default;
};

// One sentence-alignment record; either index list may be empty (insertion/deletion).
struct AlignmentLink {
  std::vector<std::size_t> src;
  std::vector<std::size_t> tgt;
  double score = 0.0;

  bool one_to_one() const { return src.size() == 1 && tgt.size() == 1; }
  friend bool operator==(const AlignmentLink&, const AlignmentLink&) = default;
};

enum class ErrorPolicy { kSkip, kAbort };

std::string base64_encode(std::string_view bytes);
// Throws DataError on malformed input.
std::string base64_decode(std::string_view text);

// CRLF and lone CR become LF.
std::string normalize_newlines(std::string_view text);

// Parses one record line ("id \t src_url \t tgt_url \t b64(src) \t b64(tgt)").
RawDocPair parse_document_line(std::string_view line, std::size_t line_no = 0);
std::string format_document_line(const RawDocPair& doc);

// Streams document pairs from a line source. Under kSkip, malformed lines and
// repeated ids are counted and skipped; under kAbort the first one throws DataError.
class DocumentPairReader {
 public:
  DocumentPairReader(LineReader& lines, ErrorPolicy policy) : lines_(lines), policy_(policy) {}

  std::optional<RawDocPair> next();

  std::size_t records() const { return records_; }
  std::size_t skipped() const { return skipped_; }
  const std::vector<std::string>& skip_messages() const { return skip_messages_; }

 private:
  void reject(const DataError& err);

  LineReader& lines_;
  ErrorPolicy policy_;
  std::unordered_set<std::string> seen_ids_;
  std::size_t records_ = 0;
  std::size_t skipped_ = 0;
  std::vector<std::string> skip_messages_;
};

std::vector<RawDocPair> parse_document_pairs(LineReader& lines, ErrorPolicy policy = ErrorPolicy::kAbort,
                                             std::size_t* skipped = nullptr);

// Parses "[i, j]:[k]:score". Throws DataError.
AlignmentLink parse_alignment_line(std::string_view line, std::size_t line_no = 0);
std::string format_alignment_line(const AlignmentLink& link);

struct AlignmentBlock {
  std::string pair_id;
  std::vector<AlignmentLink> links;
};

// Streams "#pair <id>" blocks in file order. Always strict: a malformed
// alignment line or a repeated header throws DataError.
class AlignmentReader {
 public:
  explicit AlignmentReader(LineReader& lines) : lines_(lines) {}
  std::optional<AlignmentBlock> next();

 private:
  LineReader& lines_;
  std::optional<std::string> pending_header_;
  std::unordered_set<std::string> seen_;
  bool started_ = false;
};

std::map<std::string, std::vector<AlignmentLink>> parse_alignments(LineReader& lines);

// Matches alignment blocks to document ids. When both files share an order
// this holds at most one block in memory; out-of-order blocks are parked until requested.
class AlignmentJoiner {
 public:
  explicit AlignmentJoiner(AlignmentReader& reader) : reader_(reader) {}
  // Links for `pair_id`, or nullopt when the file has no block for it.
  std::optional<std::vector<AlignmentLink>> take(const std::string& pair_id);
  std::size_t parked() const { return parked_.size(); }

 private:
  AlignmentReader& reader_;
  std::unordered_map<std::string, std::vector<AlignmentLink>> parked_;
  bool exhausted_ = false;
};

}  // namespace parapipe
