#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace parapipe {

struct Sentence {
  std::size_t index = 0;  // global index within the document side
  std::string text;
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Paragraph {
  std::size_t index = 0;
  std::vector<Sentence> sentences;
  friend bool operator==(const Paragraph&, const Paragraph&) = default;
};

// One side of a document pair. sent_to_para[i] is the paragraph holding global sentence i.
struct SegmentedDocument {
  std::string id;
  std::vector<Paragraph> paragraphs;
  std::vector<std::size_t> sent_to_para;

  std::size_t sentence_count() const { return sent_to_para.size(); }
  const std::string& sentence_text(std::size_t global_index) const;

  friend bool operator==(const SegmentedDocument&, const SegmentedDocument&) = default;
};

enum class SegmentationMode {
  kPresegmented,  // one sentence per line, blank line between paragraphs
  kRaw,           // one paragraph per line, sentences split here
};

// Rule-based splitter: terminal punctuation, optional closing quotes/brackets,
// whitespace, then an uppercase letter or an opening quote. A period after a
// listed abbreviation never ends a sentence.
class SentenceSplitter {
 public:
  SentenceSplitter() = default;
  explicit SentenceSplitter(std::unordered_set<std::string> abbreviations) : abbreviations_(std::move(abbreviations)) {}

  // Reads "<dir>/<lang>.txt"; one abbreviation per line without the trailing period.
  static SentenceSplitter from_file(const std::filesystem::path& path);
  static SentenceSplitter for_language(const std::filesystem::path& dir, std::string_view lang);

  std::vector<std::string> split(std::string_view paragraph) const;

  const std::unordered_set<std::string>& abbreviations() const { return abbreviations_; }

 private:
  bool is_abbreviation(std::string_view word) const;

  std::unordered_set<std::string> abbreviations_;
};

std::vector<std::string> split_paragraphs(std::string_view text);

std::vector<std::string> split_sentences(std::string_view paragraph, const SentenceSplitter& splitter);

SegmentedDocument segment_document(std::string_view text, const SentenceSplitter& splitter, std::string id = {});

SegmentedDocument segment_presegmented(std::string_view text, std::string id = {});

SegmentedDocument segment(std::string_view text, SegmentationMode mode, const SentenceSplitter& splitter,
                          std::string id = {});

// Inverse of the RAW reading: sentences joined by a space, paragraphs by LF.
std::string render_raw(const SegmentedDocument& doc);
// Inverse of the PRESEGMENTED reading.
std::string render_presegmented(const SegmentedDocument& doc);

}  // namespace parapipe
