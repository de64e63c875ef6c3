#include "parapipe/segmentation.hpp"

#include <stdexcept>

#include "parapipe/io.hpp"
#include "parapipe/utf8.hpp"

namespace parapipe {

const std::string& SegmentedDocument::sentence_text(std::size_t global_index) const {
  const Paragraph& para = paragraphs.at(sent_to_para.at(global_index));
  return para.sentences.at(global_index - para.sentences.front().index).text;
}

namespace {

bool is_terminal(char32_t cp) {
  switch (cp) {
    case U'.':
    case U'!':
    case U'?':
    case 0x2026:  // …
    case 0x203C:  // ‼
    case 0x2047:
    case 0x2048:
    case 0x2049:
    case 0x3002:  // 。
    case 0xFF01:
    case 0xFF1F:
    case 0xFF61:
      return true;
    default:
      return false;
  }
}

bool is_closer(char32_t cp) {
  switch (cp) {
    case U'"':
    case U'\'':
    case U')':
    case U']':
    case U'}':
    case 0x201D:  // ”
    case 0x2019:  // ’
    case 0x00BB:  // »
    case 0x203A:  // ›
      return true;
    default:
      return false;
  }
}

bool is_opener(char32_t cp) {
  switch (cp) {
    case U'"':
    case U'\'':
    case U'(':
    case U'[':
    case 0x201C:  // “
    case 0x2018:  // ‘
    case 0x201E:  // „
    case 0x00AB:  // «
    case 0x2039:  // ‹
    case 0x00BF:  // ¿
    case 0x00A1:  // ¡
      return true;
    default:
      return false;
  }
}

}  // namespace

SentenceSplitter SentenceSplitter::from_file(const std::filesystem::path& path) {
  LineReader lines(path);
  std::unordered_set<std::string> abbreviations;
  std::string line;
  while (lines.next(line)) {
    const auto word = utf8::trim(line);
    if (word.empty() || word.front() == '#') continue;
    std::string entry(word);
    if (entry.back() == '.') entry.pop_back();
    if (!entry.empty()) abbreviations.insert(std::move(entry));
  }
  return SentenceSplitter(std::move(abbreviations));
}

SentenceSplitter SentenceSplitter::for_language(const std::filesystem::path& dir, std::string_view lang) {
  const auto path = dir / (std::string(lang) + ".txt");
  if (!std::filesystem::exists(path)) return SentenceSplitter();
  return from_file(path);
}

bool SentenceSplitter::is_abbreviation(std::string_view word) const {
  while (!word.empty()) {
    std::size_t pos = 0;
    if (!is_opener(utf8::next(word, pos))) break;
    word.remove_prefix(pos);
  }
  if (word.empty()) return false;
  const std::string key(word);
  return abbreviations_.contains(key) || abbreviations_.contains(utf8::lower(key));
}

std::vector<std::string> SentenceSplitter::split(std::string_view text) const {
  std::vector<std::string> sentences;
  auto emit = [&](std::string_view piece) {
    const auto trimmed = utf8::trim(piece);
    if (!trimmed.empty()) sentences.emplace_back(trimmed);
  };

  std::size_t sentence_start = 0;
  std::size_t word_start = 0;  // start of the current whitespace-delimited word
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t here = pos;
    const char32_t cp = utf8::next(text, pos);
    if (utf8::is_space(cp)) {
      word_start = pos;
      continue;
    }
    if (!is_terminal(cp)) continue;

    // Run of terminals, then closing quotes/brackets.
    std::size_t run_end = pos;
    bool single_period = cp == U'.';
    while (run_end < text.size()) {
      std::size_t p = run_end;
      if (!is_terminal(utf8::next(text, p))) break;
      single_period = false;
      run_end = p;
    }
    std::size_t boundary = run_end;
    while (boundary < text.size()) {
      std::size_t p = boundary;
      if (!is_closer(utf8::next(text, p))) break;
      boundary = p;
    }
    // At least one whitespace, then an uppercase letter or an opener.
    std::size_t look = boundary;
    bool saw_space = false;
    char32_t following = 0;
    while (look < text.size()) {
      std::size_t p = look;
      following = utf8::next(text, p);
      if (!utf8::is_space(following)) break;
      saw_space = true;
      look = p;
    }
    pos = boundary;
    if (!saw_space || look >= text.size()) continue;
    if (!utf8::is_upper(following) && !is_opener(following)) continue;
    if (single_period && is_abbreviation(text.substr(word_start, here - word_start))) continue;

    emit(text.substr(sentence_start, boundary - sentence_start));
    sentence_start = look;
    word_start = look;
    pos = look;
  }
  emit(text.substr(sentence_start));
  return sentences;
}

std::vector<std::string> split_paragraphs(std::string_view text) {
  std::vector<std::string> paragraphs;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto newline = text.find('\n', start);
    if (newline == std::string_view::npos) newline = text.size();
    const auto piece = utf8::trim(text.substr(start, newline - start));
    if (!piece.empty()) paragraphs.emplace_back(piece);
    start = newline + 1;
  }
  return paragraphs;
}

std::vector<std::string> split_sentences(std::string_view paragraph, const SentenceSplitter& splitter) {
  return splitter.split(paragraph);
}

namespace {

class DocumentBuilder {
 public:
  explicit DocumentBuilder(std::string id) { doc_.id = std::move(id); }

  void add_paragraph(std::vector<std::string> sentences) {
    if (sentences.empty()) return;
    Paragraph para;
    para.index = doc_.paragraphs.size();
    for (auto& text : sentences) {
      para.sentences.push_back({doc_.sent_to_para.size(), std::move(text)});
      doc_.sent_to_para.push_back(para.index);
    }
    doc_.paragraphs.push_back(std::move(para));
  }

  SegmentedDocument finish() { return std::move(doc_); }

 private:
  SegmentedDocument doc_;
};

}  // namespace

SegmentedDocument segment_document(std::string_view text, const SentenceSplitter& splitter, std::string id) {
  DocumentBuilder builder(std::move(id));
  for (const auto& paragraph : split_paragraphs(text)) builder.add_paragraph(splitter.split(paragraph));
  return builder.finish();
}

SegmentedDocument segment_presegmented(std::string_view text, std::string id) {
  DocumentBuilder builder(std::move(id));
  std::vector<std::string> current;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto newline = text.find('\n', start);
    if (newline == std::string_view::npos) newline = text.size();
    const auto line = utf8::trim(text.substr(start, newline - start));
    if (line.empty()) {
      builder.add_paragraph(std::move(current));
      current.clear();
    } else {
      current.emplace_back(line);
    }
    start = newline + 1;
  }
  builder.add_paragraph(std::move(current));
  return builder.finish();
}

SegmentedDocument segment(std::string_view text, SegmentationMode mode, const SentenceSplitter& splitter,
                          std::string id) {
  return mode == SegmentationMode::kRaw ? segment_document(text, splitter, std::move(id))
                                        : segment_presegmented(text, std::move(id));
}

std::string render_raw(const SegmentedDocument& doc) {
  std::string out;
  for (const auto& para : doc.paragraphs) {
    if (!out.empty()) out.push_back('\n');
    for (std::size_t i = 0; i < para.sentences.size(); ++i) {
      if (i) out.push_back(' ');
      out += para.sentences[i].text;
    }
  }
  return out;
}

std::string render_presegmented(const SegmentedDocument& doc) {
  std::string out;
  for (std::size_t p = 0; p < doc.paragraphs.size(); ++p) {
    if (p) out.push_back('\n');
    for (const auto& sentence : doc.paragraphs[p].sentences) {
      out += sentence.text;
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace parapipe
