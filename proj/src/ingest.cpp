#include "parapipe/ingest.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fmt/format.h>

#include "parapipe/utf8.hpp"

namespace parapipe {

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw DataError(fmt::format("base64 length {} is not a multiple of 4", text.size()));
  for (char c : text) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '+' ||
                    c == '/' || c == '=';
    if (!ok) throw DataError("invalid base64 character");
  }
  std::size_t padding = 0;
  if (!text.empty() && text.back() == '=') ++padding;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++padding;
  if (text.substr(0, text.size() - padding).find('=') != std::string_view::npos) {
    throw DataError("misplaced base64 padding");
  }
  std::string out(3 * (text.size() / 4), '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
  if (n < 0) throw DataError("invalid base64");
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

std::string normalize_newlines(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

namespace {

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string decode_text(std::string_view field, const char* side, std::size_t line_no) {
  std::string bytes;
  try {
    bytes = base64_decode(field);
  } catch (const DataError& err) {
    throw DataError(fmt::format("{} text: {}", side, err.what()), line_no);
  }
  if (!utf8::valid(bytes)) throw DataError(fmt::format("{} text is not valid UTF-8", side), line_no);
  return normalize_newlines(bytes);
}

}  // namespace

RawDocPair parse_document_line(std::string_view line, std::size_t line_no) {
  const auto fields = split_tabs(strip_cr(line));
  if (fields.size() != 5) throw DataError(fmt::format("field count {}, expected 5", fields.size()), line_no);
  if (fields[0].empty()) throw DataError("empty pair_id", line_no);
  RawDocPair doc;
  doc.pair_id = std::string(fields[0]);
  doc.src_url = std::string(fields[1]);
  doc.tgt_url = std::string(fields[2]);
  doc.src_text = decode_text(fields[3], "source", line_no);
  doc.tgt_text = decode_text(fields[4], "target", line_no);
  return doc;
}

std::string format_document_line(const RawDocPair& doc) {
  return fmt::format("{}\t{}\t{}\t{}\t{}", doc.pair_id, doc.src_url, doc.tgt_url, base64_encode(doc.src_text),
                     base64_encode(doc.tgt_text));
}

void DocumentPairReader::reject(const DataError& err) {
  if (policy_ == ErrorPolicy::kAbort) throw err;
  ++skipped_;
  if (skip_messages_.size() < 100) skip_messages_.emplace_back(err.what());
}

std::optional<RawDocPair> DocumentPairReader::next() {
  std::string line;
  while (lines_.next(line)) {
    if (strip_cr(line).empty()) continue;
    try {
      RawDocPair doc = parse_document_line(line, lines_.line_number());
      if (!seen_ids_.insert(doc.pair_id).second) {
        throw DataError(fmt::format("duplicate pair_id '{}'", doc.pair_id), lines_.line_number());
      }
      ++records_;
      return doc;
    } catch (const DataError& err) {
      reject(err);
    }
  }
  return std::nullopt;
}

std::vector<RawDocPair> parse_document_pairs(LineReader& lines, ErrorPolicy policy, std::size_t* skipped) {
  DocumentPairReader reader(lines, policy);
  std::vector<RawDocPair> docs;
  while (auto doc = reader.next()) docs.push_back(std::move(*doc));
  if (skipped != nullptr) *skipped = reader.skipped();
  return docs;
}

namespace {

std::string_view trim_ascii(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Parses "[...]" starting at `pos`, leaving `pos` after the closing bracket.
std::vector<std::size_t> parse_index_list(std::string_view line, std::size_t& pos, std::size_t line_no) {
  if (pos >= line.size() || line[pos] != '[') throw DataError("expected '['", line_no);
  const auto close = line.find(']', pos);
  if (close == std::string_view::npos) throw DataError("unterminated index list", line_no);
  const std::string_view body = trim_ascii(line.substr(pos + 1, close - pos - 1));
  pos = close + 1;
  std::vector<std::size_t> indices;
  if (body.empty()) return indices;
  std::size_t start = 0;
  while (true) {
    const auto comma = body.find(',', start);
    const std::string_view item =
        trim_ascii(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc{} || end != item.data() + item.size()) {
      throw DataError(fmt::format("malformed index '{}'", item), line_no);
    }
    if (!indices.empty() && value <= indices.back()) {
      throw DataError("indices within a list must be strictly increasing", line_no);
    }
    indices.push_back(value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return indices;
}

}  // namespace

AlignmentLink parse_alignment_line(std::string_view line, std::size_t line_no) {
  line = trim_ascii(strip_cr(line));
  AlignmentLink link;
  std::size_t pos = 0;
  link.src = parse_index_list(line, pos, line_no);
  if (pos >= line.size() || line[pos] != ':') throw DataError("expected ':' after source list", line_no);
  ++pos;
  link.tgt = parse_index_list(line, pos, line_no);
  if (pos >= line.size() || line[pos] != ':') throw DataError("expected ':' after target list", line_no);
  ++pos;
  const std::string_view score = trim_ascii(line.substr(pos));
  const auto [end, ec] = std::from_chars(score.data(), score.data() + score.size(), link.score);
  if (score.empty() || ec != std::errc{} || end != score.data() + score.size() || !std::isfinite(link.score)) {
    throw DataError(fmt::format("score '{}' is not a number", score), line_no);
  }
  if (link.src.empty() && link.tgt.empty()) throw DataError("both index lists are empty", line_no);
  return link;
}

namespace {
void append_list(std::string& out, const std::vector<std::size_t>& indices) {
  out.push_back('[');
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(indices[i]);
  }
  out.push_back(']');
}
}  // namespace

std::string format_alignment_line(const AlignmentLink& link) {
  std::string out;
  append_list(out, link.src);
  out.push_back(':');
  append_list(out, link.tgt);
  out += fmt::format(":{}", link.score);
  return out;
}

std::optional<AlignmentBlock> AlignmentReader::next() {
  std::string line;
  std::optional<AlignmentBlock> block;
  if (pending_header_) {
    block = AlignmentBlock{std::move(*pending_header_), {}};
    pending_header_.reset();
  }
  while (lines_.next(line)) {
    const std::string_view view = trim_ascii(strip_cr(line));
    if (view.empty()) continue;
    if (view.starts_with("#pair")) {
      const std::string_view rest = view.substr(5);
      const std::string id(trim_ascii(rest));
      if (id.empty() || rest.empty() || (rest.front() != ' ' && rest.front() != '\t')) {
        throw DataError("malformed '#pair' header", lines_.line_number());
      }
      if (!seen_.insert(id).second) {
        throw DataError(fmt::format("duplicate '#pair {}' header", id), lines_.line_number());
      }
      if (block) {
        pending_header_ = id;
        return block;
      }
      block = AlignmentBlock{id, {}};
      continue;
    }
    if (!block) throw DataError("alignment line before any '#pair' header", lines_.line_number());
    block->links.push_back(parse_alignment_line(view, lines_.line_number()));
  }
  return block;
}

std::map<std::string, std::vector<AlignmentLink>> parse_alignments(LineReader& lines) {
  AlignmentReader reader(lines);
  std::map<std::string, std::vector<AlignmentLink>> out;
  while (auto block = reader.next()) out.emplace(std::move(block->pair_id), std::move(block->links));
  return out;
}

std::optional<std::vector<AlignmentLink>> AlignmentJoiner::take(const std::string& pair_id) {
  if (auto it = parked_.find(pair_id); it != parked_.end()) {
    auto links = std::move(it->second);
    parked_.erase(it);
    return links;
  }
  while (!exhausted_) {
    auto block = reader_.next();
    if (!block) {
      exhausted_ = true;
      break;
    }
    if (block->pair_id == pair_id) return std::move(block->links);
    parked_.emplace(std::move(block->pair_id), std::move(block->links));
  }
  return std::nullopt;
}

}  // namespace parapipe
