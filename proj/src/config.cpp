#include "parapipe/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fmt/format.h>
#include <stdexcept>

#include "parapipe/io.hpp"

#ifndef PARAPIPE_DATA_DIR
#define PARAPIPE_DATA_DIR "data"
#endif

namespace parapipe {
namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc{} || end != value.data() + value.size()) {
    throw std::invalid_argument(fmt::format("{}: '{}' is not a valid number", key, value));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view value) {
  if (key == "min_words") {
    min_words = parse_number<std::size_t>(key, value);
  } else if (key == "overlap_threshold") {
    overlap_threshold = parse_number<double>(key, value);
  } else if (key == "shingle_size") {
    shingle_size = parse_number<std::size_t>(key, value);
  } else if (key == "langid_min_chars") {
    langid_min_chars = parse_number<std::size_t>(key, value);
  } else if (key == "expected_src_lang") {
    expected_src_lang = std::string(value);
  } else if (key == "expected_tgt_lang") {
    expected_tgt_lang = std::string(value);
  } else if (key == "dev_count") {
    dev_count = parse_number<std::size_t>(key, value);
  } else if (key == "test_count") {
    test_count = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "overlap_method") {
    if (value == "exact") {
      overlap_method = OverlapMethod::kExact;
    } else if (value == "lsh") {
      overlap_method = OverlapMethod::kLsh;
    } else {
      throw std::invalid_argument(fmt::format("overlap_method: expected exact|lsh, got '{}'", value));
    }
  } else if (key == "mode") {
    if (value == "raw") {
      mode = SegmentationMode::kRaw;
    } else if (value == "presegmented") {
      mode = SegmentationMode::kPresegmented;
    } else {
      throw std::invalid_argument(fmt::format("mode: expected raw|presegmented, got '{}'", value));
    }
  } else if (key == "on_error") {
    if (value == "skip") {
      on_error = ErrorPolicy::kSkip;
    } else if (value == "abort") {
      on_error = ErrorPolicy::kAbort;
    } else {
      throw std::invalid_argument(fmt::format("on_error: expected skip|abort, got '{}'", value));
    }
  } else if (key == "profiles_dir") {
    profiles_dir = std::string(value);
  } else if (key == "abbrev_dir") {
    abbrev_dir = std::string(value);
  } else {
    throw std::invalid_argument(fmt::format("unknown configuration key '{}'", key));
  }
}

void PipelineConfig::validate() const {
  if (!(overlap_threshold > 0.0 && overlap_threshold <= 1.0)) {
    throw std::invalid_argument("overlap_threshold must be in (0, 1]");
  }
  if (min_words < 1) throw std::invalid_argument("min_words must be at least 1");
  if (shingle_size < 1) throw std::invalid_argument("shingle_size must be at least 1");
  if (expected_src_lang.empty() || expected_tgt_lang.empty()) {
    throw std::invalid_argument("expected languages must be set");
  }
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::entries() const {
  return {
      {"min_words", std::to_string(min_words)},
      {"overlap_threshold", fmt::format("{}", overlap_threshold)},
      {"shingle_size", std::to_string(shingle_size)},
      {"langid_min_chars", std::to_string(langid_min_chars)},
      {"expected_src_lang", expected_src_lang},
      {"expected_tgt_lang", expected_tgt_lang},
      {"dev_count", std::to_string(dev_count)},
      {"test_count", std::to_string(test_count)},
      {"seed", std::to_string(seed)},
      {"overlap_method", overlap_method == OverlapMethod::kExact ? "exact" : "lsh"},
      {"mode", mode == SegmentationMode::kRaw ? "raw" : "presegmented"},
      {"on_error", on_error == ErrorPolicy::kAbort ? "abort" : "skip"},
      {"profiles_dir", profiles_dir},
      {"abbrev_dir", abbrev_dir},
  };
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path) {
  LineReader lines(path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (lines.next(line)) {
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw DataError("expected 'key = value'", lines.line_number());
    const auto key = trim(view.substr(0, eq));
    if (key.empty()) throw DataError("empty key", lines.line_number());
    out.emplace_back(std::string(key), std::string(trim(view.substr(eq + 1))));
  }
  return out;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("PARAPIPE_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return PARAPIPE_DATA_DIR;
}

}  // namespace parapipe
