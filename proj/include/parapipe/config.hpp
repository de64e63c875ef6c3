#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parapipe/ingest.hpp"
#include "parapipe/segmentation.hpp"

namespace parapipe {

enum class OverlapMethod { kExact, kLsh };

struct PipelineConfig {
  std::size_t min_words = 30;
  double overlap_threshold = 0.5;
  std::size_t shingle_size = 5;
  std::size_t langid_min_chars = 20;
  std::string expected_src_lang = "en";
  std::string expected_tgt_lang = "de";
  std::size_t dev_count = 402;
  std::size_t test_count = 411;
  std::uint64_t seed = 1;
  OverlapMethod overlap_method = OverlapMethod::kLsh;
  SegmentationMode mode = SegmentationMode::kPresegmented;
  ErrorPolicy on_error = ErrorPolicy::kSkip;
  std::string profiles_dir;  // empty: built-in data directory
  std::string abbrev_dir;

  // Throws std::invalid_argument on an unknown key or a bad value.
  void set(std::string_view key, std::string_view value);
  // Throws std::invalid_argument when an invariant does not hold.
  void validate() const;

  // Every key with its current value, in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

// "key = value" lines; '#' starts a comment. Throws DataError with the line number.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

std::filesystem::path default_data_dir();

}  // namespace parapipe
