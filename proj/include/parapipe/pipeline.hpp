#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "parapipe/cleaning.hpp"
#include "parapipe/config.hpp"
#include "parapipe/extraction.hpp"
#include "parapipe/io.hpp"
#include "parapipe/langid.hpp"
#include "parapipe/segmentation.hpp"

namespace parapipe {

struct ExtractionResources {
  LanguageIdentifier langid;
  SentenceSplitter src_splitter;
  SentenceSplitter tgt_splitter;

  // Profiles from cfg.profiles_dir (every *.tsv) and abbreviations from cfg.abbrev_dir,
  // both defaulting to the shipped data directory.
  static ExtractionResources load(const PipelineConfig& cfg);
};

struct ExtractionReport {
  FunnelCounters counters;
  std::vector<std::pair<std::string, double>> stage_seconds;
  std::vector<std::string> skipped;  // first 100 skip reasons
  std::size_t pairs_written = 0;
};

// Streams document pairs and alignment blocks through extraction and cleaning,
// handing every surviving pair to `sink` in document order. Per-document work
// runs on `workers` threads; dedup and overlap admission stay sequential, so
// the output does not depend on the worker count.
ExtractionReport run_extraction(LineReader& docs, LineReader& alignments, const PipelineConfig& cfg,
                                const ExtractionResources& resources, std::size_t workers,
                                const std::function<void(const ParagraphPair&)>& sink);

}  // namespace parapipe
