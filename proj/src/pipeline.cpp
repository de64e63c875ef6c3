#include "parapipe/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <optional>
#include <spdlog/spdlog.h>

#include "parapipe/ingest.hpp"
#include "parapipe/parallel.hpp"

namespace parapipe {

ExtractionResources ExtractionResources::load(const PipelineConfig& cfg) {
  const auto data = default_data_dir();
  const std::filesystem::path profiles_dir = cfg.profiles_dir.empty() ? data / "langid" / "profiles" : std::filesystem::path(cfg.profiles_dir);
  const std::filesystem::path abbrev_dir = cfg.abbrev_dir.empty() ? data / "abbrev" : std::filesystem::path(cfg.abbrev_dir);

  std::vector<std::string> langs;
  if (std::filesystem::is_directory(profiles_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(profiles_dir)) {
      if (entry.path().extension() == ".tsv") langs.push_back(entry.path().stem().string());
    }
  }
  std::sort(langs.begin(), langs.end());
  for (const auto& expected : {cfg.expected_src_lang, cfg.expected_tgt_lang}) {
    if (!std::binary_search(langs.begin(), langs.end(), expected)) {
      throw std::invalid_argument("no language profile for '" + expected + "' in " + profiles_dir.string());
    }
  }
  return {LanguageIdentifier::from_directory(profiles_dir, langs, cfg.langid_min_chars),
          SentenceSplitter::for_language(abbrev_dir, cfg.expected_src_lang),
          SentenceSplitter::for_language(abbrev_dir, cfg.expected_tgt_lang)};
}

namespace {

constexpr std::size_t kBatchSize = 512;

struct WorkItem {
  RawDocPair doc;
  std::vector<AlignmentLink> links;
  // filled by workers
  DocumentCandidates candidates;
  std::vector<std::optional<CleaningCandidate>> cleaning;
  std::exception_ptr error;
};

class StageClock {
 public:
  explicit StageClock(double& total) : total_(total), start_(std::chrono::steady_clock::now()) {}
  ~StageClock() { total_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }
  StageClock(const StageClock&) = delete;
  StageClock& operator=(const StageClock&) = delete;

 private:
  double& total_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

ExtractionReport run_extraction(LineReader& docs, LineReader& alignments, const PipelineConfig& cfg,
                                const ExtractionResources& resources, std::size_t workers,
                                const std::function<void(const ParagraphPair&)>& sink) {
  cfg.validate();
  ExtractionReport report;
  FunnelCounters& counters = report.counters;
  DocumentPairReader doc_reader(docs, cfg.on_error);
  AlignmentReader alignment_reader(alignments);
  AlignmentJoiner joiner(alignment_reader);
  Deduper deduper;
  CleaningAdmitter cleaner(cfg);
  double t_ingest = 0;
  double t_parallel = 0;
  double t_admit = 0;

  auto skip = [&](const std::string& reason) {
    ++counters.documents_skipped;
    if (report.skipped.size() < 100) report.skipped.push_back(reason);
    spdlog::debug("skipping: {}", reason);
  };

  std::vector<WorkItem> batch;
  while (true) {
    batch.clear();
    {
      StageClock clock(t_ingest);
      while (batch.size() < kBatchSize) {
        auto doc = doc_reader.next();
        if (!doc) break;
        WorkItem item;
        auto links = joiner.take(doc->pair_id);
        if (links) {
          item.links = std::move(*links);
        } else {
          ++counters.documents_without_alignments;
        }
        item.doc = std::move(*doc);
        batch.push_back(std::move(item));
      }
    }
    if (batch.empty()) break;

    {
      StageClock clock(t_parallel);
      parallel_for(batch.size(), workers, [&](std::size_t i) {
        WorkItem& item = batch[i];
        try {
          const auto src = segment(item.doc.src_text, cfg.mode, resources.src_splitter, item.doc.pair_id);
          const auto tgt = segment(item.doc.tgt_text, cfg.mode, resources.tgt_splitter, item.doc.pair_id);
          item.candidates = extract_candidates(item.doc.pair_id, src, tgt, item.links);
          item.cleaning.resize(item.candidates.pairs.size());
          for (std::size_t k = 0; k < item.candidates.pairs.size(); ++k) {
            if (item.candidates.pairs[k].size() < 2) continue;
            item.cleaning[k] = prepare_cleaning(item.candidates.pairs[k], resources.langid, cfg);
          }
        } catch (const DataError&) {
          item.error = std::current_exception();
        }
      });
    }

    StageClock clock(t_admit);
    for (WorkItem& item : batch) {
      ++counters.documents;
      if (item.error) {
        if (cfg.on_error == ErrorPolicy::kAbort) std::rethrow_exception(item.error);
        try {
          std::rethrow_exception(item.error);
        } catch (const DataError& err) {
          skip(err.what());
        }
        continue;
      }
      counters += item.candidates.counters;
      for (std::size_t k = 0; k < item.candidates.pairs.size(); ++k) {
        if (!deduper.admit_key(item.candidates.dedup_keys[k])) continue;
        ++counters.pairs_after_dedup;
        if (!item.cleaning[k]) continue;
        ++counters.pairs_after_singleton;
        counters.sentence_pairs_surviving += item.candidates.pairs[k].size();
        if (auto kept = cleaner.admit(std::move(*item.cleaning[k]), counters)) {
          sink(*kept);
          ++report.pairs_written;
        }
      }
    }
  }
  counters.documents_skipped += doc_reader.skipped();
  for (const auto& msg : doc_reader.skip_messages()) {
    if (report.skipped.size() < 100) report.skipped.push_back(msg);
  }
  report.stage_seconds = {{"ingest", t_ingest}, {"segment_extract_prepare", t_parallel}, {"admission", t_admit}};
  return report;
}

}  // namespace parapipe
