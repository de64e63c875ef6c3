#include <chrono>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <memory>
#include <spdlog/spdlog.h>

#include "cli.hpp"
#include "parapipe/corpus.hpp"
#include "parapipe/hashing.hpp"
#include "parapipe/pipeline.hpp"

namespace parapipe::cli {
namespace {

struct ExtractArgs {
  std::string docs;
  std::string alignments;
  std::string out;
  std::string report;
  std::string manifest;
  std::size_t workers = 1;
  Format format = Format::kTable;
  ConfigOptions config;
};

nlohmann::ordered_json counters_json(const FunnelCounters& counters) {
  nlohmann::ordered_json j;
  for (const auto& stage : counters.stages()) j[std::string(stage.key)] = stage.value;
  return j;
}

void run_extract(const ExtractArgs& args) {
  const PipelineConfig cfg = args.config.resolve();
  if (args.workers == 0) throw UsageError("--workers must be at least 1");
  const auto started = std::chrono::steady_clock::now();

  const auto resources = ExtractionResources::load(cfg);
  LineReader docs{std::filesystem::path(args.docs)};
  LineReader alignments{std::filesystem::path(args.alignments)};
  std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + args.out);

  double write_seconds = 0;
  const auto report = run_extraction(docs, alignments, cfg, resources, args.workers, [&](const ParagraphPair& pair) {
    const auto t0 = std::chrono::steady_clock::now();
    out << to_json_line(pair) << '\n';
    write_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  out.close();
  if (!out) throw std::runtime_error("write failed: " + args.out);
  for (const auto& reason : report.skipped) spdlog::warn("skipped: {}", reason);

  const std::string report_path = args.report.empty() ? args.out + ".funnel.txt" : args.report;
  const std::string manifest_path = args.manifest.empty() ? args.out + ".manifest.json" : args.manifest;
  write_file(report_path, funnel_report(report.counters) + "\n" + funnel_report_detailed(report.counters));

  nlohmann::ordered_json manifest;
  manifest["tool"] = "parapipe";
  manifest["version"] = kVersion;
  manifest["formats"] = kFormats;
  manifest["command"] = "extract";
  auto& config = manifest["config"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : cfg.entries()) config[key] = value;
  manifest["inputs"] = {{"docs", {{"path", args.docs}, {"sha256", sha256_file(args.docs)}}},
                        {"alignments", {{"path", args.alignments}, {"sha256", sha256_file(args.alignments)}}}};
  manifest["outputs"] = {{"pairs", {{"path", args.out}, {"sha256", sha256_file(args.out)}}},
                         {"funnel", {{"path", report_path}, {"sha256", sha256_file(report_path)}}}};
  manifest["counters"] = counters_json(report.counters);
  manifest["pairs_written"] = report.pairs_written;
  auto& timing = manifest["timing"] = nlohmann::ordered_json::object();
  auto& stages = timing["stage_seconds"] = nlohmann::ordered_json::object();
  for (const auto& [stage, seconds] : report.stage_seconds) stages[stage] = seconds;
  stages["write"] = write_seconds;
  timing["workers"] = args.workers;
  timing["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_file(manifest_path, manifest.dump(2) + "\n");

  spdlog::info("{} documents, {} paragraph pairs written to {}", report.counters.documents, report.pairs_written,
               args.out);
  if (args.format == Format::kJson) {
    print_json({{"pairs_written", report.pairs_written},
                {"funnel",
                 {{"original_vecalign", report.counters.links_input},
                  {"after_extraction", report.counters.sentence_pairs_surviving},
                  {"after_cleaning", report.counters.sentence_pairs_after_cleaning}}},
                {"counters", counters_json(report.counters)}});
  } else {
    std::cout << funnel_report(report.counters);
  }
}

}  // namespace

void register_extract(CLI::App& app, Handler& handler) {
  auto args = std::make_shared<ExtractArgs>();
  auto* cmd = app.add_subcommand("extract", "Extract clean parallel paragraphs from aligned document pairs");
  cmd->add_option("--docs", args->docs, "Document pairs (TSV, base64 texts; .gz/.xz accepted)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--alignments", args->alignments, "Sentence alignments with '#pair <id>' headers")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args->out, "Output paragraph pairs (JSON lines)")->required();
  cmd->add_option("--report", args->report, "Funnel report path (default: <out>.funnel.txt)");
  cmd->add_option("--manifest", args->manifest, "Run manifest path (default: <out>.manifest.json)");
  cmd->add_option("--workers", args->workers, "Worker threads")->capture_default_str();
  add_format_option(*cmd, args->format);
  args->config.attach(*cmd);
  cmd->callback([args, &handler] { handler = [args] { run_extract(*args); }; });
}

}  // namespace parapipe::cli
