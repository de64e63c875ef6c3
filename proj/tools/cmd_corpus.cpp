#include <cctype>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <memory>
#include <spdlog/spdlog.h>

#include "cli.hpp"
#include "parapipe/corpus.hpp"

namespace parapipe::cli {
namespace {

std::vector<ParagraphPair> load_pairs(const std::string& path) {
  LineReader lines{std::filesystem::path(path)};
  return read_paragraph_pairs(lines);
}

// "corpus.train.jsonl" -> "Train"
std::string row_name(const std::string& path) {
  std::string stem = std::filesystem::path(path).stem().string();
  if (const auto dot = stem.rfind('.'); dot != std::string::npos) stem = stem.substr(dot + 1);
  if (!stem.empty()) stem[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(stem[0])));
  return stem;
}

nlohmann::ordered_json stats_json(const CorpusStats& s) {
  return {{"paragraph_pairs", s.paragraph_pairs},
          {"sentence_pairs", s.sentence_pairs},
          {"words_src", s.words_src},
          {"words_tgt", s.words_tgt}};
}

struct StatsArgs {
  std::vector<std::string> files;
  std::string src_lang = "en";
  std::string tgt_lang = "de";
  Format format = Format::kTable;
};

void run_stats(const StatsArgs& args) {
  std::vector<NamedStats> rows;
  std::vector<ParagraphPair> all;
  for (const auto& file : args.files) {
    auto pairs = load_pairs(file);
    rows.push_back({row_name(file), compute_stats(pairs)});
    std::move(pairs.begin(), pairs.end(), std::back_inserter(all));
  }
  std::optional<LengthHistogram> histogram;
  if (!all.empty()) histogram = length_distribution(all);

  if (args.format == Format::kJson) {
    nlohmann::ordered_json j;
    auto& out_rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      auto entry = stats_json(row.stats);
      entry["name"] = row.name;
      out_rows.push_back(std::move(entry));
    }
    if (histogram) {
      auto& dist = j["length_distribution"] = nlohmann::ordered_json::object();
      for (std::size_t b = 0; b < histogram->counts.size(); ++b) {
        dist[std::string(LengthHistogram::kLabels[b])] = {{"count", histogram->counts[b]},
                                                           {"percent", histogram->percent[b]}};
      }
    } else {
      j["length_distribution"] = nullptr;
    }
    print_json(j);
    return;
  }
  std::cout << render_stats_table(rows, args.src_lang, args.tgt_lang) << '\n';
  if (histogram) {
    std::cout << render_length_table(*histogram);
  } else {
    std::cout << "Length distribution: NA (empty corpus)\n";
  }
}

struct SplitArgs {
  std::string in;
  std::string out_prefix;
  Format format = Format::kTable;
  ConfigOptions config;
};

void write_pairs(const std::string& path, const std::vector<ParagraphPair>& pairs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& pair : pairs) out << to_json_line(pair) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

void run_split(const SplitArgs& args) {
  const PipelineConfig cfg = args.config.resolve();
  auto pairs = load_pairs(args.in);
  if (cfg.dev_count + cfg.test_count > pairs.size()) {
    throw UsageError(fmt::format("--dev_count {} + --test_count {} exceeds the {} pairs in {}", cfg.dev_count,
                                 cfg.test_count, pairs.size(), args.in));
  }
  const auto split = split_corpus(std::move(pairs), cfg.dev_count, cfg.test_count, cfg.seed);
  const std::pair<const char*, const std::vector<ParagraphPair>*> parts[] = {
      {"train", &split.train}, {"dev", &split.dev}, {"test", &split.test}};
  nlohmann::ordered_json j;
  for (const auto& [name, part] : parts) {
    const std::string path = fmt::format("{}.{}.jsonl", args.out_prefix, name);
    write_pairs(path, *part);
    j[name] = {{"path", path}, {"paragraph_pairs", part->size()}};
  }
  if (args.format == Format::kJson) {
    print_json(j);
  } else {
    for (const auto& [name, part] : parts) fmt::print("{:<5} {}\n", name, part->size());
  }
}

}  // namespace

void register_corpus(CLI::App& app, Handler& handler) {
  {
    auto args = std::make_shared<StatsArgs>();
    auto* cmd = app.add_subcommand("stats", "Corpus statistics and paragraph length distribution");
    cmd->add_option("files", args->files, "Paragraph-pair JSONL files, one table row each")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--src-lang", args->src_lang, "Source language label")->capture_default_str();
    cmd->add_option("--tgt-lang", args->tgt_lang, "Target language label")->capture_default_str();
    add_format_option(*cmd, args->format);
    cmd->callback([args, &handler] { handler = [args] { run_stats(*args); }; });
  }
  {
    auto args = std::make_shared<SplitArgs>();
    auto* cmd = app.add_subcommand("split", "Seeded train/dev/test split of paragraph pairs");
    cmd->add_option("--in", args->in, "Paragraph-pair JSONL")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out-prefix", args->out_prefix, "Writes <prefix>.{train,dev,test}.jsonl")->required();
    add_format_option(*cmd, args->format);
    args->config.attach(*cmd, {{"dev_count", "--dev"}, {"test_count", "--test"}});
    cmd->callback([args, &handler] { handler = [args] { run_split(*args); }; });
  }
}

}  // namespace parapipe::cli
