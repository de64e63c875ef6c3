#include <fmt/format.h>
#include <iostream>
#include <memory>
#include <spdlog/spdlog.h>

#include "cli.hpp"
#include "parapipe/io.hpp"
#include "parapipe/langid.hpp"

namespace parapipe::cli {
namespace {

struct TrainArgs {
  std::vector<std::string> samples;  // LANG=FILE
  std::string out_dir;
  Format format = Format::kTable;
};

void run_train(const TrainArgs& args) {
  std::vector<std::pair<std::string, std::string>> samples;
  for (const auto& spec : args.samples) {
    const auto eq = spec.find('=');
    if (eq == 0 || eq == std::string::npos || eq + 1 == spec.size()) {
      throw UsageError("--sample expects LANG=FILE, got '" + spec + "'");
    }
    samples.emplace_back(spec.substr(0, eq), read_file(spec.substr(eq + 1)));
  }
  std::vector<LanguageProfile> profiles;
  try {
    profiles = langid_train(samples);
  } catch (const std::invalid_argument& err) {
    throw DataError(err.what());
  }
  std::filesystem::create_directories(args.out_dir);
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& profile : profiles) {
    const auto path = std::filesystem::path(args.out_dir) / (profile.lang() + ".tsv");
    profile.save(path);
    spdlog::info("wrote {} ({} n-grams)", path.string(), profile.ngrams().size());
    j[profile.lang()] = {{"path", path.string()}, {"ngrams", profile.ngrams().size()}};
  }
  if (args.format == Format::kJson) {
    print_json(j);
  } else {
    for (const auto& profile : profiles) fmt::print("{}\t{}\n", profile.lang(), profile.ngrams().size());
  }
}

}  // namespace

void register_langid(CLI::App& app, Handler& handler) {
  auto args = std::make_shared<TrainArgs>();
  auto* cmd = app.add_subcommand("langid-train", "Build character n-gram language profiles from text samples");
  cmd->add_option("--sample", args->samples, "LANG=FILE, repeatable; at least two languages")->required();
  cmd->add_option("--out-dir", args->out_dir, "Directory receiving <lang>.tsv profiles")->required();
  add_format_option(*cmd, args->format);
  cmd->callback([args, &handler] { handler = [args] { run_train(*args); }; });
}

}  // namespace parapipe::cli
