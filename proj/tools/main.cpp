#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cli.hpp"
#include "parapipe/io.hpp"

namespace parapipe::cli {

void add_format_option(CLI::App& cmd, Format& format) {
  const std::map<std::string, Format> names{{"table", Format::kTable}, {"json", Format::kJson}};
  cmd.add_option("--format", format, "Output format: table or json")
      ->transform(CLI::CheckedTransformer(names, CLI::ignore_case));
}

void ConfigOptions::attach(CLI::App& cmd, const std::map<std::string, std::string>& aliases) {
  cmd.add_option("--config", config_file_, "Configuration file of 'key = value' lines")->check(CLI::ExistingFile);
  const PipelineConfig defaults;
  for (const auto& [key, value] : defaults.entries()) {
    std::string names = "--" + key;
    if (key.find('_') != std::string::npos) {
      std::string dashed = key;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      names += ",--" + dashed;
    }
    if (const auto it = aliases.find(key); it != aliases.end()) names += "," + it->second;
    options_[key] = cmd.add_option(names, values_[key], "Overrides '" + key + "' (default: " + value + ")");
  }
}

PipelineConfig ConfigOptions::resolve() const {
  PipelineConfig cfg;
  try {
    if (!config_file_.empty()) {
      for (const auto& [key, value] : read_config_file(config_file_)) cfg.set(key, value);
    }
    for (const auto& [key, option] : options_) {
      if (option->count() > 0) cfg.set(key, values_.at(key));
    }
    cfg.validate();
  } catch (const std::invalid_argument& err) {
    throw UsageError(err.what());
  }
  return cfg;
}

void print_json(const nlohmann::ordered_json& j) { std::cout << j.dump(2) << '\n'; }

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("parapipe");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* level = std::getenv("PARAPIPE_LOG_LEVEL"); level != nullptr && *level != '\0') {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

}  // namespace
}  // namespace parapipe::cli

int main(int argc, char** argv) {
  using namespace parapipe::cli;
  setup_logging();

  CLI::App app{"Parallel paragraph extraction from aligned web documents, and MT evaluation"};
  app.set_version_flag("--version", std::string("parapipe ") + kVersion + " (formats: " + kFormats + ")");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  Handler handler;
  register_extract(app, handler);
  register_corpus(app, handler);
  register_eval(app, handler);
  register_langid(app, handler);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    handler();
  } catch (const UsageError& err) {
    spdlog::error("{}", err.what());
    std::cerr << app.help() << '\n';
    return kUsage;
  } catch (const parapipe::DataError& err) {
    spdlog::error("data error: {}", err.what());
    return kData;
  } catch (const std::exception& err) {
    spdlog::error("{}", err.what());
    return kData;
  }
  return kOk;
}
