#pragma once

#include <CLI11.hpp>
#include <functional>
#include <json.hpp>
#include <map>
#include <stdexcept>
#include <string>

#include "parapipe/config.hpp"

namespace parapipe::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kFormats =
    "docpairs-tsv/1 alignments/1 paragraph-jsonl/1 profile-tsv/1 contrastive-jsonl/1 scores-tsv/1";

enum ExitCode { kOk = 0, kUsage = 1, kData = 2 };

// Bad flag values or combinations detected after parsing; mapped to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { kTable, kJson };

void add_format_option(CLI::App& cmd, Format& format);

// Registers one flag per PipelineConfig key plus --config, and applies them
// with precedence defaults < config file < flags.
class ConfigOptions {
 public:
  // `aliases` adds extra flag spellings for a key, e.g. {"dev_count", "--dev"}.
  void attach(CLI::App& cmd, const std::map<std::string, std::string>& aliases = {});
  PipelineConfig resolve() const;

 private:
  std::string config_file_;
  std::map<std::string, std::string> values_;
  std::map<std::string, CLI::Option*> options_;
};

using Handler = std::function<void()>;

// Each registers its subcommand(s) and stores the action to run after parsing.
void register_extract(CLI::App& app, Handler& handler);
void register_corpus(CLI::App& app, Handler& handler);
void register_eval(CLI::App& app, Handler& handler);
void register_langid(CLI::App& app, Handler& handler);

void print_json(const nlohmann::ordered_json& j);

}  // namespace parapipe::cli
