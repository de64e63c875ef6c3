#include <fmt/format.h>
#include <iostream>
#include <memory>

#include "cli.hpp"
#include "parapipe/contrastive.hpp"
#include "parapipe/evaluation.hpp"
#include "parapipe/parallel.hpp"

namespace parapipe::cli {
namespace {

enum class Tokenizer { kNone, kSimple };

void add_tokenize_option(CLI::App& cmd, Tokenizer& tokenizer) {
  const std::map<std::string, Tokenizer> names{{"none", Tokenizer::kNone}, {"simple", Tokenizer::kSimple}};
  cmd.add_option("--tokenize", tokenizer, "none: input is pre-tokenized; simple: split punctuation")
      ->transform(CLI::CheckedTransformer(names, CLI::ignore_case));
}

std::vector<Tokens> read_segments(const std::string& path, Tokenizer tokenizer) {
  LineReader lines{std::filesystem::path(path)};
  std::vector<Tokens> out;
  std::string line;
  while (lines.next(line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(tokenizer == Tokenizer::kSimple ? tokenize_simple(line) : tokenize_whitespace(line));
  }
  return out;
}

std::vector<BleuStats> load_stats(const std::string& hyp, const std::string& ref, Tokenizer tokenizer) {
  const auto hyps = read_segments(hyp, tokenizer);
  const auto refs = read_segments(ref, tokenizer);
  if (hyps.size() != refs.size()) {
    throw DataError(fmt::format("{} has {} lines but {} has {}", hyp, hyps.size(), ref, refs.size()));
  }
  if (hyps.empty()) throw DataError("empty corpus: " + hyp);
  return corpus_stats(hyps, refs);
}

nlohmann::ordered_json bleu_json(const BleuReport& r) {
  return {{"bleu", r.score},
          {"precisions", r.precisions},
          {"brevity_penalty", r.brevity_penalty},
          {"hyp_len", r.hyp_len},
          {"ref_len", r.ref_len}};
}

std::string bleu_line(const BleuReport& r) {
  return fmt::format("BLEU = {:.2f} {:.1f}/{:.1f}/{:.1f}/{:.1f} (BP = {:.3f} hyp_len = {} ref_len = {})", r.score,
                     100 * r.precisions[0], 100 * r.precisions[1], 100 * r.precisions[2], 100 * r.precisions[3],
                     r.brevity_penalty, r.hyp_len, r.ref_len);
}

struct BleuArgs {
  std::string hyp;
  std::string ref;
  Tokenizer tokenizer = Tokenizer::kNone;
  Format format = Format::kTable;
};

void run_bleu(const BleuArgs& args) {
  BleuStats total;
  for (const auto& s : load_stats(args.hyp, args.ref, args.tokenizer)) total += s;
  const auto report = bleu_from_stats(total);
  if (args.format == Format::kJson) {
    print_json(bleu_json(report));
  } else {
    std::cout << bleu_line(report) << '\n';
  }
}

struct BootstrapArgs {
  std::string ref;
  std::string hyp_a;
  std::string hyp_b;
  std::size_t resamples = 1000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  double alpha = 0.01;
  Tokenizer tokenizer = Tokenizer::kNone;
  Format format = Format::kTable;
};

void run_bootstrap(const BootstrapArgs& args) {
  if (args.resamples < kMinResamples) throw UsageError(fmt::format("--n-resamples must be >= {}", kMinResamples));
  if (args.workers == 0) throw UsageError("--workers must be at least 1");
  const auto a = load_stats(args.hyp_a, args.ref, args.tokenizer);
  const auto b = load_stats(args.hyp_b, args.ref, args.tokenizer);
  const auto result = paired_bootstrap(a, b, args.resamples, args.seed, args.workers);
  const bool significant = result.p_value < args.alpha;
  if (args.format == Format::kJson) {
    print_json({{"bleu_a", result.bleu_a},
                {"bleu_b", result.bleu_b},
                {"resamples", result.resamples},
                {"b_at_least_a", result.b_at_least_a},
                {"p_value", result.p_value},
                {"alpha", args.alpha},
                {"significant", significant}});
  } else {
    fmt::print("System A BLEU = {:.2f}\nSystem B BLEU = {:.2f}\n", result.bleu_a, result.bleu_b);
    fmt::print("p = {:.4f} ({} of {} resamples with B >= A){}\n", result.p_value, result.b_at_least_a,
               result.resamples, significant ? fmt::format("; A better at p < {}", args.alpha) : "");
  }
}

struct ContraproArgs {
  std::string test_set;
  std::string scores;
  std::string system = "system";
  Format format = Format::kTable;
};

nlohmann::ordered_json accuracy_json(const Accuracy& a) {
  nlohmann::ordered_json j = {{"correct", a.correct}, {"total", a.total}};
  if (const auto v = a.value()) {
    j["accuracy"] = *v;
  } else {
    j["accuracy"] = nullptr;
  }
  return j;
}

void run_contrapro(const ContraproArgs& args) {
  LineReader set_lines{std::filesystem::path(args.test_set)};
  const auto instances = read_contrastive_set(set_lines);
  LineReader score_lines{std::filesystem::path(args.scores)};
  const auto scores = read_scores(score_lines);
  const auto by_pronoun = contrastive_score(instances, scores);
  const auto by_location = accuracy_by_location(instances, scores);
  if (args.format == Format::kJson) {
    nlohmann::ordered_json j;
    j["system"] = args.system;
    j["total"] = accuracy_json(by_pronoun.overall);
    for (std::size_t p = 0; p < kPronounNames.size(); ++p) {
      j[std::string(kPronounNames[p])] = accuracy_json(by_pronoun.by_pronoun[p]);
    }
    j["inside"] = accuracy_json(by_location.inside);
    j["outside"] = accuracy_json(by_location.outside);
    print_json(j);
  } else {
    std::cout << render_pronoun_table(by_pronoun, args.system) << '\n'
              << render_location_table(by_location, args.system);
  }
}

}  // namespace

void register_eval(CLI::App& app, Handler& handler) {
  {
    auto args = std::make_shared<BleuArgs>();
    auto* cmd = app.add_subcommand("bleu", "Corpus BLEU of line-parallel hypothesis and reference files");
    cmd->add_option("--hyp", args->hyp, "Hypotheses, one segment per line")->required()->check(CLI::ExistingFile);
    cmd->add_option("--ref", args->ref, "References, one segment per line")->required()->check(CLI::ExistingFile);
    add_tokenize_option(*cmd, args->tokenizer);
    add_format_option(*cmd, args->format);
    cmd->callback([args, &handler] { handler = [args] { run_bleu(*args); }; });
  }
  {
    auto args = std::make_shared<BootstrapArgs>();
    auto* cmd = app.add_subcommand("bootstrap", "Paired bootstrap test of 'system A is better than B' under BLEU");
    cmd->add_option("--ref", args->ref, "References")->required()->check(CLI::ExistingFile);
    cmd->add_option("--hyp-a", args->hyp_a, "System A hypotheses")->required()->check(CLI::ExistingFile);
    cmd->add_option("--hyp-b", args->hyp_b, "System B hypotheses")->required()->check(CLI::ExistingFile);
    cmd->add_option("--n-resamples,--n_resamples", args->resamples, "Bootstrap resamples")->capture_default_str();
    cmd->add_option("--seed", args->seed, "Random seed")->capture_default_str();
    cmd->add_option("--workers", args->workers, "Worker threads")->capture_default_str();
    cmd->add_option("--alpha", args->alpha, "Significance level")->capture_default_str();
    add_tokenize_option(*cmd, args->tokenizer);
    add_format_option(*cmd, args->format);
    cmd->callback([args, &handler] { handler = [args] { run_bootstrap(*args); }; });
  }
  {
    auto args = std::make_shared<ContraproArgs>();
    auto* cmd = app.add_subcommand("contrapro", "Contrastive pronoun accuracy from externally produced scores");
    cmd->add_option("--test-set", args->test_set, "Contrastive instances (JSON lines)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--scores", args->scores, "TSV: instance_id, candidate_index, log_score")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--system", args->system, "Row label")->capture_default_str();
    add_format_option(*cmd, args->format);
    cmd->callback([args, &handler] { handler = [args] { run_contrapro(*args); }; });
  }
}

}  // namespace parapipe::cli
