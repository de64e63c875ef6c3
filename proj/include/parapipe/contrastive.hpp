#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parapipe/io.hpp"

namespace parapipe {

// German renderings of English "it".
enum class PronounClass { kEs = 0, kEr = 1, kSie = 2 };
inline constexpr std::array<std::string_view, 3> kPronounNames = {"es", "er", "sie"};
inline constexpr std::size_t kMaxContext = 5;

std::string_view to_string(PronounClass p);
PronounClass parse_pronoun(std::string_view name);

struct ContextSentence {
  std::string src;
  std::string tgt;
};

struct ContrastiveInstance {
  std::string instance_id;
  std::vector<ContextSentence> context;  // preceding sentence pairs, oldest first
  std::string source;
  std::string correct;
  std::vector<std::string> contrastive;
  PronounClass pronoun = PronounClass::kEs;
  std::size_t antecedent_distance = 0;  // 0: antecedent in the same sentence

  std::size_t candidates() const { return contrastive.size() + 1; }
};

// One JSON object per line with keys instance_id, context_sentences ([{src, tgt}]),
// source, correct_translation, contrastive_translations, pronoun_class, antecedent_distance.
ContrastiveInstance parse_contrastive_line(std::string_view line, std::size_t line_no = 0);
std::string to_json_line(const ContrastiveInstance& instance);
std::vector<ContrastiveInstance> read_contrastive_set(LineReader& lines);

// Candidate 0 is the correct translation.
struct CandidateScore {
  std::string instance_id;
  std::size_t candidate = 0;
  double log_score = 0.0;
};

// "instance_id \t candidate_index \t log_score" lines.
std::vector<CandidateScore> read_scores(LineReader& lines);

// Per-instance verdicts: correct iff the correct translation scores strictly
// above every contrastive variant. Throws DataError naming the instances whose
// scores are missing, duplicated or unknown.
std::vector<bool> judge(const std::vector<ContrastiveInstance>& instances, const std::vector<CandidateScore>& scores);

struct Accuracy {
  std::size_t correct = 0;
  std::size_t total = 0;
  // nullopt when total == 0
  std::optional<double> value() const;
};

struct AccuracyReport {
  Accuracy overall;
  std::array<Accuracy, 3> by_pronoun;  // indexed by PronounClass
};

struct LocationReport {
  Accuracy inside;   // antecedent_distance == 0
  Accuracy outside;  // antecedent_distance >= 1
};

AccuracyReport contrastive_score(const std::vector<ContrastiveInstance>& instances,
                                 const std::vector<CandidateScore>& scores);
LocationReport accuracy_by_location(const std::vector<ContrastiveInstance>& instances,
                                    const std::vector<CandidateScore>& scores);

// Plain-text layouts: "total es er sie" and "inside outside" rows.
std::string render_pronoun_table(const AccuracyReport& report, std::string_view system);
std::string render_location_table(const LocationReport& report, std::string_view system);

}  // namespace parapipe
