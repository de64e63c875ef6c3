#include "parapipe/contrastive.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <json.hpp>
#include <stdexcept>
#include <unordered_map>

namespace parapipe {

std::string_view to_string(PronounClass p) { return kPronounNames[static_cast<std::size_t>(p)]; }

PronounClass parse_pronoun(std::string_view name) {
  for (std::size_t i = 0; i < kPronounNames.size(); ++i) {
    if (kPronounNames[i] == name) return static_cast<PronounClass>(i);
  }
  throw std::invalid_argument(fmt::format("pronoun_class must be es, er or sie, got '{}'", name));
}

ContrastiveInstance parse_contrastive_line(std::string_view line, std::size_t line_no) {
  try {
    const auto j = nlohmann::json::parse(line);
    ContrastiveInstance inst;
    inst.instance_id = j.at("instance_id").get<std::string>();
    if (inst.instance_id.empty()) throw DataError("empty instance_id", line_no);
    if (j.contains("context_sentences")) {
      for (const auto& c : j.at("context_sentences")) {
        inst.context.push_back({c.at("src").get<std::string>(), c.at("tgt").get<std::string>()});
      }
    }
    if (inst.context.size() > kMaxContext) {
      throw DataError(fmt::format("instance '{}' has {} context sentences, at most {} allowed", inst.instance_id,
                                  inst.context.size(), kMaxContext),
                      line_no);
    }
    inst.source = j.at("source").get<std::string>();
    inst.correct = j.at("correct_translation").get<std::string>();
    inst.contrastive = j.at("contrastive_translations").get<std::vector<std::string>>();
    if (inst.contrastive.empty()) {
      throw DataError(fmt::format("instance '{}' has no contrastive translation", inst.instance_id), line_no);
    }
    inst.pronoun = parse_pronoun(j.at("pronoun_class").get<std::string>());
    const auto distance = j.at("antecedent_distance").get<long long>();
    if (distance < 0) throw DataError("antecedent_distance must be >= 0", line_no);
    inst.antecedent_distance = static_cast<std::size_t>(distance);
    return inst;
  } catch (const nlohmann::json::exception& err) {
    throw DataError(fmt::format("bad contrastive instance: {}", err.what()), line_no);
  } catch (const std::invalid_argument& err) {
    throw DataError(err.what(), line_no);
  }
}

std::string to_json_line(const ContrastiveInstance& inst) {
  nlohmann::ordered_json j;
  j["instance_id"] = inst.instance_id;
  auto& ctx = j["context_sentences"] = nlohmann::ordered_json::array();
  for (const auto& c : inst.context) ctx.push_back({{"src", c.src}, {"tgt", c.tgt}});
  j["source"] = inst.source;
  j["correct_translation"] = inst.correct;
  j["contrastive_translations"] = inst.contrastive;
  j["pronoun_class"] = to_string(inst.pronoun);
  j["antecedent_distance"] = inst.antecedent_distance;
  return j.dump();
}

std::vector<ContrastiveInstance> read_contrastive_set(LineReader& lines) {
  std::vector<ContrastiveInstance> out;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  while (lines.next(line)) {
    if (line.empty()) continue;
    auto inst = parse_contrastive_line(line, lines.line_number());
    if (!seen.emplace(inst.instance_id, out.size()).second) {
      throw DataError(fmt::format("duplicate instance_id '{}'", inst.instance_id), lines.line_number());
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<CandidateScore> read_scores(LineReader& lines) {
  std::vector<CandidateScore> out;
  std::string line;
  while (lines.next(line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw DataError("expected 'instance_id\\tcandidate_index\\tlog_score'", lines.line_number());
    }
    CandidateScore s;
    s.instance_id = line.substr(0, t1);
    const char* b1 = line.data() + t1 + 1;
    const char* e1 = line.data() + t2;
    const auto r1 = std::from_chars(b1, e1, s.candidate);
    const char* b2 = line.data() + t2 + 1;
    const char* e2 = line.data() + line.size();
    const auto r2 = std::from_chars(b2, e2, s.log_score);
    if (s.instance_id.empty() || r1.ec != std::errc{} || r1.ptr != e1 || b1 == e1) {
      throw DataError("bad candidate index", lines.line_number());
    }
    if (r2.ec != std::errc{} || r2.ptr != e2 || b2 == e2 || std::isnan(s.log_score)) {
      throw DataError("bad log score", lines.line_number());
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

std::string list_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < 20; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > 20) out += fmt::format(" and {} more", ids.size() - 20);
  return out;
}

}  // namespace

std::vector<bool> judge(const std::vector<ContrastiveInstance>& instances, const std::vector<CandidateScore>& scores) {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<std::optional<double>>> table(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    index.emplace(instances[i].instance_id, i);
    table[i].resize(instances[i].candidates());
  }
  std::vector<std::string> problems;
  for (const auto& s : scores) {
    const auto it = index.find(s.instance_id);
    if (it == index.end()) {
      problems.push_back(fmt::format("{} (unknown instance)", s.instance_id));
      continue;
    }
    auto& row = table[it->second];
    if (s.candidate >= row.size()) {
      problems.push_back(fmt::format("{} (candidate {} out of range)", s.instance_id, s.candidate));
    } else if (row[s.candidate]) {
      problems.push_back(fmt::format("{} (candidate {} scored twice)", s.instance_id, s.candidate));
    } else {
      row[s.candidate] = s.log_score;
    }
  }
  if (!problems.empty()) throw DataError("invalid scores: " + list_ids(problems));

  std::vector<std::string> missing;
  std::vector<bool> verdicts(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& row = table[i];
    bool complete = true;
    for (const auto& v : row) complete = complete && v.has_value();
    if (!complete) {
      missing.push_back(instances[i].instance_id);
      continue;
    }
    bool correct = true;
    for (std::size_t k = 1; k < row.size(); ++k) correct = correct && *row[0] > *row[k];
    verdicts[i] = correct;
  }
  if (!missing.empty()) throw DataError("missing scores for instances: " + list_ids(missing));
  return verdicts;
}

std::optional<double> Accuracy::value() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(total);
}

AccuracyReport contrastive_score(const std::vector<ContrastiveInstance>& instances,
                                 const std::vector<CandidateScore>& scores) {
  const auto verdicts = judge(instances, scores);
  AccuracyReport report;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    auto& cls = report.by_pronoun[static_cast<std::size_t>(instances[i].pronoun)];
    ++report.overall.total;
    ++cls.total;
    if (verdicts[i]) {
      ++report.overall.correct;
      ++cls.correct;
    }
  }
  return report;
}

LocationReport accuracy_by_location(const std::vector<ContrastiveInstance>& instances,
                                    const std::vector<CandidateScore>& scores) {
  const auto verdicts = judge(instances, scores);
  LocationReport report;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    auto& part = instances[i].antecedent_distance == 0 ? report.inside : report.outside;
    ++part.total;
    if (verdicts[i]) ++part.correct;
  }
  return report;
}

namespace {
std::string cell(const Accuracy& a) {
  const auto v = a.value();
  return v ? fmt::format("{:.3f}", *v) : std::string("NA");
}
}  // namespace

std::string render_pronoun_table(const AccuracyReport& report, std::string_view system) {
  std::string out = fmt::format("{:<6} | {:>5} | {:>5} | {:>5} | {:>5}\n", "", "total", "es", "er", "sie");
  out += fmt::format("{:<6} | {:>5} | {:>5} | {:>5} | {:>5}\n", system, cell(report.overall),
                     cell(report.by_pronoun[0]), cell(report.by_pronoun[1]), cell(report.by_pronoun[2]));
  return out;
}

std::string render_location_table(const LocationReport& report, std::string_view system) {
  std::string out = fmt::format("{:<6} | {:>8} | {:>8}\n", "", "inside", "outside");
  out += fmt::format("{:<6} | {:>8} | {:>8}\n", system, cell(report.inside), cell(report.outside));
  return out;
}

}  // namespace parapipe
