#include "parapipe/evaluation.hpp"

#include <cctype>
#include <cmath>
#include <fmt/format.h>
#include <map>
#include <random>
#include <stdexcept>

#include "parapipe/parallel.hpp"
#include "parapipe/random.hpp"
#include "parapipe/utf8.hpp"

namespace parapipe {

Tokens tokenize_whitespace(std::string_view text) {
  Tokens out;
  for (auto token : utf8::split_whitespace(text)) out.emplace_back(token);
  return out;
}

Tokens tokenize_simple(std::string_view text) {
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  Tokens out;
  for (auto word : utf8::split_whitespace(text)) {
    std::string current;
    for (std::size_t i = 0; i < word.size(); ++i) {
      const char c = word[i];
      const bool ascii_punct = static_cast<unsigned char>(c) < 0x80 && std::ispunct(static_cast<unsigned char>(c));
      const bool numeric_separator = (c == '.' || c == ',') && i > 0 && i + 1 < word.size() &&
                                     is_digit(word[i - 1]) && is_digit(word[i + 1]);
      if (ascii_punct && !numeric_separator) {
        if (!current.empty()) out.push_back(std::move(current));
        current.clear();
        out.emplace_back(1, c);
      } else {
        current.push_back(c);
      }
    }
    if (!current.empty()) out.push_back(std::move(current));
  }
  return out;
}

BleuStats& BleuStats::operator+=(const BleuStats& o) {
  for (std::size_t n = 0; n < kBleuOrder; ++n) {
    matches[n] += o.matches[n];
    totals[n] += o.totals[n];
  }
  hyp_len += o.hyp_len;
  ref_len += o.ref_len;
  return *this;
}

namespace {

std::map<std::string, std::uint64_t> ngram_counts(const Tokens& tokens, std::size_t n) {
  std::map<std::string, std::uint64_t> counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

BleuStats segment_stats(const Tokens& hypothesis, const Tokens& reference) {
  BleuStats s;
  s.hyp_len = hypothesis.size();
  s.ref_len = reference.size();
  for (std::size_t n = 1; n <= kBleuOrder; ++n) {
    const auto hyp = ngram_counts(hypothesis, n);
    const auto ref = ngram_counts(reference, n);
    for (const auto& [gram, count] : hyp) {
      s.totals[n - 1] += count;
      if (const auto it = ref.find(gram); it != ref.end()) s.matches[n - 1] += std::min(count, it->second);
    }
  }
  return s;
}

std::vector<BleuStats> corpus_stats(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references) {
  if (hypotheses.size() != references.size()) {
    throw std::invalid_argument(fmt::format("{} hypotheses but {} references", hypotheses.size(), references.size()));
  }
  if (hypotheses.empty()) throw std::invalid_argument("BLEU of an empty corpus is undefined");
  std::vector<BleuStats> stats;
  stats.reserve(hypotheses.size());
  for (std::size_t i = 0; i < hypotheses.size(); ++i) stats.push_back(segment_stats(hypotheses[i], references[i]));
  return stats;
}

BleuReport bleu_from_stats(const BleuStats& s) {
  BleuReport r;
  r.hyp_len = s.hyp_len;
  r.ref_len = s.ref_len;
  double log_sum = 0.0;
  std::size_t orders = 0;
  bool zero = false;
  for (std::size_t n = 0; n < kBleuOrder; ++n) {
    if (s.totals[n] == 0) continue;
    r.precisions[n] = static_cast<double>(s.matches[n]) / static_cast<double>(s.totals[n]);
    if (s.matches[n] == 0) {
      zero = true;
    } else {
      log_sum += std::log(r.precisions[n]);
    }
    ++orders;
  }
  if (s.hyp_len == 0) {
    r.brevity_penalty = 0.0;
  } else if (s.hyp_len < s.ref_len) {
    r.brevity_penalty = std::exp(1.0 - static_cast<double>(s.ref_len) / static_cast<double>(s.hyp_len));
  } else {
    r.brevity_penalty = 1.0;
  }
  if (orders == 0 || zero) return r;
  r.score = 100.0 * r.brevity_penalty * std::exp(log_sum / static_cast<double>(orders));
  return r;
}

BleuReport bleu(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references) {
  BleuStats total;
  for (const auto& s : corpus_stats(hypotheses, references)) total += s;
  return bleu_from_stats(total);
}

BootstrapResult paired_bootstrap(std::span<const BleuStats> a, std::span<const BleuStats> b,
                                 std::size_t n_resamples, std::uint64_t seed, std::size_t workers) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(fmt::format("system A has {} segments, system B has {}", a.size(), b.size()));
  }
  if (a.empty()) throw std::invalid_argument("bootstrap needs at least one segment");
  if (n_resamples < kMinResamples) {
    throw std::invalid_argument(fmt::format("n_resamples must be at least {}", kMinResamples));
  }
  BootstrapResult result;
  BleuStats total_a;
  BleuStats total_b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total_a += a[i];
    total_b += b[i];
  }
  result.bleu_a = bleu_from_stats(total_a).score;
  result.bleu_b = bleu_from_stats(total_b).score;
  result.resamples = n_resamples;

  std::vector<unsigned char> b_wins(n_resamples, 0);
  parallel_for(n_resamples, workers, [&](std::size_t r) {
    std::mt19937_64 rng(seed + r);
    BleuStats sa;
    BleuStats sb;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const auto i = static_cast<std::size_t>(uniform_below(rng, a.size()));
      sa += a[i];
      sb += b[i];
    }
    b_wins[r] = bleu_from_stats(sb).score >= bleu_from_stats(sa).score ? 1 : 0;
  });
  for (const auto w : b_wins) result.b_at_least_a += w;
  result.p_value = static_cast<double>(result.b_at_least_a) / static_cast<double>(n_resamples);
  return result;
}

}  // namespace parapipe
