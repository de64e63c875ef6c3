#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parapipe {

using Tokens = std::vector<std::string>;

Tokens tokenize_whitespace(std::string_view text);
// Splits ASCII punctuation off words; keeps '.' and ',' between digits.
Tokens tokenize_simple(std::string_view text);

inline constexpr std::size_t kBleuOrder = 4;

// Per-segment sufficient statistics for corpus BLEU.
struct BleuStats {
  std::array<std::uint64_t, kBleuOrder> matches{};  // clipped
  std::array<std::uint64_t, kBleuOrder> totals{};
  std::uint64_t hyp_len = 0;
  std::uint64_t ref_len = 0;

  BleuStats& operator+=(const BleuStats& other);
  friend bool operator==(const BleuStats&, const BleuStats&) = default;
};

BleuStats segment_stats(const Tokens& hypothesis, const Tokens& reference);
// Throws std::invalid_argument on a length mismatch or an empty corpus.
std::vector<BleuStats> corpus_stats(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references);

struct BleuReport {
  double score = 0.0;  // 0..100
  std::array<double, kBleuOrder> precisions{};
  double brevity_penalty = 0.0;
  std::uint64_t hyp_len = 0;
  std::uint64_t ref_len = 0;
};

// Orders for which the hypothesis side has no n-grams at all are left out of
// the geometric mean; any other zero precision makes the score 0.
BleuReport bleu_from_stats(const BleuStats& stats);
BleuReport bleu(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references);

struct BootstrapResult {
  double bleu_a = 0.0;
  double bleu_b = 0.0;
  std::size_t resamples = 0;
  std::size_t b_at_least_a = 0;
  double p_value = 1.0;  // fraction of resamples with BLEU(B) >= BLEU(A)
};

// Paired bootstrap over segments. Resample i draws from mt19937_64(seed + i),
// so the result does not depend on `workers`.
// Throws std::invalid_argument on mismatched inputs or fewer than 1000 resamples.
BootstrapResult paired_bootstrap(std::span<const BleuStats> a, std::span<const BleuStats> b,
                                 std::size_t n_resamples, std::uint64_t seed, std::size_t workers = 1);

inline constexpr std::size_t kMinResamples = 1000;

}  // namespace parapipe
