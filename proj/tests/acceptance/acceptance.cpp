// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include "parapipe/cleaning.hpp"
#include "parapipe/contrastive.hpp"
#include "parapipe/corpus.hpp"
#include "parapipe/evaluation.hpp"
#include "parapipe/extraction.hpp"
#include "parapipe/io.hpp"
#include "parapipe/pipeline.hpp"
#include "synth.hpp"

namespace fs = std::filesystem;
using namespace parapipe;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const fs::path kFixtures = PARAPIPE_TEST_FIXTURES;
const fs::path kGolden = PARAPIPE_TEST_GOLDEN;

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

const ExtractionResources& resources() {
  static const ExtractionResources r = ExtractionResources::load(PipelineConfig{});
  return r;
}

// ---------------------------------------------------------------------------
// Oracle equivalence

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::size_t equal = 0, emitted = 0;
  constexpr std::size_t kInstances = 1000;
  for (std::size_t n = 0; n < kInstances; ++n) {
    const auto inst = testing::random_instance(rng, 10, 30);
    FunnelCounters c;
    auto got = extract_pipeline("doc", inst.src, inst.tgt, inst.links, c);
    std::sort(got.begin(), got.end(), canonical_less);
    equal += got == oracle_extract("doc", inst.src, inst.tgt, inst.links);
    emitted += got.size();
  }
  const double secs = seconds_since(t0);
  return {equal == kInstances && secs < 30.0,
          fmt::format("{}/{} instances equal, {} pairs emitted, {:.2f}s (limit 30s)", equal, kInstances, emitted, secs)};
}

// ---------------------------------------------------------------------------
// Invariants

std::size_t violations(const ParagraphPair& pair, const testing::Instance& inst) {
  std::size_t bad = 0;
  if (pair.size() < 2) ++bad;
  std::set<std::size_t> src, tgt;
  for (std::size_t i = 0; i < pair.size(); ++i) {
    const auto& sp = pair.sentence_pairs[i];
    if (i > 0 && !(pair.sentence_pairs[i - 1].src_idx < sp.src_idx && pair.sentence_pairs[i - 1].tgt_idx < sp.tgt_idx)) {
      ++bad;
    }
    if (!src.insert(sp.src_idx).second || !tgt.insert(sp.tgt_idx).second) ++bad;
    if (inst.src.sent_to_para[sp.src_idx] != pair.src_para || inst.tgt.sent_to_para[sp.tgt_idx] != pair.tgt_para) ++bad;
  }
  for (const auto& link : inst.links) {
    if (link.src.size() != 1 || link.tgt.size() != 1) continue;
    const bool in_p = inst.src.sent_to_para[link.src[0]] == pair.src_para;
    const bool in_q = inst.tgt.sent_to_para[link.tgt[0]] == pair.tgt_para;
    if (in_p != in_q) ++bad;
  }
  return bad;
}

Outcome invariant_suite() {
  std::mt19937_64 rng(777);
  std::size_t bad = 0, emitted = 0;
  constexpr std::size_t kCases = 10000;
  for (std::size_t n = 0; n < kCases; ++n) {
    const auto inst = testing::random_instance(rng, 10, 30);
    FunnelCounters c;
    for (const auto& pair : extract_pipeline("doc", inst.src, inst.tgt, inst.links, c)) {
      bad += violations(pair, inst);
      ++emitted;
    }
  }
  return {bad == 0 && emitted > 0, fmt::format("{} fuzz cases, {} pairs checked, {} violations", kCases, emitted, bad)};
}

// ---------------------------------------------------------------------------
// Rule fixtures

using Para = std::vector<std::string>;

const Para kEnA = {"The old harbour town wakes slowly in the winter and the boats leave before dawn.",
                   "By eight o'clock the streets are full of children walking to school with their parents.",
                   "Nobody seems to notice the gulls that circle above the market square every morning."};
const Para kDeA = {"Die alte Hafenstadt erwacht im Winter nur langsam und die Boote laufen vor der Dämmerung aus.",
                   "Um acht Uhr sind die Straßen voller Kinder, die mit ihren Eltern zur Schule gehen.",
                   "Niemand scheint die Möwen zu bemerken, die jeden Morgen über dem Marktplatz kreisen."};
const Para kEnB = {"The library is one of the few public buildings that is busy all year round.",
                   "It offers free internet access and a reading group for pensioners on Tuesday afternoons.",
                   "The librarian has worked there for almost thirty years and knows most of her readers."};
const Para kDeB = {"Die Bibliothek gehört zu den wenigen öffentlichen Gebäuden, die das ganze Jahr über besucht sind.",
                   "Sie bietet kostenlosen Internetzugang und dienstags einen Lesekreis für Rentner an.",
                   "Die Bibliothekarin arbeitet dort seit fast dreißig Jahren und kennt die meisten Leser."};
const Para kEnMuseum = {
    "The museum has just opened an exhibition about the history of medicine in our city.",
    "Visitors can see surgical instruments from the eighteenth century and early photographs of hospital wards.",
    "One room is devoted to the discovery of antibiotics, which changed the treatment of infections.",
    "Le musée présente aussi des lettres écrites par des infirmières pendant la guerre."};
const Para kDeMuseum = {
    "Das Museum hat gerade eine Ausstellung über die Geschichte der Medizin in unserer Stadt eröffnet.",
    "Die Besucher können chirurgische Instrumente aus dem achtzehnten Jahrhundert und frühe Fotos von Stationen sehen.",
    "Ein Raum ist der Entdeckung der Antibiotika gewidmet, die die Behandlung von Infektionen verändert hat.",
    "Das Museum zeigt auch Briefe, die Krankenschwestern während des Krieges geschrieben haben."};
const Para kEn29 = {"The committee met on Wednesday evening to discuss the budget for next year.",
                    "After a long discussion, the members agreed to increase the funding for public transport and buses."};
const Para kDe29 = {
    "Der Ausschuss traf sich am Mittwochabend, um über den Haushalt für das nächste Jahr zu beraten.",
    "Nach einer langen Diskussion einigten sich die Mitglieder darauf, die Mittel für den öffentlichen Nahverkehr "
    "und die Busse zu erhöhen."};
const Para kEnSingle = {"The bridge over the river was built in stone more than three hundred years ago."};
const Para kDeSingle = {"Die Brücke über den Fluss wurde vor mehr als dreihundert Jahren aus Stein gebaut."};
const Para kFiller3 = {"Alpha beta gamma.", "Delta epsilon zeta.", "Eta theta iota."};
const Para kFiller2 = {"Kappa lambda mu.", "Nu xi omicron."};
const Para kFiller1 = {"Pi rho sigma."};

// A document pair built paragraph by paragraph; links use (paragraph, sentence) coordinates.
struct DocBuilder {
  std::vector<Para> src, tgt;

  std::size_t src_index(std::size_t p, std::size_t s) const { return offset(src, p) + s; }
  std::size_t tgt_index(std::size_t p, std::size_t s) const { return offset(tgt, p) + s; }

  static std::size_t offset(const std::vector<Para>& side, std::size_t p) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < p; ++i) n += side[i].size();
    return n;
  }
  static std::string render(const std::vector<Para>& side) {
    std::string out;
    for (std::size_t p = 0; p < side.size(); ++p) {
      if (p) out += "\n";
      for (const auto& s : side[p]) out += s + "\n";
    }
    return out;
  }
};

struct RuleFixture {
  std::string name;
  std::string stage;  // the transition expected to lose exactly one
  std::uint64_t survivors = 2;
  DocBuilder doc;
  std::vector<AlignmentLink> links;
};

// Diagonal one-to-one links between src paragraph ps and tgt paragraph pt.
void diagonal(const DocBuilder& d, std::vector<AlignmentLink>& links, std::size_t ps, std::size_t pt, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) links.push_back(testing::link({d.src_index(ps, i)}, {d.tgt_index(pt, i)}));
}

std::vector<RuleFixture> rule_fixtures() {
  std::vector<RuleFixture> out;
  auto base = [] {
    RuleFixture f;
    f.doc.src = {kEnA, kEnB};
    f.doc.tgt = {kDeA, kDeB};
    diagonal(f.doc, f.links, 0, 0, 3);
    diagonal(f.doc, f.links, 1, 1, 3);
    return f;
  };
  {
    auto f = base();
    f.name = "non-1:1 link drop";
    f.stage = "links_input -> links_one_to_one";
    f.doc.src.push_back(kFiller2);
    f.doc.tgt.push_back(kFiller1);
    f.links.push_back(testing::link({f.doc.src_index(2, 0), f.doc.src_index(2, 1)}, {f.doc.tgt_index(2, 0)}));
    out.push_back(std::move(f));
  }
  {
    auto f = base();
    f.name = "unaligned sentence drop";
    f.stage = "sentences_in_candidates -> sentences_aligned";
    f.doc.src[1].insert(f.doc.src[1].begin() + 1, "This extra sentence has no counterpart on the other side at all.");
    f.links.resize(3);
    f.links.push_back(testing::link({f.doc.src_index(1, 0)}, {f.doc.tgt_index(1, 0)}));
    f.links.push_back(testing::link({f.doc.src_index(1, 2)}, {f.doc.tgt_index(1, 1)}));
    f.links.push_back(testing::link({f.doc.src_index(1, 3)}, {f.doc.tgt_index(1, 2)}));
    out.push_back(std::move(f));
  }
  {
    auto f = base();
    f.name = "exclusivity veto";
    f.stage = "src_paragraphs_linked -> pairs_candidate";
    f.doc.src.push_back(kFiller2);
    f.doc.tgt.push_back(kFiller1);
    f.doc.tgt.push_back(kFiller1);
    f.links.push_back(testing::link({f.doc.src_index(2, 0)}, {f.doc.tgt_index(2, 0)}));
    f.links.push_back(testing::link({f.doc.src_index(2, 1)}, {f.doc.tgt_index(3, 0)}));
    out.push_back(std::move(f));
  }
  {
    auto f = base();
    f.name = "non-monotonic veto";
    f.stage = "pairs_candidate -> pairs_after_monotonic";
    f.doc.src.push_back(kFiller2);
    f.doc.tgt.push_back(kFiller2);
    f.links.push_back(testing::link({f.doc.src_index(2, 0)}, {f.doc.tgt_index(2, 1)}));
    f.links.push_back(testing::link({f.doc.src_index(2, 1)}, {f.doc.tgt_index(2, 0)}));
    out.push_back(std::move(f));
  }
  {
    auto f = base();
    f.name = "repeated-paragraph dedup";
    f.stage = "pairs_after_monotonic -> pairs_after_dedup";
    f.doc.src.push_back(kEnA);
    f.doc.tgt.push_back(kDeA);
    diagonal(f.doc, f.links, 2, 2, 3);
    out.push_back(std::move(f));
  }
  {
    auto f = base();
    f.name = "singleton drop";
    f.stage = "pairs_after_dedup -> pairs_after_singleton";
    f.doc.src.push_back(kEnSingle);
    f.doc.tgt.push_back(kDeSingle);
    diagonal(f.doc, f.links, 2, 2, 1);
    out.push_back(std::move(f));
  }
  {
    auto f = base();
    f.name = "wrong-language removal";
    f.stage = "sentence_pairs_surviving -> sentence_pairs_after_language";
    f.survivors = 3;  // the paragraph itself stays, one sentence pair shorter
    f.doc.src.push_back(kEnMuseum);
    f.doc.tgt.push_back(kDeMuseum);
    diagonal(f.doc, f.links, 2, 2, 4);
    out.push_back(std::move(f));
  }
  {
    auto f = base();
    f.name = "29-word length reject";
    f.stage = "pairs_after_language -> pairs_after_length";
    f.doc.src.push_back(kEn29);
    f.doc.tgt.push_back(kDe29);
    diagonal(f.doc, f.links, 2, 2, 2);
    out.push_back(std::move(f));
  }
  {
    auto f = base();
    f.name = ">50% overlap reject";
    f.stage = "pairs_after_length -> pairs_after_overlap";
    Para near = kEnB;
    near.back() = "The librarian has worked there for almost thirty years and knows most of her visitors.";
    f.doc.src.push_back(near);
    f.doc.tgt.push_back(kDeB);
    diagonal(f.doc, f.links, 2, 2, 3);
    out.push_back(std::move(f));
  }
  return out;
}

std::map<std::string, std::uint64_t> losses(const FunnelCounters& c) {
  return {
      {"links_input -> links_one_to_one", c.links_input - c.links_one_to_one},
      {"src_paragraphs_linked -> pairs_candidate", c.src_paragraphs_linked - c.pairs_candidate},
      {"sentences_in_candidates -> sentences_aligned", c.sentences_in_candidates - c.sentences_aligned},
      {"pairs_candidate -> pairs_after_monotonic", c.pairs_candidate - c.pairs_after_monotonic},
      {"pairs_after_monotonic -> pairs_after_dedup", c.pairs_after_monotonic - c.pairs_after_dedup},
      {"pairs_after_dedup -> pairs_after_singleton", c.pairs_after_dedup - c.pairs_after_singleton},
      {"pairs_after_singleton -> pairs_after_language", c.pairs_after_singleton - c.pairs_after_language},
      {"sentence_pairs_surviving -> sentence_pairs_after_language",
       c.sentence_pairs_surviving - c.sentence_pairs_after_language},
      {"pairs_after_language -> pairs_after_length", c.pairs_after_language - c.pairs_after_length},
      {"pairs_after_length -> pairs_after_overlap", c.pairs_after_length - c.pairs_after_overlap},
  };
}

FunnelCounters run_documents(const std::vector<std::pair<DocBuilder, std::vector<AlignmentLink>>>& docs,
                             const PipelineConfig& cfg, std::size_t* written = nullptr) {
  std::string doc_lines, align_lines;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const std::string id = fmt::format("fx-{}", i);
    RawDocPair raw{id, "https://example.org/" + id, "https://example.de/" + id, DocBuilder::render(docs[i].first.src),
                   DocBuilder::render(docs[i].first.tgt)};
    doc_lines += format_document_line(raw) + "\n";
    align_lines += "#pair " + id + "\n";
    for (const auto& link : docs[i].second) align_lines += format_alignment_line(link) + "\n";
  }
  LineReader d(string_source(doc_lines));
  LineReader a(string_source(align_lines));
  const auto report = run_extraction(d, a, cfg, resources(), 1, [](const ParagraphPair&) {});
  if (written) *written = report.pairs_written;
  return report.counters;
}

Outcome rule_fixture_checks() {
  if (count_words(fmt::format("{} {}", kEn29[0], kEn29[1])) != 29) return {false, "29-word fixture miscounted"};
  bool all = true;
  std::string detail;
  for (const auto& f : rule_fixtures()) {
    const auto counters = run_documents({{f.doc, f.links}}, PipelineConfig{});
    std::string fired;
    bool ok = true;
    for (const auto& [stage, loss] : losses(counters)) {
      const std::uint64_t expected = stage == f.stage ? 1 : 0;
      if (loss != expected) {
        ok = false;
        fired += fmt::format(" [{} lost {}]", stage, loss);
      }
    }
    if (counters.pairs_after_overlap != f.survivors) {
      ok = false;
      fired += fmt::format(" [{} pairs survived, expected {}]", counters.pairs_after_overlap, f.survivors);
    }
    all = all && ok;
    detail += fmt::format("\n    {:<26} {} at {}{}", f.name, ok ? "-1" : "MISMATCH", f.stage, fired);
  }
  return {all, "9 rules" + detail};
}

// ---------------------------------------------------------------------------
// Overlap fast path

std::string random_words(std::mt19937_64& rng, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += fmt::format("{}v{}", i ? " " : "", rng() % 1'000'000);
  return out;
}

Outcome overlap_fast_path() {
  // 46 tokens -> 42 shingles. Sharing a prefix of m tokens shares m-4 shingles.
  constexpr std::size_t kTokens = 46;
  const std::array<std::pair<double, std::size_t>, 4> levels = {{{0.3, 19 + 4}, {0.5, 28 + 4}, {0.7, 35 + 4}, {1.0, 46}}};
  std::mt19937_64 rng(4242);
  std::vector<ParagraphPair> stream;
  std::vector<int> level_of;  // -1 for base pairs
  std::vector<std::pair<std::string, std::string>> bases;
  auto push = [&](const std::string& src, const std::string& tgt, int level) {
    stream.push_back({"syn", stream.size(), stream.size(), {{0, 0, src, tgt}, {1, 1, "", ""}}});
    level_of.push_back(level);
  };
  constexpr std::size_t kBase = 600, kPerLevel = 100;
  for (std::size_t i = 0; i < kBase; ++i) {
    bases.emplace_back(random_words(rng, kTokens), random_words(rng, kTokens));
  }
  // Each planted pair copies a distinct base pair, on the source or the target side.
  std::vector<std::size_t> donors(kBase);
  std::iota(donors.begin(), donors.end(), 0);
  std::shuffle(donors.begin(), donors.end(), rng);
  std::vector<std::vector<std::pair<std::string, std::string>>> planted_after(kBase);
  std::vector<std::vector<int>> planted_level(kBase);
  double measured[4] = {0, 0, 0, 0};
  for (std::size_t l = 0; l < levels.size(); ++l) {
    for (std::size_t k = 0; k < kPerLevel; ++k) {
      const std::size_t donor = donors[l * kPerLevel + k];
      const bool on_src = k % 2 == 0;
      const std::string& orig = on_src ? bases[donor].first : bases[donor].second;
      std::string copy;
      {
        std::istringstream in(orig);
        std::string tok;
        for (std::size_t t = 0; t < levels[l].second && in >> tok; ++t) copy += (t ? " " : "") + tok;
        const std::size_t rest = kTokens - levels[l].second;
        if (rest) copy += " " + random_words(rng, rest);
      }
      const std::string other = random_words(rng, kTokens);
      measured[l] = jaccard(make_shingles(orig, 5), make_shingles(copy, 5));
      planted_after[donor].emplace_back(on_src ? copy : other, on_src ? other : copy);
      planted_level[donor].push_back(static_cast<int>(l));
    }
  }
  for (std::size_t i = 0; i < kBase; ++i) {
    push(bases[i].first, bases[i].second, -1);
    // planted copies follow their donor after a gap
    if (i >= 5) {
      for (std::size_t k = 0; k < planted_after[i - 5].size(); ++k) {
        push(planted_after[i - 5][k].first, planted_after[i - 5][k].second, planted_level[i - 5][k]);
      }
    }
  }
  for (std::size_t i = kBase - 5; i < kBase; ++i) {
    for (std::size_t k = 0; k < planted_after[i].size(); ++k) {
      push(planted_after[i][k].first, planted_after[i][k].second, planted_level[i][k]);
    }
  }

  auto decisions = [&](OverlapMethod method) {
    PipelineConfig cfg;
    cfg.overlap_method = method;
    OverlapFilter filter(cfg.overlap_threshold, method);
    std::vector<bool> kept;
    for (const auto& pair : stream) kept.push_back(filter.admit(make_signature(pair, cfg.shingle_size)));
    return kept;
  };
  const auto exact = decisions(OverlapMethod::kExact);
  const auto lsh = decisions(OverlapMethod::kLsh);
  std::size_t agree = 0, lsh_misses = 0, lsh_extra = 0, dup_removed = 0, dup_total = 0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (exact[i] == lsh[i]) {
      ++agree;
    } else if (lsh[i]) {
      ++lsh_misses;
    } else {
      ++lsh_extra;
    }
    if (level_of[i] == 3) {
      ++dup_total;
      dup_removed += !lsh[i];
    }
  }
  const double agreement = static_cast<double>(agree) / static_cast<double>(stream.size());
  const bool pass = stream.size() == 1000 && agreement >= 0.99 && lsh_extra == 0 && dup_removed == dup_total;
  return {pass, fmt::format("{} pairs, J levels {:.3f}/{:.3f}/{:.3f}/{:.3f}; agreement {:.2f}% (min 99%), "
                            "LSH misses {}, LSH-only removals {}, J=1.0 removed {}/{}",
                            stream.size(), measured[0], measured[1], measured[2], measured[3], 100 * agreement,
                            lsh_misses, lsh_extra, dup_removed, dup_total)};
}

// ---------------------------------------------------------------------------
// BLEU and bootstrap

std::vector<Tokens> random_segments(std::mt19937_64& rng, std::size_t n, std::size_t vocab) {
  std::vector<Tokens> out(n);
  for (auto& seg : out) {
    for (std::size_t i = 5 + rng() % 25; i > 0; --i) seg.push_back("w" + std::to_string(rng() % vocab));
  }
  return out;
}

std::vector<Tokens> noisy(std::mt19937_64& rng, std::vector<Tokens> refs, unsigned percent) {
  for (auto& seg : refs) {
    for (auto& tok : seg) {
      if (rng() % 100 < percent) tok = "n" + std::to_string(rng() % 11);
    }
  }
  return refs;
}

Outcome bleu_criterion() {
  std::mt19937_64 rng(5);
  const auto refs = random_segments(rng, 300, 40);
  const double identity = bleu(refs, refs).score;
  const auto clip = bleu({tokenize_whitespace("the the the the the the the")},
                         {tokenize_whitespace("the cat is on the mat")});
  const auto hyps = noisy(rng, refs, 30);
  const auto stats = corpus_stats(hyps, refs);
  const double s1 = bleu(hyps, refs).score;
  const double s2 = bleu(hyps, refs).score;
  double spread = std::abs(s1 - s2);
  for (std::size_t workers : {1, 2, 8}) {
    spread = std::max(spread, std::abs(paired_bootstrap(stats, stats, 1000, 3, workers).bleu_a - s1));
  }
  const bool pass = identity == 100.0 && clip.precisions[0] == 2.0 / 7.0 && spread <= 1e-9;
  return {pass, fmt::format("identity {:.17g}; clipping p1 = {:.17g} (2/7 = {:.17g}); max spread {:.3g} (limit 1e-9)",
                            identity, clip.precisions[0], 2.0 / 7.0, spread)};
}

Outcome bootstrap_criterion() {
  std::mt19937_64 rng(8);
  const auto refs = random_segments(rng, 500, 50);
  const auto a = corpus_stats(noisy(rng, refs, 20), refs);
  const auto b = corpus_stats(noisy(rng, refs, 22), refs);
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());

  const double p_same = paired_bootstrap(a, a, 10000, 1, workers).p_value;
  std::vector<Tokens> junk(refs.size(), Tokens{"zzz"});
  const double p_dominated = paired_bootstrap(corpus_stats(refs, refs), corpus_stats(junk, refs), 1000, 1, workers).p_value;
  const double p1 = paired_bootstrap(a, b, 1000, 77, 1).p_value;
  const double p2 = paired_bootstrap(a, b, 1000, 77, workers).p_value;
  const double p3 = paired_bootstrap(a, b, 1000, 77, 1).p_value;

  const auto t0 = Clock::now();
  const auto timed = paired_bootstrap(a, b, 10000, 1, workers);
  const double secs = seconds_since(t0);
  const bool pass = p_same == 1.0 && p_dominated == 0.0 && p1 == p2 && p1 == p3 && secs < 10.0;
  return {pass, fmt::format("A-vs-A p = {}; dominating A p = {}; seed 77 p = {}/{}/{}; 10k x 500 in {:.2f}s "
                            "(limit 10s, {} worker(s), p = {:.4f})",
                            p_same, p_dominated, p1, p2, p3, secs, workers, timed.p_value)};
}

// ---------------------------------------------------------------------------
// Contrastive scoring

Outcome contrastive_criterion() {
  LineReader set_lines(kFixtures / "contrapro.jsonl");
  LineReader score_lines(kFixtures / "contrapro.scores.tsv");
  const auto instances = read_contrastive_set(set_lines);
  const auto scores = read_scores(score_lines);
  const auto report = contrastive_score(instances, scores);
  const auto loc = accuracy_by_location(instances, scores);
  const bool fixture_ok = fmt::format("{:.3f}", *report.overall.value()) == "0.667" &&
                          report.by_pronoun[0].value() == 1.0 && report.by_pronoun[1].value() == 0.0 &&
                          report.by_pronoun[2].value() == 1.0;
  const bool partition_ok = loc.inside.total + loc.outside.total == report.overall.total &&
                            loc.inside.correct + loc.outside.correct == report.overall.correct;

  ContrastiveInstance tie = instances[0];
  const bool tie_ok = !judge({tie}, {{tie.instance_id, 0, -1.0}, {tie.instance_id, 1, -1.0}, {tie.instance_id, 2, -3.0}})[0];

  // synthetic scores: recount accuracies independently
  std::mt19937_64 rng(12);
  std::vector<ContrastiveInstance> synth;
  std::vector<CandidateScore> synth_scores;
  std::array<std::size_t, 3> correct{}, total{};
  std::size_t in_c = 0, in_t = 0;
  for (std::size_t i = 0; i < 2000; ++i) {
    ContrastiveInstance inst;
    inst.instance_id = fmt::format("s{}", i);
    inst.source = "It is there.";
    inst.correct = "Es ist da.";
    inst.contrastive = {"Er ist da.", "Sie ist da."};
    inst.pronoun = static_cast<PronounClass>(rng() % 3);
    inst.antecedent_distance = rng() % 3;
    double best_other = -1e9;
    const double mine = -static_cast<double>(rng() % 20);
    synth_scores.push_back({inst.instance_id, 0, mine});
    for (std::size_t c = 1; c <= 2; ++c) {
      const double s = -static_cast<double>(rng() % 20);
      best_other = std::max(best_other, s);
      synth_scores.push_back({inst.instance_id, c, s});
    }
    const bool ok = mine > best_other;
    const auto p = static_cast<std::size_t>(inst.pronoun);
    correct[p] += ok;
    ++total[p];
    if (inst.antecedent_distance == 0) {
      in_c += ok;
      ++in_t;
    }
    synth.push_back(std::move(inst));
  }
  std::shuffle(synth_scores.begin(), synth_scores.end(), rng);
  const auto sr = contrastive_score(synth, synth_scores);
  const auto sl = accuracy_by_location(synth, synth_scores);
  bool synth_ok = sl.inside.correct == in_c && sl.inside.total == in_t;
  for (std::size_t p = 0; p < 3; ++p) {
    synth_ok = synth_ok && sr.by_pronoun[p].correct == correct[p] && sr.by_pronoun[p].total == total[p];
  }
  return {fixture_ok && partition_ok && tie_ok && synth_ok,
          fmt::format("fixture total {:.3f}, es/er/sie {}/{}/{}; inside+outside = {}/{}; tie incorrect: {}; "
                      "2000 synthetic instances recounted: {}",
                      *report.overall.value(), *report.by_pronoun[0].value(), *report.by_pronoun[1].value(),
                      *report.by_pronoun[2].value(), loc.inside.total + loc.outside.total, report.overall.total,
                      tie_ok ? "yes" : "no", synth_ok ? "match" : "MISMATCH")};
}

// ---------------------------------------------------------------------------
// Synthetic corpus for determinism and throughput

std::vector<std::string> sample_sentences(const std::string& lang) {
  const auto text = read_file(default_data_dir() / "langid" / "samples" / (lang + ".txt"));
  const auto splitter = SentenceSplitter::for_language(default_data_dir() / "abbrev", lang);
  std::vector<std::string> out;
  for (const auto& para : split_paragraphs(text)) {
    for (auto& s : split_sentences(para, splitter)) out.push_back(std::move(s));
  }
  return out;
}

// Writes docs.tsv and alignments.txt with `n_docs` pairs of 5 paragraphs x 3 sentences per side.
void write_synthetic_corpus(const fs::path& dir, std::size_t n_docs, std::uint64_t seed) {
  static const auto en = sample_sentences("en");
  static const auto de = sample_sentences("de");
  std::mt19937_64 rng(seed);
  std::ofstream docs(dir / "docs.tsv", std::ios::binary);
  std::ofstream aligns(dir / "alignments.txt", std::ios::binary);
  for (std::size_t d = 0; d < n_docs; ++d) {
    const std::string id = fmt::format("syn-{:05}", d);
    std::string src, tgt;
    std::vector<AlignmentLink> links;
    std::size_t idx = 0;
    for (std::size_t p = 0; p < 5; ++p) {
      if (p) {
        src += "\n";
        tgt += "\n";
      }
      for (std::size_t s = 0; s < 3; ++s) {
        src += en[rng() % en.size()] + "\n";
        tgt += de[rng() % de.size()] + "\n";
      }
      const std::size_t kind = rng() % 10;
      if (kind == 0) {  // crossing
        links.push_back(testing::link({idx}, {idx + 1}));
        links.push_back(testing::link({idx + 1}, {idx}));
        links.push_back(testing::link({idx + 2}, {idx + 2}));
      } else if (kind == 1) {  // merge
        links.push_back(testing::link({idx, idx + 1}, {idx}));
        links.push_back(testing::link({idx + 2}, {idx + 2}));
      } else {
        for (std::size_t s = 0; s < 3; ++s) links.push_back(testing::link({idx + s}, {idx + s}, 0.1 * s));
      }
      idx += 3;
    }
    docs << format_document_line({id, "https://example.org/" + id, "https://example.de/" + id, src, tgt}) << '\n';
    aligns << "#pair " << id << '\n';
    for (const auto& l : links) aligns << format_alignment_line(l) << '\n';
  }
}

nlohmann::json manifest_without_timing(const fs::path& path) {
  auto j = nlohmann::json::parse(read_file(path));
  j.erase("timing");
  return j;
}

Outcome determinism_end_to_end() {
  const fs::path root = fs::absolute("determinism");
  fs::remove_all(root);
  fs::create_directories(root / "synthetic");
  write_synthetic_corpus(root / "synthetic", 2000, 99);
  std::string detail;
  bool all = true;
  const std::pair<std::string, fs::path> corpora[] = {{"fixture", kFixtures}, {"synthetic", root / "synthetic"}};
  for (const auto& [name, src] : corpora) {
    std::map<std::size_t, std::pair<std::string, nlohmann::json>> runs;
    for (std::size_t workers : {1, 8}) {
      const fs::path dir = root / fmt::format("{}-w{}", name, workers);
      fs::create_directories(dir);
      const int code = run_command(fmt::format("cd {} && {} extract --docs {} --alignments {} --out pairs.jsonl "
                                               "--workers {} >/dev/null 2>&1",
                                               quote(dir), quote(PARAPIPE_BINARY), quote(src / "docs.tsv"),
                                               quote(src / "alignments.txt"), workers));
      if (code != 0) return {false, fmt::format("{} run with {} workers exited {}", name, workers, code)};
      runs[workers] = {read_file(dir / "pairs.jsonl") + read_file(dir / "pairs.jsonl.funnel.txt"),
                       manifest_without_timing(dir / "pairs.jsonl.manifest.json")};
    }
    const bool same_out = runs[1].first == runs[8].first;
    const bool same_manifest = runs[1].second == runs[8].second;
    all = all && same_out && same_manifest && !runs[1].first.empty();
    detail += fmt::format("{}{}: outputs {}, manifests {} ({} pairs)", detail.empty() ? "" : "; ", name,
                          same_out ? "identical" : "DIFFER", same_manifest ? "identical" : "DIFFER",
                          runs[1].second.value("pairs_written", 0));
  }
  return {all, "--workers 1 vs 8, timing fields excluded; " + detail};
}

Outcome funnel_and_rendering() {
  const fs::path dir = fs::absolute("funnel");
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_synthetic_corpus(dir, 500, 3);
  PipelineConfig cfg;
  LineReader docs(dir / "docs.tsv");
  LineReader aligns(dir / "alignments.txt");
  std::vector<ParagraphPair> pairs;
  const auto report = run_extraction(docs, aligns, cfg, resources(), 1, [&](const ParagraphPair& p) { pairs.push_back(p); });
  const auto& c = report.counters;
  const std::uint64_t rows[] = {c.links_input, c.sentence_pairs_surviving, c.sentence_pairs_after_cleaning};
  const std::uint64_t pair_rows[] = {c.pairs_candidate,      c.pairs_after_monotonic, c.pairs_after_dedup,
                                     c.pairs_after_singleton, c.pairs_after_language,  c.pairs_after_length,
                                     c.pairs_after_overlap};
  const bool monotone = std::is_sorted(std::begin(rows), std::end(rows), std::greater<>()) &&
                        std::is_sorted(std::begin(pair_rows), std::end(pair_rows), std::greater<>());
  if (pairs.empty()) return {false, "synthetic run produced no pairs"};
  const auto hist = length_distribution(pairs);
  const double sum = std::accumulate(hist.percent.begin(), hist.percent.end(), 0.0);

  FunnelCounters reference;
  reference.links_input = 147'000'000;
  reference.sentence_pairs_surviving = 11'700'000;
  reference.sentence_pairs_after_cleaning = 5'500'000;
  LengthHistogram reference_hist;
  reference_hist.percent = {34.63, 29.31, 15.99, 18.29, 1.77};
  const std::vector<NamedStats> table1 = {{"Train", {1'500'000, 5'500'000, 118'000'000, 109'000'000}},
                                          {"Dev", {402, 1504, 32'000, 29'000}},
                                          {"Test", {411, 1510, 33'000, 30'000}}};
  const bool golden = render_stats_table(table1, "en", "de") == read_file(kGolden / "table1_stats.txt") &&
                      funnel_report(reference) == read_file(kGolden / "table2_funnel.txt") &&
                      render_length_table(reference_hist) == read_file(kGolden / "table3_length.txt");
  return {monotone && std::abs(sum - 100.0) <= 1e-6 && golden,
          fmt::format("funnel {} -> {} -> {} ({}); histogram sum {:.12f} (tol 1e-6); stats, funnel and length layouts {}", rows[0],
                      rows[1], rows[2], monotone ? "monotone" : "NOT monotone", sum, golden ? "match golden" : "DIFFER")};
}

Outcome throughput() {
  const fs::path dir = fs::absolute("throughput");
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_synthetic_corpus(dir, 10000, 2024);
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  const auto t0 = Clock::now();
  const int code = run_command(fmt::format("{} extract --docs {} --alignments {} --out {} --workers {} >/dev/null 2>&1",
                                           quote(PARAPIPE_BINARY), quote(dir / "docs.tsv"),
                                           quote(dir / "alignments.txt"), quote(dir / "pairs.jsonl"), workers));
  const double secs = seconds_since(t0);
  const auto manifest = nlohmann::json::parse(read_file(dir / "pairs.jsonl.manifest.json"));
  return {code == 0 && secs < 60.0,
          fmt::format("10000 document pairs (300000 sentences) in {:.2f}s with {} worker(s) (limit 60s), {} pairs "
                      "written",
                      secs, workers, manifest.value("pairs_written", 0))};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Oracle equivalence", oracle_equivalence},
      {"Invariant suite", invariant_suite},
      {"Rule fixtures", rule_fixture_checks},
      {"Overlap fast path", overlap_fast_path},
      {"BLEU", bleu_criterion},
      {"Bootstrap", bootstrap_criterion},
      {"Contrastive scoring", contrastive_criterion},
      {"Determinism end-to-end", determinism_end_to_end},
      {"Funnel, histogram and table layouts", funnel_and_rendering},
      {"Throughput (soft)", throughput},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& err) {
      outcome = {false, std::string("exception: ") + err.what()};
    }
    failures += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << name << ": " << outcome.detail << std::endl;
  }
  std::cout << fmt::format("{} of {} criteria passed\n", std::size(criteria) - failures, std::size(criteria));
  return failures;
}
