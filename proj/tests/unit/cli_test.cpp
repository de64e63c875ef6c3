#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <json.hpp>

#include "parapipe/extraction.hpp"
#include "parapipe/io.hpp"

namespace parapipe {
namespace {

namespace fs = std::filesystem;
const fs::path kFixtures = PARAPIPE_TEST_FIXTURES;

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded.
Result cli(const std::string& args) {
  const std::string cmd = std::string("\"") + PARAPIPE_BINARY + "\" " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("parapipe_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, NoArgumentsIsUsageError) { EXPECT_EQ(cli("").code, 1); }

TEST_F(Cli, VersionNamesFormats) {
  const auto r = cli("--version");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("paragraph-jsonl/1"), std::string::npos);
}

TEST_F(Cli, ExtractFixture) {
  const auto r = cli("extract --docs " + (kFixtures / "docs.tsv").string() + " --alignments " +
                     (kFixtures / "alignments.txt").string() + " --out " + path("out.jsonl"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("After cleaning"), std::string::npos);
  LineReader lines{fs::path(path("out.jsonl"))};
  EXPECT_EQ(read_paragraph_pairs(lines).size(), 2u);
  const auto manifest = nlohmann::json::parse(read_file(path("out.jsonl.manifest.json")));
  EXPECT_EQ(manifest.at("pairs_written"), 2);
  EXPECT_EQ(manifest.at("outputs").at("pairs").at("sha256").get<std::string>().size(), 64u);
  EXPECT_TRUE(fs::exists(path("out.jsonl.funnel.txt")));
}

TEST_F(Cli, ExtractMissingDocsIsUsageError) {
  EXPECT_EQ(cli("extract --alignments " + (kFixtures / "alignments.txt").string() + " --out " + path("o")).code, 1);
}

TEST_F(Cli, ExtractBadFlagValueIsUsageError) {
  EXPECT_EQ(cli("extract --docs " + (kFixtures / "docs.tsv").string() + " --alignments " +
                (kFixtures / "alignments.txt").string() + " --out " + path("o") + " --overlap-method fuzzy")
                .code,
            1);
}

TEST_F(Cli, CorruptBase64UnderAbortIsDataError) {
  write_file(path("bad.tsv"), "d1\tu1\tu2\t!!!\td2VsdAo=\n");
  write_file(path("a.txt"), "#pair d1\n[0]:[0]:0.1\n");
  const std::string base = "extract --docs " + path("bad.tsv") + " --alignments " + path("a.txt") + " --out " + path("o");
  EXPECT_EQ(cli(base + " --on-error abort").code, 2);
  EXPECT_EQ(cli(base).code, 0);
}

TEST_F(Cli, SplitSizes) {
  std::string corpus;
  for (int i = 0; i < 100; ++i) {
    corpus += to_json_line(ParagraphPair{"d" + std::to_string(i), 0, 0, {{0, 0, "a", "b"}, {1, 1, "c", "d"}}}) + "\n";
  }
  write_file(path("all.jsonl"), corpus);
  const auto r = cli("split --in " + path("all.jsonl") + " --out-prefix " + path("c") + " --dev 10 --test 10 --seed 42");
  ASSERT_EQ(r.code, 0);
  for (const auto& [part, n] : {std::pair{"train", 80u}, {"dev", 10u}, {"test", 10u}}) {
    LineReader lines{fs::path(path(std::string("c.") + part + ".jsonl"))};
    EXPECT_EQ(read_paragraph_pairs(lines).size(), n) << part;
  }
  EXPECT_EQ(cli("split --in " + path("all.jsonl") + " --out-prefix " + path("c") + " --dev 90 --test 20").code, 1);
}

TEST_F(Cli, StatsTable) {
  const auto extract = cli("extract --docs " + (kFixtures / "docs.tsv").string() + " --alignments " +
                           (kFixtures / "alignments.txt").string() + " --out " + path("corpus.train.jsonl"));
  ASSERT_EQ(extract.code, 0);
  const auto r = cli("stats " + path("corpus.train.jsonl"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Train"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("100.00%"), std::string::npos) << r.out;
}

TEST_F(Cli, BleuIdentity) {
  write_file(path("ref.txt"), "the cat sat on the mat\nhello there world again\n");
  const auto r = cli("bleu --hyp " + path("ref.txt") + " --ref " + path("ref.txt"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("BLEU = 100.00", 0), 0u) << r.out;
}

TEST_F(Cli, BleuLineCountMismatchIsDataError) {
  write_file(path("a.txt"), "a b\n");
  write_file(path("b.txt"), "a b\nc d\n");
  EXPECT_EQ(cli("bleu --hyp " + path("a.txt") + " --ref " + path("b.txt")).code, 2);
}

TEST_F(Cli, BootstrapIdenticalSystems) {
  write_file(path("ref.txt"), "a b c d\ne f g h\ni j k l\n");
  write_file(path("hyp.txt"), "a b c x\ne f y h\ni j k l\n");
  const auto r = cli("bootstrap --ref " + path("ref.txt") + " --hyp-a " + path("hyp.txt") + " --hyp-b " +
                     path("hyp.txt") + " --format json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("p_value").get<double>(), 1.0);
  EXPECT_FALSE(j.at("significant").get<bool>());
  EXPECT_EQ(cli("bootstrap --ref " + path("ref.txt") + " --hyp-a " + path("hyp.txt") + " --hyp-b " + path("hyp.txt") +
                " --n-resamples 10")
                .code,
            1);
}

TEST_F(Cli, ContraproFixture) {
  const std::string args = "contrapro --test-set " + (kFixtures / "contrapro.jsonl").string() + " --scores " +
                           (kFixtures / "contrapro.scores.tsv").string();
  const auto table = cli(args);
  ASSERT_EQ(table.code, 0);
  EXPECT_NE(table.out.find("0.667"), std::string::npos) << table.out;
  const auto j = nlohmann::json::parse(cli(args + " --format json").out);
  EXPECT_EQ(j.at("total").at("correct"), 2);
  EXPECT_EQ(j.at("er").at("accuracy").get<double>(), 0.0);
}

TEST_F(Cli, ContraproMissingScoresIsDataError) {
  write_file(path("s.tsv"), "c1\t0\t-1\n");
  EXPECT_EQ(cli("contrapro --test-set " + (kFixtures / "contrapro.jsonl").string() + " --scores " + path("s.tsv")).code,
            2);
}

TEST_F(Cli, LangidTrainNeedsEnoughText) {
  write_file(path("tiny.txt"), "too short");
  const std::string data = PARAPIPE_DATA_DIR;
  EXPECT_EQ(cli("langid-train --sample en=" + path("tiny.txt") + " --sample de=" + data +
                "/langid/samples/de.txt --out-dir " + path("p"))
                .code,
            2);
  EXPECT_EQ(cli("langid-train --sample en=" + data + "/langid/samples/en.txt --sample de=" + data +
                "/langid/samples/de.txt --out-dir " + path("p"))
                .code,
            0);
  EXPECT_EQ(read_file(path("p/en.tsv")), read_file(data + "/langid/profiles/en.tsv"));
}

}  // namespace
}  // namespace parapipe
