#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "patholab/corpus.hpp"
#include "patholab/parser.hpp"

using namespace patholab;
using corpus::Verdict;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string temp_path(const std::string& name) {
  return testing::TempDir() + "patholab_" + name;
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = temp_path(name);
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(PATHOLAB_CLI) + " " + args + " > " + temp_path("cli.out") + " 2> " + temp_path("cli.err");
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const corpus::Report* by_name(const corpus::RunReport& run, const std::string& name) {
  for (const auto& r : run.reports)
    if (r.name == name) return &r;
  return nullptr;
}

}  // namespace

TEST(CorpusParse, EntriesNotesAndExpectations) {
  auto c = corpus::parse_corpus(
      "# comment\n"
      "\n"
      "a :: not (x in x) :: ProvedPatho  # first\n"
      "  b :: x in x\n");
  ASSERT_TRUE(c.errors.empty());
  ASSERT_EQ(c.entries.size(), 2u);
  EXPECT_EQ(c.entries[0].name, "a");
  EXPECT_EQ(c.entries[0].formula_text, "not (x in x)");
  EXPECT_EQ(c.entries[0].expected, Verdict::ProvedPatho);
  EXPECT_EQ(c.entries[0].note, "first");
  EXPECT_EQ(c.entries[0].line, 3);
  EXPECT_EQ(c.entries[1].expected, std::nullopt);
  EXPECT_EQ(c.entries[1].line, 4);
}

TEST(CorpusParse, MalformedLinesAreReportedPerLine) {
  auto c = corpus::parse_corpus(
      "ok :: Verum\n"
      "no separator\n"
      "bad :: Verum :: Maybe\n"
      "ok :: Falsum\n"
      " :: x in x\n"
      "a :: b :: c :: d\n");
  EXPECT_EQ(c.entries.size(), 1u);
  ASSERT_EQ(c.errors.size(), 5u);
  EXPECT_EQ(c.errors[0].line, 2);
  EXPECT_EQ(c.errors[1].line, 3);
  EXPECT_NE(c.errors[1].message.find("Maybe"), std::string::npos);
  EXPECT_EQ(c.errors[2].line, 4);
  EXPECT_NE(c.errors[2].message.find("duplicate"), std::string::npos);
}

TEST(CorpusParse, EmptyCorpus) {
  auto c = corpus::parse_corpus("");
  EXPECT_TRUE(c.entries.empty());
  EXPECT_TRUE(c.errors.empty());
  auto run = corpus::run_corpus(c, corpus::Config{});
  EXPECT_TRUE(run.reports.empty());
  EXPECT_EQ(run.mismatches, 0);
}

TEST(CorpusParse, VerdictNamesRoundTrip) {
  for (Verdict v : {Verdict::ProvedPatho, Verdict::CertifiedNonPatho, Verdict::Unknown, Verdict::Unsupported,
                    Verdict::Error}) {
    EXPECT_EQ(corpus::verdict_from_name(corpus::verdict_name(v)), v);
  }
  EXPECT_EQ(corpus::verdict_from_name("Patho"), std::nullopt);
}

TEST(Bundled, FileInRepositoryMatchesBuiltIn) {
  EXPECT_EQ(read_file(PATHOLAB_SOURCE_DIR "/corpus/classics.txt"), corpus::bundled_corpus());
}

TEST(Bundled, PinnedVerdicts) {
  auto c = corpus::parse_corpus(corpus::bundled_corpus());
  ASSERT_TRUE(c.errors.empty());
  std::map<std::string, Verdict> pinned;
  for (const auto& e : c.entries)
    if (e.expected) pinned[e.name] = *e.expected;
  for (const char* name : {"russell", "nc2", "nc3"}) EXPECT_EQ(pinned.at(name), Verdict::ProvedPatho) << name;
  for (const char* name : {"verum", "falsum", "self_member"}) EXPECT_EQ(pinned.at(name), Verdict::CertifiedNonPatho);
  EXPECT_EQ(pinned.at("ko_di_f"), Verdict::Unsupported);
}

TEST(Bundled, RunMeetsExpectations) {
  auto run = corpus::run_corpus(corpus::parse_corpus(corpus::bundled_corpus()), corpus::Config{});
  EXPECT_EQ(run.mismatches, 0);
  EXPECT_EQ(run.errors, 0);
  EXPECT_GE(run.counts.at("ProvedPatho"), 3);
  EXPECT_GE(run.counts.at("CertifiedNonPatho"), 4);
  for (std::size_t i = 1; i < run.reports.size(); ++i) EXPECT_LT(run.reports[i - 1].name, run.reports[i].name);
  for (const auto& r : run.reports) {
    if (strat::is_stratified(r.strat)) EXPECT_NE(r.verdict, Verdict::ProvedPatho) << r.name;
  }
}

TEST(Classify, Russell) {
  auto r = corpus::classify_text("not (x in x)", corpus::Config{});
  ASSERT_FALSE(r.error);
  EXPECT_EQ(r.verdict, Verdict::ProvedPatho);
  EXPECT_TRUE(r.proof_checked);
  EXPECT_EQ(std::get<refuter::Proof>(r.refutation).depth_used, 1);
  ASSERT_TRUE(synt::is_syntp(r.synt));
  EXPECT_EQ(std::get<synt::SyntP>(r.synt).match.n, 1);
  EXPECT_FALSE(strat::is_stratified(r.strat));
  ASSERT_TRUE(r.hereditary);
  EXPECT_EQ(r.hereditary->overall, hereditary::Overall::SubPatho);
}

TEST(Classify, VerumIsWrappedAndCertified) {
  auto r = corpus::classify_text("Verum", corpus::Config{});
  ASSERT_FALSE(r.error);
  EXPECT_TRUE(r.wrapped);
  EXPECT_EQ(print(r.formula), "Verum & (x = x)");
  EXPECT_EQ(r.verdict, Verdict::CertifiedNonPatho);
  EXPECT_FALSE(synt::is_syntp(r.synt));
  EXPECT_TRUE(strat::is_stratified(r.strat));
  EXPECT_EQ(r.hereditary->overall, hereditary::Overall::CertifiedHnP);
  ASSERT_TRUE(r.model);
  EXPECT_EQ(r.model->size, 1);
  ASSERT_TRUE(r.size);
  EXPECT_EQ(r.size->kind, model::SizeKind::Mighty);
}

TEST(Classify, Nc2) {
  auto r = corpus::classify_text("not exists a: ((x in a) & (a in x))", corpus::Config{});
  EXPECT_EQ(r.verdict, Verdict::ProvedPatho);
  EXPECT_EQ(std::get<synt::SyntP>(r.synt).match.n, 2);
}

TEST(Classify, ErrorsAreReportedNotThrown) {
  auto bad = corpus::classify_text("x in (", corpus::Config{});
  ASSERT_TRUE(bad.error);
  EXPECT_EQ(bad.error->kind, "parse");
  auto open = corpus::classify_text("x in y", corpus::Config{});
  ASSERT_TRUE(open.error);
  EXPECT_EQ(open.error->kind, "not nearly closed");
}

TEST(Classify, TinyBudgetGivesUnknownForNc3) {
  corpus::Config config;
  config.budget.max_steps = 5;
  config.model_size = 2;
  auto r = corpus::classify_text("not exists a: exists b: ((x in a) & (a in b) & (b in x))", config);
  EXPECT_EQ(r.verdict, Verdict::Unknown);
}

TEST(Run, MalformedLineDoesNotAbort) {
  auto run = corpus::run_corpus(corpus::parse_corpus("a :: not (x in x)\nb :: x in (\nc ::\nd :: Verum\n"),
                                corpus::Config{});
  ASSERT_EQ(run.reports.size(), 4u);
  EXPECT_EQ(run.errors, 2);
  EXPECT_EQ(by_name(run, "a")->verdict, Verdict::ProvedPatho);
  EXPECT_EQ(by_name(run, "d")->verdict, Verdict::CertifiedNonPatho);
  EXPECT_EQ(by_name(run, "b")->error->kind, "parse");
  EXPECT_EQ(run.counts.at("Error"), 2);
}

TEST(Run, MismatchIsCounted) {
  auto run = corpus::run_corpus(corpus::parse_corpus("a :: x in x :: ProvedPatho\n"), corpus::Config{});
  EXPECT_EQ(run.mismatches, 1);
}

TEST(Run, JsonWithoutTimingIsDeterministic) {
  auto c = corpus::parse_corpus(corpus::bundled_corpus());
  corpus::Config config;
  auto strip = [&] {
    auto j = corpus::to_json(corpus::run_corpus(c, config), config);
    EXPECT_TRUE(j.contains("timing"));
    j.erase("timing");
    return j.dump();
  };
  std::string first = strip();
  EXPECT_EQ(first, strip());
  EXPECT_EQ(first.find("_ms"), std::string::npos);
}

TEST(Audit, Examples) {
  auto audit = corpus::audit_1jt(corpus::parse_corpus("russell :: not (x in x)\nverum :: Verum\n"
                                                      "nc2 :: not exists a: ((x in a) & (a in x))\n"),
                                 corpus::Config{});
  EXPECT_TRUE(audit.passed);
  ASSERT_EQ(audit.pairs.size(), 3u);
  const auto& nc2 = audit.pairs[0];
  EXPECT_EQ(nc2.verdict, Verdict::ProvedPatho);
  EXPECT_EQ(nc2.negation, "exists a: ((x in a) & (a in x))");
  EXPECT_EQ(nc2.negation_verdict, Verdict::CertifiedNonPatho);
  const auto& russell = audit.pairs[1];
  EXPECT_EQ(russell.negation, "x in x");
  EXPECT_EQ(russell.negation_verdict, Verdict::CertifiedNonPatho);
  const auto& verum = audit.pairs[2];
  EXPECT_EQ(verum.verdict, Verdict::CertifiedNonPatho);
  EXPECT_EQ(verum.negation_verdict, Verdict::CertifiedNonPatho);
}

TEST(Audit, NegationOfNc2HasTwoCycleModel) {
  auto certified =
      model::certify_nonpatho(std::get<NearlyClosed>(nearly_closed(parse("exists a: ((x in a) & (a in x))"))), 2);
  ASSERT_TRUE(std::holds_alternative<model::CertifiedNonPatho>(certified));
  const auto& m = std::get<model::CertifiedNonPatho>(certified).model;
  bool cycle = false;
  for (int i = 0; i < m.size; ++i)
    for (int j = 0; j < m.size; ++j) cycle |= m.member(i, j) && m.member(j, i);
  EXPECT_TRUE(cycle);
}

TEST(Audit, BundledCorpusPasses) {
  auto audit = corpus::audit_1jt(corpus::parse_corpus(corpus::bundled_corpus()), corpus::Config{});
  EXPECT_TRUE(audit.passed);
}

TEST(ContentId, StableFnv1a) {
  EXPECT_EQ(corpus::content_id(""), "cbf29ce484222325");
  EXPECT_EQ(corpus::content_id("a"), "af63dc4c8601ec8c");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("classify \"not (x in x)\""), 0);
  EXPECT_EQ(run_cli("classify \"x in (\""), 2);
  EXPECT_EQ(run_cli("classify \"x in y\""), 2);
  EXPECT_EQ(run_cli("--format yaml classify Verum"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("run " + temp_path("missing.txt")), 2);
  EXPECT_EQ(run_cli("run " + write_temp("empty.txt", "")), 0);
  EXPECT_EQ(run_cli("run " + write_temp("mismatch.txt", "a :: x in x :: ProvedPatho\n")), 1);
  std::string malformed = write_temp("malformed.txt", "a :: Verum\nbroken line\n");
  EXPECT_EQ(run_cli("run " + malformed), 0);
  EXPECT_EQ(run_cli("run --fail-on-error " + malformed), 1);
  EXPECT_EQ(run_cli("audit-1jt " + write_temp("audit.txt", "r :: not (x in x)\n")), 0);
}

TEST(Cli, SeedCorpusWritesBundledText) {
  std::string path = temp_path("seed.txt");
  std::remove(path.c_str());
  EXPECT_EQ(run_cli("--seed-corpus " + path), 0);
  EXPECT_EQ(read_file(path), corpus::bundled_corpus());
}

TEST(Cli, JsonOutputParses) {
  std::string out = temp_path("report.json");
  ASSERT_EQ(run_cli("--format json -o " + out + " classify \"not (x in x)\""), 0);
  auto j = nlohmann::json::parse(read_file(out));
  EXPECT_EQ(j["entry"]["verdict"], "ProvedPatho");
  EXPECT_EQ(j["config"]["refute_depth"], 3);
  EXPECT_EQ(j["config"]["refute_steps"], 50000);
  EXPECT_EQ(j["config"]["model_size"], 5);
}
