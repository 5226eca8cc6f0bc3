#include <gtest/gtest.h>

#include "patholab/parser.hpp"
#include "patholab/strat.hpp"
#include "support/fuzz.hpp"
#include "support/oracles.hpp"

using namespace patholab;

namespace {

strat::StratResult run(const char* text) { return strat::stratify(parse(text)); }

}  // namespace

TEST(Stratify, RussellHasCycleWithOffsetOne) {
  auto r = run("not (x in x)");
  ASSERT_TRUE(std::holds_alternative<strat::Unstratified>(r));
  const auto& u = std::get<strat::Unstratified>(r);
  EXPECT_EQ(std::abs(u.offset_sum()), 1);
  EXPECT_TRUE(strat::valid_conflict(strat::level_constraints(parse("not (x in x)")), u));
}

TEST(Stratify, SimpleChainIsStratified) {
  auto r = run("exists y: (x in y & y in z0)");
  ASSERT_TRUE(strat::is_stratified(r));
  const auto& levels = std::get<strat::Stratified>(r).levels;
  EXPECT_EQ(levels.at("y") - levels.at("x"), 1);
}

TEST(Stratify, EqualityKeepsLevels) {
  EXPECT_TRUE(strat::is_stratified(run("forall y: (y = x)")));
  EXPECT_FALSE(strat::is_stratified(run("forall y: (y in x -> y = x)")));
}

TEST(Stratify, AbstractionSitsAboveItsVariable) {
  EXPECT_TRUE(strat::is_stratified(run("x in {y : y = x}")));
  EXPECT_FALSE(strat::is_stratified(run("x = {y : y = x}")));
}

TEST(Stratify, BoundVariablesAreRenamedApart) {
  // Each y is a different variable, so x in y and y in x do not interact.
  EXPECT_TRUE(strat::is_stratified(run("(exists y: (x in y)) & (exists y: (y in x))")));
  EXPECT_FALSE(strat::is_stratified(run("exists y: (x in y & y in x)")));
}

TEST(Stratify, NcnFormulasAreUnstratified) {
  EXPECT_FALSE(strat::is_stratified(run("not exists a: (x in a & a in x)")));
  EXPECT_FALSE(strat::is_stratified(run("not exists a: exists b: (x in a & a in b & b in x)")));
}

TEST(Stratify, ConstantsOnly) {
  EXPECT_TRUE(strat::is_stratified(run("Verum & x = x")));
}

TEST(Stratify, AssignmentsSatisfyEveryConstraint) {
  oracle::FormulaGen gen(7);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.nearly_closed(1 + gen.pick(4));
    auto sys = strat::level_constraints(f);
    auto r = strat::stratify(f);
    if (auto* s = std::get_if<strat::Stratified>(&r)) {
      ASSERT_TRUE(strat::satisfies(sys, s->levels)) << print(f);
      int lowest = 1 << 30;
      for (const auto& [v, l] : s->levels) lowest = std::min(lowest, l);
      ASSERT_EQ(lowest, 0) << print(f);
    } else {
      ASSERT_TRUE(strat::valid_conflict(sys, std::get<strat::Unstratified>(r))) << print(f);
    }
  }
}

// The verdict must agree with exhaustive level search on small systems.
TEST(Stratify, MatchesBruteForceLevelSearch) {
  oracle::GenOptions options;
  options.set_abs_rate = 0.1;
  oracle::FormulaGen gen(99, options);
  int compared = 0;
  for (int i = 0; i < 2000; ++i) {
    Formula f = gen.nearly_closed(1 + gen.pick(4));
    auto sys = oracle::LevelExtractor().run(f);
    if (sys.nodes > 5) continue;
    ++compared;
    ASSERT_EQ(strat::is_stratified(strat::stratify(f)), oracle::brute_force_stratifiable(sys)) << print(f);
  }
  EXPECT_GT(compared, 500);
}
