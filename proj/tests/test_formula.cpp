#include <gtest/gtest.h>

#include "patholab/formula.hpp"
#include "patholab/parser.hpp"
#include "support/fuzz.hpp"

using namespace patholab;
using namespace patholab::build;

TEST(Parse, RussellPredicate) {
  EXPECT_EQ(parse("not (x in x)"), neg(in("x", "x")));
}

TEST(Parse, AbstractionTerm) {
  Formula expected = all("y", in(var("y"), abs("x", Formula::verum())));
  EXPECT_EQ(parse("forall y: (y in {x : Verum})"), expected);
}

TEST(Parse, TruncatedInputReportsColumnAndExpectedTerm) {
  try {
    parse("x in");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 5);
    EXPECT_EQ(e.expected(), std::vector<std::string>{"term"});
  }
}

TEST(Parse, ErrorsCarryLineNumbers) {
  try {
    parse("x in y &\n  & z");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 3);
  }
}

TEST(Parse, MalformedInputNeverCrashes) {
  for (const char* text : {"", "(", ")", "{", "{x", "{x :", "x in {x : }", "forall", "forall x", "forall x:",
                           "not", "x =", "= x", "x in x in x", "f(", "f(x,", "f()", "x in x)", "\xff\xfe",
                           "Verum Verum", "x <-", "x - y", "1 in x"}) {
    EXPECT_THROW(parse(text), ParseError) << text;
  }
}

TEST(Parse, DeepNestingIsAnErrorNotACrash) {
  std::string deep(100000, '(');
  EXPECT_THROW(parse(deep), ParseError);
  std::string nots;
  for (int i = 0; i < 100000; ++i) nots += "not ";
  EXPECT_THROW(parse(nots + "Verum"), ParseError);
}

TEST(Parse, BinaryConnectivesAssociateLeft) {
  EXPECT_EQ(parse("x in y & y in z & z in x"), conj(conj(in("x", "y"), in("y", "z")), in("z", "x")));
  EXPECT_EQ(parse("x in y -> y in z -> z in x"), imp(imp(in("x", "y"), in("y", "z")), in("z", "x")));
}

TEST(Parse, PrecedenceFromIffDownToAnd) {
  EXPECT_EQ(parse("x in x | y in y & z in z"), disj(in("x", "x"), conj(in("y", "y"), in("z", "z"))));
  EXPECT_EQ(parse("x in x <-> y in y -> z in z"), iff(in("x", "x"), imp(in("y", "y"), in("z", "z"))));
  EXPECT_EQ(parse("not x in x & Verum"), conj(neg(in("x", "x")), Formula::verum()));
}

TEST(Parse, QuantifierBodyExtendsRight) {
  EXPECT_EQ(parse("exists y: y in x & x in y"), ex("y", conj(in("y", "x"), in("x", "y"))));
}

TEST(Parse, FunctionApplication) {
  Formula f = parse("not (x in f(x, g(y)))");
  EXPECT_EQ(f, neg(in(var("x"), Term::fn_app("f", {var("x"), Term::fn_app("g", {var("y")})}))));
}

TEST(Parse, ShadowingWarns) {
  ParseResult r = parse_with_warnings("forall y: exists y: (y in x)");
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("y"), std::string::npos);
  EXPECT_TRUE(parse_with_warnings("forall y: (y in x)").warnings.empty());
}

TEST(Print, Examples) {
  EXPECT_EQ(print(neg(in("x", "x"))), "not (x in x)");
  EXPECT_EQ(print(Formula::verum()), "Verum");
  EXPECT_EQ(print(parse("forall y: (y in {x : Verum})")), "forall y: (y in {x : Verum})");
}

TEST(Print, NestedAbstractionsRoundTrip) {
  Formula f = parse("x in {y : y in {z : not (z in y) & z = x}}");
  EXPECT_TRUE(alpha_equivalent(parse(print(f)), f));
}

TEST(FreeVars, CountsOnlyUnboundOccurrences) {
  EXPECT_EQ(free_vars(parse("forall y: (y in x)")), VarSet{"x"});
  EXPECT_EQ(free_vars(parse("y in {y : y in z}")), (VarSet{"y", "z"}));
  EXPECT_TRUE(free_vars(parse("Verum")).empty());
}

TEST(Substitute, AvoidsCapture) {
  Formula f = parse("exists y: (y in x)");
  Formula g = substitute(f, "x", var("y"));
  EXPECT_EQ(free_vars(g), VarSet{"y"});
  EXPECT_TRUE(alpha_equivalent(g, parse("exists z: (z in y)")));
  EXPECT_EQ(substitute(f, "y", var("w")), f);
}

TEST(Substitute, InsideAbstractions) {
  Formula f = parse("x in {y : y in x}");
  EXPECT_TRUE(alpha_equivalent(substitute(f, "x", var("y")), parse("y in {z : z in y}")));
}

TEST(AlphaEquivalence, RenamingAndDistinctions) {
  EXPECT_TRUE(alpha_equivalent(parse("forall y: (y in x)"), parse("forall z: (z in x)")));
  EXPECT_FALSE(alpha_equivalent(parse("forall y: (y in x)"), parse("forall x: (x in x)")));
  EXPECT_FALSE(alpha_equivalent(parse("forall y: (y in x)"), parse("forall y: (y in z)")));
  EXPECT_TRUE(alpha_equivalent(parse("{y : y in y} = x"), parse("{u : u in u} = x")));
}

TEST(NearlyClosed, AcceptsExactlyOneFreeVariable) {
  auto ok = nearly_closed(parse("not (x in x)"));
  ASSERT_TRUE(std::holds_alternative<NearlyClosed>(ok));
  EXPECT_EQ(std::get<NearlyClosed>(ok).var, "x");
  auto two = nearly_closed(parse("x in y"));
  ASSERT_TRUE(std::holds_alternative<Rejection>(two));
  EXPECT_EQ(std::get<Rejection>(two).free, (VarSet{"x", "y"}));
  EXPECT_TRUE(std::holds_alternative<Rejection>(nearly_closed(parse("Verum"))));
}

TEST(NearlyClosed, CanonicalizeRenamesToX) {
  NearlyClosed a = canonicalize(NearlyClosed{parse("exists x: (x in y & y in x)"), "y"});
  EXPECT_EQ(a.var, "x");
  EXPECT_EQ(free_vars(a.formula), VarSet{"x"});
  EXPECT_TRUE(alpha_equivalent(a.formula, parse("exists z: (z in x & x in z)")));
}

TEST(Subformulas, PreOrderIncludingAbstractionBodies) {
  auto subs = subformulas(parse("not (x in {y : y in x})"));
  ASSERT_EQ(subs.size(), 3u);
  EXPECT_EQ(print(subs[0].formula), "not (x in {y : y in x})");
  EXPECT_EQ(print(subs[1].formula), "x in {y : y in x}");
  EXPECT_EQ(print(subs[2].formula), "y in x");
  EXPECT_EQ(subs[2].free, (VarSet{"x", "y"}));
}

TEST(Identifiers, KeywordsAreNotIdentifiers) {
  EXPECT_TRUE(is_identifier("x1_a"));
  EXPECT_FALSE(is_identifier("1x"));
  EXPECT_FALSE(is_identifier("_x"));
  EXPECT_TRUE(is_keyword("forall"));
  EXPECT_FALSE(is_identifier("in"));
}

// Round trip over random ASTs, including free variables, function symbols,
// abstractions, shadowing and identifiers that start like keywords.
TEST(RoundTrip, RandomAsts) {
  oracle::GenOptions options;
  options.names = {"x", "y", "z", "notx", "in1", "Verumx", "a_b"};
  options.allow_free = true;
  options.allow_functions = true;
  options.set_abs_rate = 0.15;
  oracle::FormulaGen gen(20240611, options);
  for (int i = 0; i < 1000; ++i) {
    Formula f = gen.any(1 + gen.pick(6));
    std::string text = print(f);
    Formula back = parse(text);
    ASSERT_TRUE(alpha_equivalent(back, f)) << text;
    ASSERT_EQ(print(back), text);
  }
}
