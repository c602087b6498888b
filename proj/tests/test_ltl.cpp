#include <doctest.h>

#include <random>

#include "support.hpp"
#include "taxgames/buchi.hpp"

using namespace taxgames;
using testsupport::oracle::holds;

namespace {

const Vocabulary kPQ({"p", "q"});

ltl::Formula parse(const char* text) { return ltl::parse(text, kPQ); }

ltl::LassoWord word(std::vector<LabelSet> prefix, std::vector<LabelSet> cycle) {
  return {std::move(prefix), std::move(cycle)};
}

constexpr LabelSet P = 1, Q = 2;

ltl::Formula random_formula(std::mt19937_64& rng, int depth) {
  const int pick = testsupport::uniform(rng, 0, depth <= 0 ? 2 : 6);
  switch (pick) {
    case 0: return ltl::Formula::top();
    case 1: return ltl::Formula::var(0, "p");
    case 2: return ltl::Formula::var(1, "q");
    case 3: return ltl::Formula::negate(random_formula(rng, depth - 1));
    case 4: return ltl::Formula::disjoin(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 5: return ltl::Formula::next(random_formula(rng, depth - 1));
    default: return ltl::Formula::until(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  }
}

ltl::LassoWord random_word(std::mt19937_64& rng, int max_prefix, int max_cycle) {
  ltl::LassoWord w;
  const int p = testsupport::uniform(rng, 0, max_prefix);
  const int c = testsupport::uniform(rng, 1, max_cycle);
  for (int k = 0; k < p; ++k) w.prefix.push_back(static_cast<LabelSet>(testsupport::uniform(rng, 0, 3)));
  for (int k = 0; k < c; ++k) w.cycle.push_back(static_cast<LabelSet>(testsupport::uniform(rng, 0, 3)));
  return w;
}

}  // namespace

TEST_CASE("vocabulary formats set bits in order") {
  CHECK(kPQ.index_of("q") == 1);
  CHECK_FALSE(kPQ.index_of("r").has_value());
  CHECK(kPQ.format(P | Q) == "p q");
  CHECK(kPQ.format(0) == "");
  CHECK(kPQ.all() == 3);
}

TEST_CASE("derived operators desugar to the core") {
  CHECK(parse("G F p").to_string() == "!(true U !(true U p))");
  CHECK(parse("F p").to_string() == "(true U p)");
  CHECK(parse("false").to_string() == "!true");
  CHECK(parse("p & q") == ltl::conjoin(parse("p"), parse("q")));
  CHECK(parse("p -> q") == ltl::implies(parse("p"), parse("q")));
  CHECK(parse("[] <> p") == parse("G F p"));
  CHECK(parse("p && q") == parse("p & q"));
  CHECK(parse("p || q") == parse("p | q"));
}

TEST_CASE("precedence and associativity") {
  // U is right associative and binds tighter than &.
  CHECK(parse("p U q U p") == parse("p U (q U p)"));
  CHECK(parse("p & q U p") == parse("p & (q U p)"));
  // -> is right associative and looser than |.
  CHECK(parse("p -> q -> p") == parse("p -> (q -> p)"));
  CHECK(parse("p | q -> p") == parse("(p | q) -> p"));
  CHECK(parse("p <-> q -> p") == parse("p <-> (q -> p)"));
  CHECK(parse("!p U q") == parse("(!p) U q"));
  CHECK(parse("X p | q") == parse("(X p) | q"));
}

TEST_CASE("rendering re-parses to the same formula") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 300; ++k) {
    const auto f = random_formula(rng, 4);
    CHECK(ltl::parse(f.to_string(), kPQ) == f);
  }
}

TEST_CASE("parse errors report columns") {
  CHECK_THROWS_AS(parse("p &"), ltl::ParseError);
  CHECK_THROWS_AS(parse("(p"), ltl::ParseError);
  CHECK_THROWS_AS(parse("p q"), ltl::ParseError);
  try {
    parse("p | r");
    FAIL("expected an unknown variable");
  } catch (const ltl::UnknownVariable& e) {
    CHECK(e.variable() == "r");
    CHECK(e.column() == 5);
  }
}

TEST_CASE("size and variables") {
  CHECK(parse("p").size() == 1);
  CHECK(parse("G F p").size() == 7);
  CHECK(ltl::variables(parse("G (q -> F q)")) == std::vector<int>{1});
  CHECK(ltl::variables(parse("p U q")) == std::vector<int>{0, 1});
}

TEST_CASE("evaluation on hand-made lassos") {
  const auto gfp = parse("G F p");
  CHECK(ltl::eval_on_lasso(gfp, word({}, {0, P})));
  CHECK_FALSE(ltl::eval_on_lasso(gfp, word({P, P}, {0})));
  CHECK(ltl::eval_on_lasso(parse("F G q"), word({0, P}, {Q})));
  CHECK_FALSE(ltl::eval_on_lasso(parse("F G q"), word({Q}, {Q, 0})));
  CHECK(ltl::eval_on_lasso(parse("p U q"), word({P, P}, {Q})));
  CHECK_FALSE(ltl::eval_on_lasso(parse("p U q"), word({P, 0}, {Q})));
  CHECK(ltl::eval_on_lasso(parse("X X q"), word({0}, {0, Q})));
  CHECK(ltl::eval_on_lasso(parse("G (p <-> q)"), word({0}, {0, P | Q})));
  CHECK_FALSE(ltl::eval_on_lasso(parse("G (p <-> q)"), word({0, P}, {0, P | Q})));
}

TEST_CASE("eval_positions is periodic on the cycle") {
  const auto w = word({P}, {0, Q, P});
  const auto v = ltl::eval_positions(parse("F p"), w);
  REQUIRE(v.size() == w.length());
  for (bool b : v) CHECK(b);
  const auto x = ltl::eval_positions(parse("X q"), w);
  CHECK(x == std::vector<bool>{false, true, false, false});
}

TEST_CASE("evaluation agrees with the direct oracle") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 2000; ++k) {
    const auto f = random_formula(rng, 4);
    const auto w = random_word(rng, 3, 4);
    INFO(f.to_string());
    CHECK(ltl::eval_on_lasso(f, w) == holds(f, w));
    const auto all = ltl::eval_positions(f, w);
    for (std::size_t j = 0; j < w.length(); ++j) CHECK(all[j] == holds(f, w, j));
  }
}

TEST_CASE("Buchi automata are complete and agree with evaluation") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 300; ++k) {
    const auto f = random_formula(rng, 3);
    const auto a = to_buchi(f, BuchiOptions{1 << 16, 2});
    CHECK(a.is_complete());
    for (int r = 0; r < 5; ++r) {
      const auto w = random_word(rng, 3, 3);
      INFO(f.to_string());
      CHECK(buchi_accepts_lasso(a, w) == holds(f, w));
    }
  }
}

TEST_CASE("Buchi construction respects its cap and alphabet") {
  CHECK_THROWS_AS(to_buchi(parse("G F p & G F q & F G (p | q)"), BuchiOptions{2, 2}), ResourceLimit);
  const auto a = to_buchi(parse("G F p"), BuchiOptions{1 << 10, 2});
  CHECK_THROWS_AS(buchi_accepts_lasso(a, word({}, {4})), std::invalid_argument);
}
