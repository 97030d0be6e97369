#include <doctest.h>

#include <random>
#include <string>

#include "numlearn/numeral.h"
#include "oracles.h"

using namespace numlearn;

TEST_SUITE("numeral") {

TEST_CASE("tokenize splits atoms maximally") {
  const Numeral n = Tokenize("8*10+7");
  REQUIRE(n.length() == 5);
  CHECK(n[0] == Symbol::Atom(8));
  CHECK(n[1] == Symbol::Times());
  CHECK(n[2] == Symbol::Atom(10));
  CHECK(n[3] == Symbol::Plus());
  CHECK(n[4] == Symbol::Atom(7));
  CHECK(n.atom_count() == 3);
  CHECK(Tokenize("20").length() == 1);
  CHECK(Tokenize("20")[0].value == 20);
}

TEST_CASE("malformed strings are rejected") {
  for (const char* bad : {"", "+", "1+", "+1", "1++2", "1*+2", "0", "1+0",
                          "1 + 2", "a", "2*", "12345678901"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Tokenize(bad), ParseError);
  }
}

TEST_CASE("numeral constructor enforces alternation") {
  CHECK_THROWS_AS(Numeral({}), ParseError);
  CHECK_THROWS_AS(Numeral({Symbol::Atom(1), Symbol::Plus()}), ParseError);
  CHECK_THROWS_AS(Numeral({Symbol::Atom(1), Symbol::Atom(2), Symbol::Atom(3)}),
                  ParseError);
  CHECK_THROWS(Symbol::Atom(0));
}

TEST_CASE("render inverts tokenize") {
  for (const char* s : {"1", "99", "4*20+10+7", "10-1", "3*20+10", "2*10*5"}) {
    CHECK(Render(Tokenize(s)) == s);
  }
}

TEST_CASE("evaluate: multiplication binds tighter, +/- fold left") {
  CHECK(Evaluate(Tokenize("8*10+7")) == 87);
  CHECK(Evaluate(Tokenize("4*20+10+7")) == 97);
  CHECK(Evaluate(Tokenize("10-1")) == 9);
  CHECK(Evaluate(Tokenize("20-3-2")) == 15);
  CHECK(Evaluate(Tokenize("2+3*4")) == 14);
  CHECK(Evaluate(Tokenize("2*3*4-1")) == 23);
  CHECK(Evaluate(Tokenize("1-5")) == -4);
}

TEST_CASE("evaluate reports overflow") {
  CHECK_THROWS_AS(
      Evaluate(Tokenize("1000000000*1000000000*1000000000")),
      std::overflow_error);
}

TEST_CASE("evaluate agrees with a recursive-descent reading of the text") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> atom(1, 999);
  std::uniform_int_distribution<int> terms(1, 5);
  std::uniform_int_distribution<int> op(0, 2);
  for (int trial = 0; trial < 10000; ++trial) {
    std::string text = std::to_string(atom(rng));
    const int k = terms(rng);
    for (int i = 1; i < k; ++i) {
      text += "+-*"[op(rng)];
      text += std::to_string(atom(rng));
    }
    CAPTURE(text);
    REQUIRE(Evaluate(Tokenize(text)) == oracle::TextEvaluator(text).Run());
  }
}

TEST_CASE("symbols order atoms before combinators") {
  CHECK(Symbol::Atom(99) < Symbol::Plus());
  CHECK(Symbol::Plus() < Symbol::Minus());
  CHECK(Symbol::Minus() < Symbol::Times());
  CHECK(Symbol::Atom(2) < Symbol::Atom(10));
}

}
