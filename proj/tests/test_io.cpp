#include <doctest.h>

#include <random>

#include "ellstab/io.hpp"

using namespace ellstab;
using nlohmann::json;

namespace {
const VariableSet V = VariableSet::standard(1, 1);
}

TEST_CASE("canonical text form") {
  CHECK(formatCharacter(parseCharacter("a^2 + 2*a - a^-1", V), V) == "-a^-1 + 2*a + a^2");
  CHECK(formatCharacter(Character{}, V) == "0");
  CHECK(formatCharacter(parseCharacter("h^1/2*z^-3/2 - 4", V), V) == "-4 + h^1/2*z^-3/2");
  CHECK(formatMonomial(Monomial{}, V) == "1");
  CHECK(parseCharacter("a^(1/2)*a^(1/2)", V) == parseCharacter("a", V));
  CHECK(parseCharacter("3*a*2", V) == parseCharacter("6*a", V));
}

TEST_CASE("text round trip on random characters") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> twice(-5, 5), mult(-3, 3), count(0, 7);
  for (int trial = 0; trial < 200; ++trial) {
    Character v;
    for (int k = count(rng); k > 0; --k) v.add(Monomial::fromTwice({twice(rng), twice(rng), twice(rng)}), mult(rng));
    const std::string s = formatCharacter(v, V);
    CHECK(parseCharacter(s, V) == v);
    CHECK(formatCharacter(parseCharacter(s, V), V) == s);
    const json j = toJson(v, V);
    CHECK(characterFromJson(j, V) == v);
    CHECK(toJson(characterFromJson(j, V), V).dump() == j.dump());
  }
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parseCharacter("b + a", V), ParseError);
  CHECK_THROWS_AS(parseCharacter("a +", V), ParseError);
  CHECK_THROWS_AS(parseCharacter("a^x", V), ParseError);
  CHECK_THROWS_AS(parseCharacter("a^1/3", V), ParseError);
  CHECK_THROWS_AS(parseMonomial("2*a", V), ParseError);
}

TEST_CASE("json forms") {
  const Monomial m = parseMonomial("a^-1/2*z^3", V);
  const json j = toJson(m, V);
  CHECK(j.at("a") == "-1/2");
  CHECK(j.at("z") == "3");
  CHECK(monomialFromJson(j, V) == m);
  CHECK(monomialFromJson(json{{"a", 2}}, V) == parseMonomial("a^2", V));

  CHECK(characterFromJson(json("a + h"), V) == parseCharacter("a + h", V));
  CHECK(characterFromJson(json(3), V) == Character(3));

  const RationalExpr r(parseCharacter("1 - a*z", V), parseCharacter("1 - a", V));
  CHECK(rationalExprFromJson(toJson(r, V), V) == r);
  CHECK(formatRationalExpr(r, V) == "(1 - a*z)/(1 - a)");

  CHECK(variableSetFromJson(toJson(V)) == V);
  CHECK(rationalFromJson(json("-3/6")) == Rational(-1, 2));
  CHECK(rationalFromJson(json(4)) == Rational(4));
  CHECK_THROWS(rationalFromJson(json("x")));
}
