#include <doctest.h>

#include <cmath>
#include <map>

#include "ellstab/io.hpp"
#include "ellstab/qtheta.hpp"

using namespace ellstab;

namespace {

const VariableSet V = VariableSet::standard(1, 1);  // a, h, z
const Monomial A = Monomial::variable(0);
const Monomial Z = Monomial::variable(2);

Character ch(const char* s) { return parseCharacter(s, V); }

// Brute-force oracle: multiply out (x^{1/2} - x^{-1/2}) prod (1 - x q^i)(1 - q^i/x)
// for x = a^k q^s with exponents tracked as (q-exponent, doubled a-exponent).
using OracleSeries = std::map<std::pair<Rational, int>, std::int64_t>;

OracleSeries oracleTheta(int k, const Rational& s, const Rational& order) {
  struct Factor {
    Rational q;
    int a2;
  };
  const Rational absS = s < 0 ? -s : s;
  // Negative-exponent factors lower the floor; every factor below order + drop matters.
  Rational drop = absS / 2;
  for (int i = 1; i < absS; ++i) drop += absS - i;
  const int n = static_cast<int>(ceilOf(order + drop + absS)) + 1;
  std::vector<Factor> factors;
  for (int i = 1; i <= n; ++i) {
    factors.push_back({Rational(i) + s, 2 * k});
    factors.push_back({Rational(i) - s, -2 * k});
  }

  OracleSeries acc{{{Rational(0), 0}, 1}};
  for (const auto& f : factors) {
    OracleSeries next;
    for (const auto& [key, c] : acc) {
      next[key] += c;
      const std::pair<Rational, int> shifted{key.first + f.q, key.second + f.a2};
      if (shifted.first < order + drop) next[shifted] -= c;
    }
    std::erase_if(next, [](const auto& kv) { return kv.second == 0; });
    acc = std::move(next);
  }
  OracleSeries out;
  for (const auto& [key, c] : acc) {
    out[{key.first + s / 2, key.second + k}] += c;
    out[{key.first - s / 2, key.second - k}] -= c;
  }
  std::erase_if(out, [&order](const auto& kv) { return kv.second == 0 || kv.first.first >= order; });
  return out;
}

OracleSeries flatten(const QSeries& s) {
  OracleSeries out;
  for (const auto& [e, c] : s.terms())
    for (const auto& [m, k] : c.terms()) out[{e, m.twiceExponent(0)}] += k;
  return out;
}

Rational closedValuation(const Rational& s) {
  const Rational n = floorOf(s);
  const Rational f = s - n;
  if (f == 0) return -n * n / 2;
  return -n * f - n * n / 2 - f / 2;
}

}  // namespace

TEST_CASE("theta series at low order") {
  const QSeries t = thetaSeries({A, 0}, 2);
  CHECK(t.coefficient(0) == ch("a^1/2 - a^-1/2"));
  CHECK(t.coefficient(1) == -ch("a^3/2 - a^-3/2") + ch("a^1/2 - a^-1/2"));
  CHECK(t.order() == Rational(2));

  const QSeries u = thetaSeries({A, Rational(1, 2)}, 1);
  CHECK(*u.valuation() == Rational(-1, 4));
  CHECK(u.coefficient(Rational(-1, 4)) == ch("-a^-1/2"));

  CHECK(thetaSeries({Monomial{}, 0}, 5).isZero());
}

TEST_CASE("theta series matches the brute-force product") {
  for (int k : {1, -1, 2}) {
    for (int num = -13; num <= 13; ++num) {
      for (int den : {1, 2, 3, 6}) {
        const Rational s(num, den);
        const Rational order = 3;
        const OracleSeries expected = oracleTheta(k, s, order);
        const QSeries got = thetaSeries({A.pow(k), s}, order);
        CHECK(flatten(got) == expected);
      }
    }
  }
}

TEST_CASE("leading exponents follow the piecewise quadratic") {
  for (int num = -24; num <= 24; ++num)
    for (int den : {1, 2, 3, 4, 5, 6}) {
      const Rational s(num, den);
      const LeadingTerm lt = thetaLeading({A, s});
      CHECK(lt.valuation == closedValuation(s));
      CHECK(thetaLowerBound({A, s}) <= lt.valuation);
      // Quasiperiod recursion between s and s + 1.
      CHECK(thetaLeading({A, s + 1}).valuation == lt.valuation - s - Rational(1, 2));
    }
  CHECK_THROWS_AS(thetaLeading({Monomial{}, 2}), LimitUndefined);
  CHECK(thetaLeading({Monomial{}, Rational(1, 3)}).valuation == closedValuation(Rational(1, 3)));
}

TEST_CASE("oddness and quasiperiodicity") {
  CHECK(verifyOddness(5));
  CHECK(verifyOddness(20));
  CHECK(verifyOddness(Rational(1, 2)));
  CHECK(verifyQuasiperiod(5));
  CHECK(verifyQuasiperiod(12));
  CHECK(verifyQuasiperiod(8, 2));
  CHECK(verifyQuasiperiod(6, 3));
}

TEST_CASE("ratio limits from the examples") {
  const LimitResult half = thetaRatioLimit({{Z * A, Rational(1, 2)}}, {{A, Rational(1, 2)}});
  CHECK(half.prefactor == Monomial::variable(2, Rational(-1, 2)));
  CHECK(half.value == RationalExpr::constant(1));

  const LimitResult zero = thetaRatioLimit({{Z * A, 0}}, {{A, 0}});
  CHECK(zero.prefactor == Monomial::variable(2, Rational(-1, 2)));
  CHECK(zero.value == RationalExpr(ch("1 - a*z"), ch("1 - a")));

  const LimitResult neg = thetaRatioLimit({{Z * A, Rational(-3, 2)}}, {{A, Rational(-3, 2)}});
  CHECK(neg.full() == RationalExpr::monomial(Monomial::variable(2, Rational(3, 2))));

  const LimitResult empty = thetaRatioLimit({}, {});
  CHECK(empty.full() == RationalExpr::constant(1));
}

TEST_CASE("ratio limit closed form on the w grid") {
  int checked = 0;
  for (int r = 1; r <= 6; ++r)
    for (int p = -3 * r; p <= 3 * r; ++p) {
      const Rational w(p, r);
      const LimitResult lim = thetaRatioLimit({{Z * A, w}}, {{A, w}});
      RationalExpr expected;
      if (isIntegral(w)) {
        expected = RationalExpr::monomial(Monomial::variable(2, -w - Rational(1, 2))) *
                   RationalExpr(ch("1 - a*z"), ch("1 - a"));
      } else {
        expected = RationalExpr::monomial(Monomial::variable(2, -Rational(floorOf(w)) - Rational(1, 2)));
      }
      CHECK(lim.full() == expected);
      ++checked;
    }
  CHECK(checked > 100);
}

TEST_CASE("ratio limit poles and zeros") {
  CHECK_THROWS_AS(thetaRatioLimit({{A, Rational(1, 2)}}, {{A, 0}}), LimitUndefined);
  CHECK(thetaRatioLimit({{A, 0}}, {{A, Rational(1, 2)}}).value.isZero());
}

TEST_CASE("series arithmetic tracks truncation") {
  const QSeries x = thetaSeries({A, 0}, 4);
  const QSeries y = thetaSeries({A.pow(2), 0}, 3);
  const QSeries p = x * y;
  REQUIRE(p.order().has_value());
  CHECK(*p.order() == Rational(3) + *x.valuation());
  const QSeries exact = thetaSeries({A, 0}, 8) * thetaSeries({A.pow(2), 0}, 8);
  CHECK(p.agreesWith(exact.truncated(*p.order()), *p.order()));
  CHECK((x - x).isZero());
  CHECK_THROWS(x.agreesWith(y, 5));
}

TEST_CASE("numeric theta") {
  CHECK(std::abs(numericTheta(2.0, 0.0) - (std::sqrt(2.0) - 1 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(numericTheta(1.0, 0.3)) < 1e-15);
  CHECK_THROWS_AS(numericTheta(2.0, 1.0), NonConvergence);

  // Against the exact series specialized at a = 2.
  const QSeries s = thetaSeries({A, 0}, 6);
  const std::complex<double> root[] = {std::sqrt(2.0), 1.0, 1.0};
  for (double q : {1e-4, 1e-2, 0.1}) {
    std::complex<double> series = 0;
    for (const auto& [e, c] : s.terms()) series += std::pow(q, boost::rational_cast<double>(e)) * evaluate(c, root);
    const std::complex<double> direct = numericTheta(2.0, q);
    CHECK(std::abs(series - direct) <= 1e-3 * std::abs(direct));
    if (q <= 1e-2) CHECK(std::abs(series - direct) <= 1e-9);
  }
}

TEST_CASE("numeric theta agrees with series on a complex grid") {
  for (double re : {0.5, 1.7, -2.3})
    for (double im : {0.0, 0.8})
      for (double q : {0.01, 0.05}) {
        const std::complex<double> root(re, im);
        const std::complex<double> roots[] = {root};
        const QSeries s = thetaSeries({A, 0}, 12);
        std::complex<double> series = 0;
        for (const auto& [e, c] : s.terms()) series += std::pow(q, boost::rational_cast<double>(e)) * evaluate(c, roots);
        CHECK(std::abs(series - numericThetaFromRoot(root, q)) < 1e-12 * std::max(1.0, std::abs(series)));
      }
}
