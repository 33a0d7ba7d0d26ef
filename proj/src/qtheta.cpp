#include "ellstab/qtheta.hpp"

#include <algorithm>
#include <cmath>

#include "ellstab/io.hpp"

namespace ellstab {

// -------------------------------------------------------------------- QSeries

QSeries::QSeries(Terms terms, std::optional<Rational> order) : order_(std::move(order)) {
  for (auto& [e, c] : terms) add(e, c);
}

QSeries QSeries::monomial(const Character& coefficient, const Rational& qExponent) {
  return QSeries(Terms{{qExponent, coefficient}}, std::nullopt);
}

void QSeries::add(const Rational& e, const Character& c) {
  if (order_ && e >= *order_) return;
  if (c.isZero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.isZero()) terms_.erase(it);
  }
}

std::optional<Rational> QSeries::valuation() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first;
}

Character QSeries::coefficient(const Rational& qExponent) const {
  auto it = terms_.find(qExponent);
  return it == terms_.end() ? Character{} : it->second;
}

QSeries QSeries::truncated(const Rational& order) const {
  const Rational effective = order_ ? std::min(*order_, order) : order;
  QSeries out(Terms{}, effective);
  for (const auto& [e, c] : terms_) out.add(e, c);
  return out;
}

QSeries QSeries::times(const Monomial& m, const Rational& qExponent, std::int64_t coefficient) const {
  QSeries out;
  if (order_) out.order_ = *order_ + qExponent;
  if (coefficient == 0) return out;
  for (const auto& [e, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), e + qExponent, c.times(m).scaled(coefficient));
  return out;
}

QSeries operator+(const QSeries& x, const QSeries& y) {
  std::optional<Rational> order;
  if (x.order_ && y.order_) {
    order = std::min(*x.order_, *y.order_);
  } else if (x.order_) {
    order = x.order_;
  } else {
    order = y.order_;
  }
  QSeries out(QSeries::Terms{}, order);
  for (const auto& [e, c] : x.terms_) out.add(e, c);
  for (const auto& [e, c] : y.terms_) out.add(e, c);
  return out;
}

QSeries operator-(const QSeries& x, const QSeries& y) { return x + (-y); }

QSeries operator*(const QSeries& x, const QSeries& y) {
  // An unknown tail of one factor pollutes the product from (its order +
  // the other's lowest known exponent) on.
  auto lowest = [](const QSeries& s) -> std::optional<Rational> {
    if (!s.terms_.empty()) return s.terms_.begin()->first;
    return s.order_;
  };
  std::optional<Rational> order;
  auto consider = [&order](const std::optional<Rational>& bound) {
    if (bound) order = order ? std::min(*order, *bound) : *bound;
  };
  if (x.order_) {
    if (auto ly = lowest(y)) consider(*x.order_ + *ly);
  }
  if (y.order_) {
    if (auto lx = lowest(x)) consider(*y.order_ + *lx);
  }
  if ((x.isExact() && x.isZero()) || (y.isExact() && y.isZero())) order.reset();

  QSeries out(QSeries::Terms{}, order);
  for (const auto& [ex, cx] : x.terms_)
    for (const auto& [ey, cy] : y.terms_) {
      const Rational e = ex + ey;
      if (order && e >= *order) continue;
      out.add(e, cx * cy);
    }
  return out;
}

bool QSeries::agreesWith(const QSeries& other, const Rational& upTo) const {
  if ((order_ && *order_ < upTo) || (other.order_ && *other.order_ < upTo))
    throw std::invalid_argument("series are not known up to the requested order");
  auto below = [&upTo](const Terms& t) {
    Terms out;
    for (const auto& [e, c] : t)
      if (e < upTo) out.emplace(e, c);
    return out;
  };
  return below(terms_) == below(other.terms_);
}

// ---------------------------------------------------------------- theta series

namespace {

// theta(m q^s) = sign * M * K * q^E * (m^{1/2} q^{s/2} - m^{-1/2} q^{-s/2})
//                * prod_k (1 - c_k q^{e_k}),  all e_k > 0.
struct ThetaFactorization {
  std::int64_t sign = 1;
  Monomial monomial;
  Rational qExponent = 0;
  Character constant{1};
  // Positive-exponent factors (1 - c q^e) with e below the cutoff.
  std::vector<std::pair<Monomial, Rational>> factors;
};

// Factors (1 - m q^{i+s}) and (1 - m^{-1} q^{i-s}), i >= 1, sorted into the
// structure above. Factors with exponent >= cutoff are dropped; factors with
// nonpositive exponent are always kept (there are finitely many).
ThetaFactorization factorize(const ThetaArgument& arg, const Rational& cutoff) {
  ThetaFactorization f;
  const Rational& s = arg.qShift;
  auto place = [&f, &cutoff](const Monomial& c, const Rational& e) {
    if (e > 0) {
      if (e < cutoff) f.factors.emplace_back(c, e);
    } else if (e == 0) {
      Character k(1);
      k.add(c, -1);
      f.constant *= k;
    } else {
      // 1 - c q^e = -c q^e (1 - c^{-1} q^{-e})
      f.sign = -f.sign;
      f.monomial = f.monomial * c;
      f.qExponent += e;
      if (-e < cutoff) f.factors.emplace_back(c.inverse(), -e);
    }
  };
  // i + s < cutoff + |s| + 1 bounds every relevant i, including the ones
  // whose exponent is negative.
  const std::int64_t last = ceilOf(cutoff + (s < 0 ? -s : s)) + 1;
  for (std::int64_t i = 1; i <= last; ++i) {
    place(arg.monomial, Rational(i) + s);
    place(arg.monomial.inverse(), Rational(i) - s);
  }
  return f;
}

Rational absOf(const Rational& r) { return r < 0 ? -r : r; }

void requireIntegral(const ThetaArgument& arg) {
  if (!arg.monomial.hasIntegralExponents())
    throw std::domain_error("theta arguments must have integral exponents");
}

}  // namespace

Rational thetaLowerBound(const ThetaArgument& arg) {
  // Only nonpositive-exponent factors shift the lowest exponent.
  const Rational& s = arg.qShift;
  Rational shift = 0;
  for (std::int64_t i = 1; Rational(i) + s <= 0; ++i) shift += Rational(i) + s;
  for (std::int64_t i = 1; Rational(i) - s <= 0; ++i) shift += Rational(i) - s;
  return shift - absOf(s) / 2;
}

QSeries thetaSeries(const ThetaArgument& arg, const Rational& order) {
  requireIntegral(arg);
  const Rational base = thetaLowerBound(arg);
  // The product part is needed below this relative order.
  const Rational window = order - base;
  if (window <= 0) return QSeries(QSeries::Terms{}, order);

  const ThetaFactorization f = factorize(arg, window);

  QSeries product(QSeries::Terms{{Rational(0), f.constant}}, window);
  for (const auto& [c, e] : f.factors) {
    Character minusC;
    minusC.add(c, -1);
    QSeries factor(QSeries::Terms{{Rational(0), Character(1)}, {e, minusC}}, std::nullopt);
    product = product * factor;
  }

  const Monomial root = arg.monomial.sqrt();
  QSeries binomial(QSeries::Terms{}, std::nullopt);
  binomial = QSeries::monomial(Character::monomial(root), arg.qShift / 2) +
             QSeries::monomial(Character::monomial(root.inverse(), -1), -arg.qShift / 2);

  QSeries out = (binomial * product).times(f.monomial, f.qExponent, f.sign);
  return out.truncated(order);
}

LeadingTerm thetaLeading(const ThetaArgument& arg) {
  requireIntegral(arg);
  if (arg.monomial.isOne() && isIntegral(arg.qShift))
    throw LimitUndefined("theta(q^n) vanishes identically");
  const Rational base = thetaLowerBound(arg);
  for (std::int64_t width = 1; width <= 64; width *= 2) {
    const QSeries s = thetaSeries(arg, base + width);
    if (!s.isZero()) {
      const auto& [e, c] = *s.terms().begin();
      return {e, c};
    }
  }
  throw LimitUndefined("no leading term found for a theta factor");
}

// -------------------------------------------------------------- verification

namespace {

const Monomial& symbolX() {
  static const Monomial x = Monomial::variable(0);
  return x;
}

}  // namespace

bool verifyOddness(const Rational& order) {
  const QSeries direct = thetaSeries({symbolX().inverse(), 0}, order);
  const QSeries flipped = -thetaSeries({symbolX(), 0}, order);
  return direct.agreesWith(flipped, order);
}

bool verifyQuasiperiod(const Rational& order, int iterations) {
  if (iterations < 1) throw std::invalid_argument("iterations must be positive");
  // Each application multiplies by -(x q^k)^{-1} q^{-1/2}, which lowers the
  // exponents by at most k + 1/2; start high enough to stay valid.
  Rational start = order;
  for (int k = 0; k < iterations; ++k) start += Rational(k) + Rational(1, 2);
  QSeries iterated = thetaSeries({symbolX(), 0}, start);
  for (int k = 0; k < iterations; ++k)
    iterated = iterated.times(symbolX().inverse(), -Rational(k) - Rational(1, 2), -1);
  const QSeries direct = thetaSeries({symbolX(), Rational(iterations)}, order);
  return direct.agreesWith(iterated.truncated(order), order);
}

// ------------------------------------------------------------------- limits

namespace {

// Splits a leading coefficient into monomial * value following
// c_b * M_b * (1 - m), where m is the theta argument's monomial.
void absorbLeading(const Character& leading, const Monomial& m, bool upstairs,
                   Monomial& prefactor, RationalExpr& value) {
  auto put = [&](const Monomial& mono, const RationalExpr& v) {
    if (upstairs) {
      prefactor = prefactor * mono;
      value = value * v;
    } else {
      prefactor = prefactor / mono;
      value = value / v;
    }
  };
  const auto& terms = leading.terms();
  if (terms.size() == 1) {
    const auto& [mono, c] = *terms.begin();
    put(mono, RationalExpr::constant(c));
    return;
  }
  if (terms.size() == 2) {
    auto first = terms.begin();
    auto second = std::next(first);
    for (int pass = 0; pass < 2; ++pass) {
      const auto& [bm, bc] = *first;
      const auto& [om, oc] = *second;
      if (om == bm * m && oc == -bc) {
        Character binomial(1);
        binomial.add(m, -1);
        put(bm, RationalExpr(binomial.scaled(bc)));
        return;
      }
      std::swap(first, second);
    }
  }
  put(Monomial{}, RationalExpr(leading));
}

}  // namespace

LimitResult thetaRatioLimit(const std::vector<ThetaArgument>& numerator,
                            const std::vector<ThetaArgument>& denominator) {
  LimitResult result{Monomial{}, RationalExpr::constant(1)};
  Rational valuation = 0;
  for (const auto& arg : numerator) {
    const LeadingTerm lt = thetaLeading(arg);
    valuation += lt.valuation;
    absorbLeading(lt.coefficient, arg.monomial, true, result.prefactor, result.value);
  }
  for (const auto& arg : denominator) {
    const LeadingTerm lt = thetaLeading(arg);
    valuation -= lt.valuation;
    absorbLeading(lt.coefficient, arg.monomial, false, result.prefactor, result.value);
  }
  if (valuation < 0)
    throw LimitUndefined("theta ratio has a pole of order " + toString(-valuation) + " in q");
  if (valuation > 0) return LimitResult{Monomial{}, RationalExpr{}};
  return result;
}

// ------------------------------------------------------------------ numerics

std::complex<double> numericThetaFromRoot(std::complex<double> root, std::complex<double> q,
                                          double tolerance) {
  if (std::abs(q) >= 1.0) throw NonConvergence("|q| >= 1");
  if (root == 0.0) throw std::invalid_argument("theta argument must be nonzero");
  const std::complex<double> x = root * root;
  const std::complex<double> xinv = 1.0 / x;
  std::complex<double> value = root - 1.0 / root;
  std::complex<double> qi = q;
  for (int i = 1; i < 100000; ++i) {
    const std::complex<double> u = x * qi;
    const std::complex<double> v = xinv * qi;
    value *= (1.0 - u) * (1.0 - v);
    if (std::abs(u) < tolerance && std::abs(v) < tolerance) return value;
    qi *= q;
  }
  throw NonConvergence("theta product did not converge");
}

std::complex<double> numericTheta(std::complex<double> x, std::complex<double> q, double tolerance) {
  return numericThetaFromRoot(std::sqrt(x), q, tolerance);
}

std::string formatQSeries(const QSeries& s, const VariableSet& vars) {
  std::string out;
  for (const auto& [e, c] : s.terms()) {
    if (!out.empty()) out += " + ";
    out += "q^{" + toString(e) + "}·(" + formatCharacter(c, vars) + ")";
  }
  if (out.empty()) out = "0";
  if (s.order()) out += " + O(q^{" + toString(*s.order()) + "})";
  return out;
}

}  // namespace ellstab
