#include "ellstab/charalg.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace ellstab {

// ---------------------------------------------------------------- VariableSet

VariableSet::VariableSet(std::vector<std::string> equivariant, std::string hbar,
                         std::vector<std::string> kahler)
    : equivariant_(equivariant.size()) {
  names_ = std::move(equivariant);
  names_.push_back(std::move(hbar));
  for (auto& z : kahler) names_.push_back(std::move(z));
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw std::invalid_argument("empty variable name");
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate variable name '" + n + "'");
  }
}

VariableSet VariableSet::standard(std::size_t equivariantCount, std::size_t kahlerCount) {
  auto numbered = [](const std::string& stem, std::size_t count) {
    std::vector<std::string> out;
    if (count == 1) {
      out.push_back(stem);
    } else {
      for (std::size_t i = 1; i <= count; ++i) out.push_back(stem + std::to_string(i));
    }
    return out;
  };
  return VariableSet(numbered("a", equivariantCount), "h", numbered("z", kahlerCount));
}

std::optional<std::size_t> VariableSet::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t VariableSet::indexOf(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
}

std::vector<std::string> VariableSet::equivariantNames() const {
  return {names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(equivariant_)};
}

std::vector<std::string> VariableSet::kahlerNames() const {
  return {names_.begin() + static_cast<std::ptrdiff_t>(equivariant_ + 1), names_.end()};
}

// ------------------------------------------------------------------- Monomial

Monomial Monomial::variable(std::size_t index, const Rational& exponent) {
  Monomial m;
  m.setExponent(index, exponent);
  return m;
}

Monomial Monomial::fromTwice(std::vector<std::int32_t> twiceExponents) {
  Monomial m;
  m.twice_ = std::move(twiceExponents);
  m.trim();
  return m;
}

void Monomial::setExponent(std::size_t i, const Rational& e) {
  const Rational doubled = e * 2;
  if (!isIntegral(doubled))
    throw std::domain_error("exponent " + toString(e) + " is not a half-integer");
  if (i >= twice_.size()) twice_.resize(i + 1, 0);
  twice_[i] = static_cast<std::int32_t>(doubled.numerator());
  trim();
}

bool Monomial::hasIntegralExponents() const {
  return std::all_of(twice_.begin(), twice_.end(), [](std::int32_t t) { return t % 2 == 0; });
}

Monomial Monomial::inverse() const {
  Monomial m = *this;
  for (auto& t : m.twice_) t = -t;
  return m;
}

Monomial Monomial::pow(std::int64_t k) const {
  Monomial m = *this;
  for (auto& t : m.twice_) t = static_cast<std::int32_t>(t * k);
  m.trim();
  return m;
}

Monomial Monomial::sqrt() const {
  if (!hasIntegralExponents())
    throw std::domain_error("square root of a monomial with half-integer exponents");
  Monomial m = *this;
  for (auto& t : m.twice_) t /= 2;
  m.trim();
  return m;
}

Monomial Monomial::restricted(std::size_t first, std::size_t last) const {
  Monomial m;
  last = std::min(last, twice_.size());
  if (first >= last) return m;
  m.twice_.assign(last, 0);
  std::copy(twice_.begin() + static_cast<std::ptrdiff_t>(first),
            twice_.begin() + static_cast<std::ptrdiff_t>(last),
            m.twice_.begin() + static_cast<std::ptrdiff_t>(first));
  m.trim();
  return m;
}

Monomial Monomial::without(std::size_t i) const {
  Monomial m = *this;
  if (i < m.twice_.size()) {
    m.twice_[i] = 0;
    m.trim();
  }
  return m;
}

Rational Monomial::pairing(std::span<const Rational> w) const {
  Rational acc = 0;
  const auto n = std::min(w.size(), twice_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (twice_[i] != 0) acc += Rational(twice_[i], 2) * w[i];
  return acc;
}

Monomial operator*(const Monomial& x, const Monomial& y) {
  Monomial m;
  m.twice_.assign(std::max(x.twice_.size(), y.twice_.size()), 0);
  for (std::size_t i = 0; i < x.twice_.size(); ++i) m.twice_[i] += x.twice_[i];
  for (std::size_t i = 0; i < y.twice_.size(); ++i) m.twice_[i] += y.twice_[i];
  m.trim();
  return m;
}

std::strong_ordering operator<=>(const Monomial& x, const Monomial& y) {
  const auto n = std::max(x.twice_.size(), y.twice_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = x.twiceExponent(i);
    const auto b = y.twiceExponent(i);
    if (a != b) return a <=> b;
  }
  return std::strong_ordering::equal;
}

void Monomial::trim() {
  while (!twice_.empty() && twice_.back() == 0) twice_.pop_back();
}

// ------------------------------------------------------------------ Character

Character::Character(std::int64_t constant) {
  if (constant != 0) terms_.emplace(Monomial{}, constant);
}

Character Character::monomial(const Monomial& m, std::int64_t multiplicity) {
  Character c;
  c.add(m, multiplicity);
  return c;
}

std::int64_t Character::multiplicity(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0 : it->second;
}

void Character::add(const Monomial& m, std::int64_t multiplicity) {
  if (multiplicity == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, multiplicity);
  if (!inserted) {
    it->second += multiplicity;
    if (it->second == 0) terms_.erase(it);
  }
}

Character Character::times(const Monomial& m) const {
  Character out;
  for (const auto& [mono, mult] : terms_) out.terms_.emplace_hint(out.terms_.end(), mono * m, mult);
  return out;
}

Character Character::scaled(std::int64_t factor) const {
  if (factor == 0) return {};
  Character out = *this;
  for (auto& [mono, mult] : out.terms_) mult *= factor;
  return out;
}

Character& Character::operator+=(const Character& other) {
  for (const auto& [m, c] : other.terms_) add(m, c);
  return *this;
}

Character& Character::operator-=(const Character& other) {
  for (const auto& [m, c] : other.terms_) add(m, -c);
  return *this;
}

Character& Character::operator*=(const Character& other) {
  *this = *this * other;
  return *this;
}

Character operator*(const Character& x, const Character& y) {
  Character out;
  for (const auto& [mx, cx] : x.terms_)
    for (const auto& [my, cy] : y.terms_) out.add(mx * my, cx * cy);
  return out;
}

// ------------------------------------------------------------------ functionals

Chamber::Chamber(std::vector<Rational> d) : direction(std::move(d)) {
  if (std::all_of(direction.begin(), direction.end(), [](const Rational& r) { return r == 0; }))
    throw std::invalid_argument("chamber direction must be nonzero");
}

Character conjugate(const Character& v) {
  Character out;
  for (const auto& [m, c] : v.terms()) out.add(m.inverse(), c);
  return out;
}

std::int64_t rank(const Character& v) {
  std::int64_t r = 0;
  for (const auto& [m, c] : v.terms()) r += c;
  return r;
}

Monomial determinant(const Character& v) {
  Monomial out;
  for (const auto& [m, c] : v.terms()) out = out * m.pow(c);
  return out;
}

ChamberParts chamberSplit(const Character& v, const Chamber& chamber) {
  ChamberParts parts;
  for (const auto& [m, c] : v.terms()) {
    const Rational s = chamber.pair(m);
    if (s > 0) {
      parts.positive.add(m, c);
    } else if (s < 0) {
      parts.negative.add(m, c);
    } else {
      parts.zero.add(m, c);
    }
  }
  return parts;
}

Rational floorPairing(const Character& v, std::span<const Rational> w) {
  std::int64_t acc = 0;
  for (const auto& [m, c] : v.terms()) acc += c * floorOf(m.pairing(w));
  return Rational(acc);
}

Character invariantPart(const Character& v, std::span<const Rational> w) {
  Character out;
  for (const auto& [m, c] : v.terms())
    if (isIntegral(m.pairing(w))) out.add(m, c);
  return out;
}

namespace {

// Raises a binomial factor to a signed power, placing it upstairs or downstairs.
RationalExpr productOfFactors(const Character& v, const auto& factorOf) {
  Character num(1);
  Character den(1);
  for (const auto& [m, c] : v.terms()) {
    const Character f = factorOf(m);
    if (c > 0) {
      for (std::int64_t k = 0; k < c; ++k) num *= f;
    } else {
      if (f.isZero()) throw DivisionByZero("vanishing factor in a denominator");
      for (std::int64_t k = 0; k < -c; ++k) den *= f;
    }
  }
  return RationalExpr(std::move(num), std::move(den));
}

}  // namespace

RationalExpr sHat(const Character& v) {
  return productOfFactors(v, [](const Monomial& m) {
    const Monomial root = m.sqrt();
    Character f = Character::monomial(root);
    f.add(root.inverse(), -1);
    return f;
  });
}

RationalExpr exteriorEuler(const Character& v) {
  return productOfFactors(v, [](const Monomial& m) {
    Character f(1);
    f.add(m, -1);
    return f;
  });
}

// -------------------------------------------------------------- exact division

std::optional<Character> divideExact(const Character& num, const Character& den) {
  if (den.isZero()) throw DivisionByZero("division by the zero character");
  if (num.isZero()) return Character{};

  std::size_t extent = 0;
  for (const auto* c : {&num, &den})
    for (const auto& [m, k] : c->terms()) extent = std::max(extent, m.extent());

  auto bounds = [extent](const Character& c) {
    std::vector<std::int32_t> lo(extent, std::numeric_limits<std::int32_t>::max());
    std::vector<std::int32_t> hi(extent, std::numeric_limits<std::int32_t>::min());
    for (const auto& [m, k] : c.terms())
      for (std::size_t i = 0; i < extent; ++i) {
        lo[i] = std::min(lo[i], m.twiceExponent(i));
        hi[i] = std::max(hi[i], m.twiceExponent(i));
      }
    return std::pair{lo, hi};
  };
  const auto [numLo, numHi] = bounds(num);
  const auto [denLo, denHi] = bounds(den);

  const auto& [leadMono, leadCoef] = *den.terms().rbegin();
  Character remainder = num;
  Character quotient;
  while (!remainder.isZero()) {
    const auto& [rm, rc] = *remainder.terms().rbegin();
    if (rc % leadCoef != 0) return std::nullopt;
    const Monomial q = rm / leadMono;
    for (std::size_t i = 0; i < extent; ++i) {
      const auto e = q.twiceExponent(i);
      if (e < numLo[i] - denLo[i] || e > numHi[i] - denHi[i]) return std::nullopt;
    }
    if (q.extent() > extent) return std::nullopt;
    const std::int64_t qc = rc / leadCoef;
    quotient.add(q, qc);
    remainder -= den.times(q).scaled(qc);
  }
  return quotient;
}

// ---------------------------------------------------------------- RationalExpr

RationalExpr::RationalExpr(Character numerator, Character denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.isZero()) throw DivisionByZero("rational expression with zero denominator");
}

RationalExpr RationalExpr::monomial(const Monomial& m, std::int64_t coefficient) {
  return RationalExpr(Character::monomial(m, coefficient));
}

namespace {

// Smallest exponent per variable over all terms of both characters.
Monomial commonContent(const Character& a, const Character& b) {
  std::size_t extent = 0;
  for (const auto* c : {&a, &b})
    for (const auto& [m, k] : c->terms()) extent = std::max(extent, m.extent());
  std::vector<std::int32_t> lo(extent, 0);
  bool first = true;
  for (const auto* c : {&a, &b})
    for (const auto& [m, k] : c->terms()) {
      for (std::size_t i = 0; i < extent; ++i)
        lo[i] = first ? m.twiceExponent(i) : std::min(lo[i], m.twiceExponent(i));
      first = false;
    }
  return Monomial::fromTwice(std::move(lo));
}

}  // namespace

RationalExpr RationalExpr::reduced() const {
  if (num_.isZero()) return RationalExpr{};
  const Monomial shift = commonContent(num_, den_).inverse();
  Character n = num_.times(shift);
  Character d = den_.times(shift);
  if (auto q = divideExact(n, d)) return RationalExpr(std::move(*q));
  if (auto q = divideExact(d, n)) return RationalExpr(Character(1), std::move(*q));
  // Normalize the sign so the leading denominator coefficient is positive.
  if (d.terms().rbegin()->second < 0) {
    n = -n;
    d = -d;
  }
  return RationalExpr(std::move(n), std::move(d));
}

std::optional<std::pair<std::int64_t, Monomial>> RationalExpr::asMonomial() const {
  if (num_.isZero()) return std::nullopt;
  auto q = divideExact(num_, den_);
  if (!q || q->termCount() != 1) return std::nullopt;
  const auto& [m, c] = *q->terms().begin();
  return std::pair{c, m};
}

RationalExpr RationalExpr::inverse() const { return RationalExpr(den_, num_); }

RationalExpr operator+(const RationalExpr& x, const RationalExpr& y) {
  if (x.den_ == y.den_) return RationalExpr(x.num_ + y.num_, x.den_);
  return RationalExpr(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
}

RationalExpr operator-(const RationalExpr& x, const RationalExpr& y) { return x + (-y); }

RationalExpr operator*(const RationalExpr& x, const RationalExpr& y) {
  return RationalExpr(x.num_ * y.num_, x.den_ * y.den_);
}

RationalExpr operator/(const RationalExpr& x, const RationalExpr& y) {
  if (y.num_.isZero()) throw DivisionByZero("division by a zero rational expression");
  return RationalExpr(x.num_ * y.den_, x.den_ * y.num_);
}

bool operator==(const RationalExpr& x, const RationalExpr& y) {
  return x.num_ * y.den_ == y.num_ * x.den_;
}

// ------------------------------------------------------------------ evaluation

std::complex<double> evaluate(const Monomial& m, std::span<const std::complex<double>> roots) {
  std::complex<double> value = 1.0;
  for (std::size_t i = 0; i < m.extent(); ++i) {
    const auto t = m.twiceExponent(i);
    if (t == 0) continue;
    if (i >= roots.size()) throw std::invalid_argument("evaluation point is missing a variable");
    value *= std::pow(roots[i], t);
  }
  return value;
}

std::complex<double> evaluate(const Character& v, std::span<const std::complex<double>> roots) {
  std::complex<double> acc = 0.0;
  for (const auto& [m, c] : v.terms()) acc += static_cast<double>(c) * evaluate(m, roots);
  return acc;
}

std::complex<double> evaluate(const RationalExpr& r, std::span<const std::complex<double>> roots) {
  return evaluate(r.numerator(), roots) / evaluate(r.denominator(), roots);
}

}  // namespace ellstab
