#pragma once

// Exact algebra of equivariant characters: Laurent polynomials with integer
// multiplicities and half-integer exponents, plus the Euler-class-type
// functionals (s-hat, exterior algebra) built from them.

#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ellstab/rational.hpp"

namespace ellstab {

/// Raised when a negative-multiplicity factor evaluates to zero (s-hat of the
/// trivial monomial in a denominator).
class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Ordered variable names. Layout is fixed: equivariant a_1..a_k occupy
/// indices 0..k-1, hbar sits at index k, Kahler z_1..z_m follow.
class VariableSet {
 public:
  VariableSet(std::vector<std::string> equivariant, std::string hbar,
              std::vector<std::string> kahler);

  /// a (or a1..ak), h, z (or z1..zm).
  static VariableSet standard(std::size_t equivariantCount, std::size_t kahlerCount);

  std::size_t size() const { return names_.size(); }
  std::size_t equivariantCount() const { return equivariant_; }
  std::size_t kahlerCount() const { return names_.size() - equivariant_ - 1; }
  std::size_t hbarIndex() const { return equivariant_; }
  std::size_t kahlerIndex(std::size_t k) const { return equivariant_ + 1 + k; }
  bool isEquivariant(std::size_t i) const { return i < equivariant_; }
  bool isKahler(std::size_t i) const { return i > equivariant_ && i < names_.size(); }

  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t indexOf(std::string_view name) const;

  std::vector<std::string> equivariantNames() const;
  std::vector<std::string> kahlerNames() const;
  const std::string& hbarName() const { return names_[equivariant_]; }

  bool operator==(const VariableSet&) const = default;

 private:
  std::vector<std::string> names_;
  std::size_t equivariant_ = 0;
};

/// Monomial with half-integer exponents, stored doubled. Missing trailing
/// variables have exponent zero, so monomials over different-length prefixes
/// of the same VariableSet compare correctly.
class Monomial {
 public:
  Monomial() = default;

  static Monomial variable(std::size_t index, const Rational& exponent = 1);
  static Monomial fromTwice(std::vector<std::int32_t> twiceExponents);

  Rational exponent(std::size_t i) const { return Rational(twiceExponent(i), 2); }
  std::int32_t twiceExponent(std::size_t i) const {
    return i < twice_.size() ? twice_[i] : 0;
  }
  void setExponent(std::size_t i, const Rational& e);

  /// Storage length; every variable at or beyond it has exponent zero.
  std::size_t extent() const { return twice_.size(); }
  bool isOne() const { return twice_.empty(); }
  bool hasIntegralExponents() const;

  Monomial inverse() const;
  Monomial pow(std::int64_t k) const;
  /// Exponents halved. Throws std::domain_error when some exponent is not integral.
  Monomial sqrt() const;
  /// Monomial with exponents in [first, last) kept and everything else dropped.
  Monomial restricted(std::size_t first, std::size_t last) const;
  /// Drops variable i.
  Monomial without(std::size_t i) const;

  /// <exponent, w> over the first w.size() variables.
  Rational pairing(std::span<const Rational> w) const;

  friend Monomial operator*(const Monomial& x, const Monomial& y);
  friend Monomial operator/(const Monomial& x, const Monomial& y) { return x * y.inverse(); }

  friend bool operator==(const Monomial& x, const Monomial& y) { return x.twice_ == y.twice_; }
  friend std::strong_ordering operator<=>(const Monomial& x, const Monomial& y);

 private:
  void trim();
  std::vector<std::int32_t> twice_;
};

/// Finite sum of monomials with nonzero integer multiplicities.
class Character {
 public:
  using Terms = std::map<Monomial, std::int64_t>;

  Character() = default;
  explicit Character(std::int64_t constant);
  static Character monomial(const Monomial& m, std::int64_t multiplicity = 1);

  const Terms& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  std::size_t termCount() const { return terms_.size(); }
  std::int64_t multiplicity(const Monomial& m) const;

  void add(const Monomial& m, std::int64_t multiplicity);
  Character times(const Monomial& m) const;
  Character scaled(std::int64_t factor) const;

  Character& operator+=(const Character& other);
  Character& operator-=(const Character& other);
  Character& operator*=(const Character& other);
  friend Character operator+(Character x, const Character& y) { return x += y; }
  friend Character operator-(Character x, const Character& y) { return x -= y; }
  friend Character operator*(const Character& x, const Character& y);
  friend Character operator-(const Character& x) { return x.scaled(-1); }

  friend bool operator==(const Character&, const Character&) = default;

 private:
  Terms terms_;
};

/// A chamber direction, one rational per equivariant variable.
struct Chamber {
  std::vector<Rational> direction;

  explicit Chamber(std::vector<Rational> d);
  /// Signed pairing <equivariant exponent, direction>.
  Rational pair(const Monomial& m) const { return m.pairing(direction); }
};

struct ChamberParts {
  Character positive;
  Character zero;
  Character negative;
};

Character conjugate(const Character& v);
std::int64_t rank(const Character& v);
Monomial determinant(const Character& v);
ChamberParts chamberSplit(const Character& v, const Chamber& chamber);

/// Sum over terms of multiplicity * floor(<equivariant exponent, w>).
Rational floorPairing(const Character& v, std::span<const Rational> w);

/// Terms whose equivariant exponent pairs integrally with w.
Character invariantPart(const Character& v, std::span<const Rational> w);

class RationalExpr;

/// Product of (m^{1/2} - m^{-1/2})^{multiplicity}.
RationalExpr sHat(const Character& v);
/// Product of (1 - m)^{multiplicity}.
RationalExpr exteriorEuler(const Character& v);

/// Exact quotient num/den when den divides num in the Laurent ring.
std::optional<Character> divideExact(const Character& num, const Character& den);

/// Quotient of two characters viewed as Laurent polynomials. Equality is
/// decided by cross-multiplication; reduction is only on request.
class RationalExpr {
 public:
  RationalExpr() : den_(1) {}
  RationalExpr(Character numerator, Character denominator = Character(1));
  static RationalExpr monomial(const Monomial& m, std::int64_t coefficient = 1);
  static RationalExpr constant(std::int64_t c) { return RationalExpr(Character(c)); }

  const Character& numerator() const { return num_; }
  const Character& denominator() const { return den_; }
  bool isZero() const { return num_.isZero(); }

  /// Strips common monomial content and cancels the denominator when it
  /// divides the numerator (or vice versa). No polynomial gcd.
  RationalExpr reduced() const;

  /// (coefficient, monomial) when the expression equals a single term.
  std::optional<std::pair<std::int64_t, Monomial>> asMonomial() const;

  RationalExpr inverse() const;

  friend RationalExpr operator+(const RationalExpr& x, const RationalExpr& y);
  friend RationalExpr operator-(const RationalExpr& x, const RationalExpr& y);
  friend RationalExpr operator*(const RationalExpr& x, const RationalExpr& y);
  friend RationalExpr operator/(const RationalExpr& x, const RationalExpr& y);
  friend RationalExpr operator-(const RationalExpr& x) {
    return RationalExpr(-x.num_, x.den_);
  }
  friend bool operator==(const RationalExpr& x, const RationalExpr& y);

 private:
  Character num_;
  Character den_;
};

/// Numerical value of a character. roots[i] is a chosen square root of the
/// value of variable i, so half-integer exponents are branch-consistent.
std::complex<double> evaluate(const Character& v, std::span<const std::complex<double>> roots);
std::complex<double> evaluate(const Monomial& m, std::span<const std::complex<double>> roots);
std::complex<double> evaluate(const RationalExpr& r, std::span<const std::complex<double>> roots);

}  // namespace ellstab
