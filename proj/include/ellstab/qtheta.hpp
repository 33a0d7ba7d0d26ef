#pragma once

// Truncated q-series with rational exponents and character coefficients, the
// odd Jacobi theta function
//
//   theta(x) = (x^{1/2} - x^{-1/2}) prod_{i>=1} (1 - x q^i)(1 - q^i / x),
//
// and exact q -> 0 limits of theta ratios.

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellstab/charalg.hpp"
#include "ellstab/rational.hpp"

namespace ellstab {

/// A q -> 0 limit does not exist (pole in q) or is degenerate.
class LimitUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NonConvergence : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// sum_e q^e * coefficient(e). Terms with exponent >= order() are unknown;
/// an empty order() means the series is exact (a finite sum).
class QSeries {
 public:
  using Terms = std::map<Rational, Character>;

  QSeries() = default;
  QSeries(Terms terms, std::optional<Rational> order);
  static QSeries monomial(const Character& coefficient, const Rational& qExponent);

  const Terms& terms() const { return terms_; }
  const std::optional<Rational>& order() const { return order_; }
  bool isExact() const { return !order_.has_value(); }
  /// No known nonzero coefficient.
  bool isZero() const { return terms_.empty(); }
  std::optional<Rational> valuation() const;
  Character coefficient(const Rational& qExponent) const;

  QSeries truncated(const Rational& order) const;
  QSeries times(const Monomial& m, const Rational& qExponent, std::int64_t coefficient = 1) const;

  friend QSeries operator+(const QSeries& x, const QSeries& y);
  friend QSeries operator-(const QSeries& x, const QSeries& y);
  friend QSeries operator*(const QSeries& x, const QSeries& y);
  friend QSeries operator-(const QSeries& x) { return x.times(Monomial{}, 0, -1); }

  /// Coefficient-wise equality for every exponent below upTo. Both operands
  /// must be known there.
  bool agreesWith(const QSeries& other, const Rational& upTo) const;

 private:
  void add(const Rational& e, const Character& c);
  Terms terms_;
  std::optional<Rational> order_;
};

/// theta(monomial * q^qShift).
struct ThetaArgument {
  Monomial monomial;
  Rational qShift = 0;

  bool operator==(const ThetaArgument&) const = default;
};

/// Exact expansion of theta(arg) for all q-exponents below order. Theta
/// arguments must carry integral exponents.
QSeries thetaSeries(const ThetaArgument& arg, const Rational& order);

/// No term of thetaSeries(arg, .) has exponent below this bound.
Rational thetaLowerBound(const ThetaArgument& arg);

struct LeadingTerm {
  Rational valuation;
  Character coefficient;
};

/// Lowest nonvanishing term of theta(arg), found by widening the truncation
/// window until it is nonempty. Throws LimitUndefined for theta(q^n) == 0.
LeadingTerm thetaLeading(const ThetaArgument& arg);

/// theta(1/x) == -theta(x) coefficient-wise below order, x symbolic.
bool verifyOddness(const Rational& order);

/// theta(x q^n) == result of applying theta(xq) = -(x sqrt q)^{-1} theta(x)
/// n times, coefficient-wise below order, x symbolic. n >= 1.
bool verifyQuasiperiod(const Rational& order, int iterations = 1);

struct LimitResult {
  /// Extracted monomial (half-integer exponents allowed).
  Monomial prefactor;
  /// Remaining rational function; carries signs and (1 - m) binomials.
  RationalExpr value;

  RationalExpr full() const { return RationalExpr::monomial(prefactor) * value; }
};

/// Exact q -> 0 limit of prod theta(numerator) / prod theta(denominator).
LimitResult thetaRatioLimit(const std::vector<ThetaArgument>& numerator,
                            const std::vector<ThetaArgument>& denominator);

/// Floating-point theta via the partial product, principal branch of x^{1/2}.
std::complex<double> numericTheta(std::complex<double> x, std::complex<double> q,
                                  double tolerance = 1e-15);
/// Same, with the square root of x supplied by the caller.
std::complex<double> numericThetaFromRoot(std::complex<double> root, std::complex<double> q,
                                          double tolerance = 1e-15);

std::string formatQSeries(const QSeries& s, const VariableSet& vars);

}  // namespace ellstab
