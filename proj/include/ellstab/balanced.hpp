#pragma once

// Balanced sections: sums of monomial-weighted theta ratios, their quasiperiod
// data, the equivariant shift a -> a q^w, and the two-stage limit q -> 0 then
// z -> 0 or infinity per Kahler variable.

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "ellstab/charalg.hpp"
#include "ellstab/qtheta.hpp"

namespace ellstab {

class InconsistentBundle : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NormalizationMismatch : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DivergentLimit : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// coefficient * prefactor * prod theta(numerator) / prod theta(denominator).
struct BalancedTerm {
  std::int64_t coefficient = 1;
  Monomial prefactor;
  std::vector<ThetaArgument> numerator;
  std::vector<ThetaArgument> denominator;
};

/// Empty means zero.
struct BalancedExpression {
  std::vector<BalancedTerm> terms;
};

enum class KahlerDirection { toZero, toInfinity };

struct KahlerChamber {
  std::vector<KahlerDirection> directions;

  explicit KahlerChamber(std::vector<KahlerDirection> d);
  /// Same direction for every one of count Kahler variables.
  static KahlerChamber uniform(KahlerDirection d, std::size_t count);
};

/// In every term, the nonzero restrictions to vars of the numerator
/// monomials form the same multiset as those of the denominator.
bool isBalancedIn(const BalancedExpression& expr, std::span<const std::size_t> vars,
                  const VariableSet& variables);
bool isBalancedInEquivariant(const BalancedExpression& expr, const VariableSet& variables);
bool isBalancedInKahler(const BalancedExpression& expr, const VariableSet& variables);

/// Every denominator monomial involves only equivariant or only Kahler
/// variables (hbar may appear in either).
bool hasSeparatedPoles(const BalancedExpression& expr, const VariableSet& variables);

/// Bilinear part of the quasiperiods. pairing[i][k] is the signed sum of
/// n_i m_k over the theta factors (numerator +, denominator -), where n_i is
/// the exponent of a_i and m_k that of z_k.
struct QuasiperiodIndex {
  std::vector<std::vector<std::int64_t>> pairing;

  /// chi_lambda - chi_mu, which is -pairing.
  std::vector<std::vector<std::int64_t>> chiDifference() const;
  /// Exponents of z in the z^{w.pairing} correction applied before z -> 0.
  std::vector<Rational> zCorrection(std::span<const Rational> w) const;
};

/// Throws InconsistentBundle when the terms disagree. A constant or empty
/// expression has zero pairing.
QuasiperiodIndex quasiperiodIndex(const BalancedExpression& expr, const VariableSet& variables);

/// Adds <equivariant exponent, w> to every theta argument's q-shift.
BalancedExpression shiftEquivariant(const BalancedExpression& expr, std::span<const Rational> w);

struct QLimit {
  /// Monomial factored out of every term.
  Monomial normalization;
  RationalExpr value;

  RationalExpr full() const { return RationalExpr::monomial(normalization) * value; }
};

/// lim_{q->0} expr(a q^w). The normalization is the monomial of the first
/// term with a nonvanishing limit; every other such term must differ from it
/// by integral exponents (NormalizationMismatch otherwise).
QLimit qLimit(const BalancedExpression& expr, std::span<const Rational> w);

/// Multiplies value by prod z_k^{zCorrection[k]} and sends each Kahler
/// variable in turn to its chamber limit. Throws DivergentLimit when some
/// corrected valuation points the wrong way.
RationalExpr zLimit(const RationalExpr& value, const KahlerChamber& chamber,
                    std::span<const Rational> zCorrection, const VariableSet& variables);

/// Real evaluation at positive variable values and 0 < q < 1, with a
/// replaced by a q^w. Theta factors go through the batched kernel.
double numericEvaluate(const BalancedExpression& expr, std::span<const double> values,
                       std::span<const Rational> w, double q);

/// Real evaluation of an exact value at positive variable values.
double numericEvaluate(const RationalExpr& r, std::span<const double> values);

struct GeneratorOptions {
  int maxTerms = 4;
  /// Blocks theta(a^n z^m h^c) / (theta(a^n h^c) theta(z^m)) per term.
  int maxBlocks = 2;
  int maxExponent = 3;
  int maxHbar = 2;
};

/// Random expression over VariableSet::standard(1, 1), balanced in a and in
/// z, with a common quasiperiod pairing across terms.
BalancedExpression randomBalancedExpression(std::mt19937_64& rng, const GeneratorOptions& options = {});

nlohmann::json toJson(const BalancedExpression& expr, const VariableSet& variables);
/// {"terms": [{"coef": n, "prefactor": {...}, "num": [{"exp": {...}, "qshift": "p/q"}], "den": [...]}]};
/// coef, prefactor and qshift are optional.
BalancedExpression balancedFromJson(const nlohmann::json& j, const VariableSet& variables);

std::string formatBalanced(const BalancedExpression& expr, const VariableSet& variables);

}  // namespace ellstab
