#include "ellstab/balanced.hpp"

#include <algorithm>
#include <cmath>

#include "ellstab/io.hpp"
#include "ellstab/simd/theta_kernels.hpp"

namespace ellstab {

using nlohmann::json;

KahlerChamber::KahlerChamber(std::vector<KahlerDirection> d) : directions(std::move(d)) {
  if (directions.empty()) throw std::invalid_argument("Kahler chamber needs at least one direction");
}

KahlerChamber KahlerChamber::uniform(KahlerDirection d, std::size_t count) {
  return KahlerChamber(std::vector<KahlerDirection>(count, d));
}

// ------------------------------------------------------------------ predicates

namespace {

Monomial restrictTo(const Monomial& m, std::span<const std::size_t> vars) {
  Monomial out;
  for (std::size_t i : vars) out.setExponent(i, m.exponent(i));
  return out;
}

std::vector<Monomial> restrictedMultiset(const std::vector<ThetaArgument>& args,
                                         std::span<const std::size_t> vars) {
  std::vector<Monomial> out;
  for (const auto& arg : args) {
    Monomial r = restrictTo(arg.monomial, vars);
    if (!r.isOne()) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> equivariantIndices(const VariableSet& v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.equivariantCount(); ++i) out.push_back(i);
  return out;
}

std::vector<std::size_t> kahlerIndices(const VariableSet& v) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < v.kahlerCount(); ++k) out.push_back(v.kahlerIndex(k));
  return out;
}

}  // namespace

bool isBalancedIn(const BalancedExpression& expr, std::span<const std::size_t> vars,
                  const VariableSet&) {
  return std::all_of(expr.terms.begin(), expr.terms.end(), [&vars](const BalancedTerm& t) {
    return restrictedMultiset(t.numerator, vars) == restrictedMultiset(t.denominator, vars);
  });
}

bool isBalancedInEquivariant(const BalancedExpression& expr, const VariableSet& variables) {
  const auto vars = equivariantIndices(variables);
  return isBalancedIn(expr, vars, variables);
}

bool isBalancedInKahler(const BalancedExpression& expr, const VariableSet& variables) {
  const auto vars = kahlerIndices(variables);
  return isBalancedIn(expr, vars, variables);
}

bool hasSeparatedPoles(const BalancedExpression& expr, const VariableSet& variables) {
  const auto a = equivariantIndices(variables);
  const auto z = kahlerIndices(variables);
  for (const auto& t : expr.terms)
    for (const auto& arg : t.denominator) {
      const bool hasA = !restrictTo(arg.monomial, a).isOne();
      const bool hasZ = !restrictTo(arg.monomial, z).isOne();
      if (hasA && hasZ) return false;
    }
  return true;
}

// ----------------------------------------------------------------- quasiperiods

std::vector<std::vector<std::int64_t>> QuasiperiodIndex::chiDifference() const {
  auto out = pairing;
  for (auto& row : out)
    for (auto& x : row) x = -x;
  return out;
}

std::vector<Rational> QuasiperiodIndex::zCorrection(std::span<const Rational> w) const {
  if (w.size() != pairing.size()) throw std::invalid_argument("w has the wrong dimension");
  const std::size_t m = pairing.empty() ? 0 : pairing.front().size();
  std::vector<Rational> out(m, Rational(0));
  for (std::size_t i = 0; i < pairing.size(); ++i)
    for (std::size_t k = 0; k < m; ++k) out[k] += w[i] * pairing[i][k];
  return out;
}

QuasiperiodIndex quasiperiodIndex(const BalancedExpression& expr, const VariableSet& variables) {
  const std::size_t na = variables.equivariantCount();
  const std::size_t nz = variables.kahlerCount();
  std::optional<std::vector<std::vector<std::int64_t>>> common;
  for (std::size_t t = 0; t < expr.terms.size(); ++t) {
    const auto& term = expr.terms[t];
    std::vector<std::vector<std::int64_t>> p(na, std::vector<std::int64_t>(nz, 0));
    auto accumulate = [&](const std::vector<ThetaArgument>& args, std::int64_t sign) {
      for (const auto& arg : args) {
        if (!arg.monomial.hasIntegralExponents())
          throw std::domain_error("theta arguments must have integral exponents");
        for (std::size_t i = 0; i < na; ++i)
          for (std::size_t k = 0; k < nz; ++k)
            p[i][k] += sign * arg.monomial.twiceExponent(i) / 2 *
                       (arg.monomial.twiceExponent(variables.kahlerIndex(k)) / 2);
      }
    };
    accumulate(term.numerator, 1);
    accumulate(term.denominator, -1);
    if (!common) {
      common = std::move(p);
    } else if (*common != p) {
      throw InconsistentBundle("term " + std::to_string(t + 1) +
                               " has a different quasiperiod pairing than term 1");
    }
  }
  if (!common) common.emplace(na, std::vector<std::int64_t>(nz, 0));
  return QuasiperiodIndex{std::move(*common)};
}

BalancedExpression shiftEquivariant(const BalancedExpression& expr, std::span<const Rational> w) {
  BalancedExpression out = expr;
  for (auto& t : out.terms) {
    for (auto& arg : t.numerator) arg.qShift += arg.monomial.pairing(w);
    for (auto& arg : t.denominator) arg.qShift += arg.monomial.pairing(w);
  }
  return out;
}

// ---------------------------------------------------------------------- limits

QLimit qLimit(const BalancedExpression& expr, std::span<const Rational> w) {
  const BalancedExpression shifted = shiftEquivariant(expr, w);
  std::optional<Monomial> normalization;
  RationalExpr value;
  for (std::size_t t = 0; t < shifted.terms.size(); ++t) {
    const auto& term = shifted.terms[t];
    if (term.coefficient == 0) continue;
    const LimitResult lim = thetaRatioLimit(term.numerator, term.denominator);
    if (lim.value.isZero()) continue;
    const Monomial full = term.prefactor * lim.prefactor;
    if (!normalization) normalization = full;
    const Monomial ratio = full / *normalization;
    if (!ratio.hasIntegralExponents())
      throw NormalizationMismatch("term " + std::to_string(t + 1) +
                                  " needs a different square-root normalization");
    value = value + RationalExpr::monomial(ratio, term.coefficient) * lim.value;
  }
  if (!normalization) return QLimit{Monomial{}, RationalExpr{}};
  return QLimit{*normalization, value.reduced()};
}

namespace {

// Lowest (toZero) or highest (toInfinity) exponent of variable i in v, and
// the coefficient of that power with variable i dropped.
std::pair<Rational, Character> extremePart(const Character& v, std::size_t i, KahlerDirection d) {
  std::optional<std::int32_t> best;
  for (const auto& [m, c] : v.terms()) {
    const std::int32_t e = m.twiceExponent(i);
    if (!best || (d == KahlerDirection::toZero ? e < *best : e > *best)) best = e;
  }
  Character part;
  for (const auto& [m, c] : v.terms())
    if (m.twiceExponent(i) == *best) part.add(m.without(i), c);
  return {Rational(*best, 2), part};
}

}  // namespace

RationalExpr zLimit(const RationalExpr& value, const KahlerChamber& chamber,
                    std::span<const Rational> zCorrection, const VariableSet& variables) {
  const std::size_t nz = variables.kahlerCount();
  if (chamber.directions.size() != nz || zCorrection.size() != nz)
    throw std::invalid_argument("chamber and correction must cover every Kahler variable");
  if (value.isZero()) return value;
  Character num = value.numerator();
  Character den = value.denominator();
  for (std::size_t k = 0; k < nz; ++k) {
    const std::size_t i = variables.kahlerIndex(k);
    const KahlerDirection d = chamber.directions[k];
    auto [en, leadNum] = extremePart(num, i, d);
    auto [ed, leadDen] = extremePart(den, i, d);
    // Power of z_k that governs the limit; positive means it goes to zero.
    Rational order = zCorrection[k] + en - ed;
    if (d == KahlerDirection::toInfinity) order = -order;
    const std::string& name = variables.name(i);
    if (order > 0) return RationalExpr{};
    if (order < 0)
      throw DivergentLimit("limit in " + name + " diverges like " + name + "^" +
                           toString(d == KahlerDirection::toZero ? order : -order));
    num = std::move(leadNum);
    den = std::move(leadDen);
  }
  return RationalExpr(num, den).reduced();
}

// -------------------------------------------------------------------- numerics

double numericEvaluate(const RationalExpr& r, std::span<const double> values) {
  std::vector<std::complex<double>> roots;
  for (double v : values) {
    if (!(v > 0)) throw std::invalid_argument("numeric evaluation needs positive values");
    roots.emplace_back(std::sqrt(v), 0.0);
  }
  return evaluate(r, roots).real();
}

double numericEvaluate(const BalancedExpression& expr, std::span<const double> values,
                       std::span<const Rational> w, double q) {
  if (!(q > 0 && q < 1)) throw std::invalid_argument("numeric evaluation needs 0 < q < 1");
  std::vector<double> roots;
  for (double v : values) {
    if (!(v > 0)) throw std::invalid_argument("numeric evaluation needs positive values");
    roots.push_back(std::sqrt(v));
  }
  const double logQ = std::log(q);
  // theta(x q^k) = (-1)^k q^{-k^2/2} x^{-k} theta(x): reduce every q-shift to
  // [0, 1) and carry the scale in log form so deep shifts do not overflow.
  struct Reduced {
    double root;
    double logScale;
    bool negative;
  };
  auto reduce = [&](const ThetaArgument& arg) {
    double logX = 0;
    for (std::size_t i = 0; i < arg.monomial.extent(); ++i)
      if (arg.monomial.twiceExponent(i) != 0) {
        if (i >= roots.size()) throw std::invalid_argument("missing variable value");
        logX += arg.monomial.twiceExponent(i) * std::log(roots[i]);
      }
    const Rational s = arg.qShift + arg.monomial.pairing(w);
    const std::int64_t k = floorOf(s);
    logX += boost::rational_cast<double>(s - k) * logQ;
    const double kd = static_cast<double>(k);
    return Reduced{std::exp(logX / 2), -kd * kd / 2 * logQ - kd * logX, k % 2 != 0};
  };

  std::vector<Reduced> reduced;
  for (const auto& t : expr.terms) {
    for (const auto& arg : t.numerator) reduced.push_back(reduce(arg));
    for (const auto& arg : t.denominator) reduced.push_back(reduce(arg));
  }
  std::vector<double> batch;
  for (const auto& r : reduced) batch.push_back(r.root);
  std::vector<double> thetas(batch.size());
  simd::thetaBatch(batch, q, thetas);

  std::vector<std::complex<double>> croots(roots.begin(), roots.end());
  double total = 0;
  std::size_t pos = 0;
  for (const auto& t : expr.terms) {
    double term = static_cast<double>(t.coefficient) * evaluate(t.prefactor, croots).real();
    double logScale = 0;
    for (std::size_t j = 0; j < t.numerator.size(); ++j, ++pos) {
      term *= reduced[pos].negative ? -thetas[pos] : thetas[pos];
      logScale += reduced[pos].logScale;
    }
    for (std::size_t j = 0; j < t.denominator.size(); ++j, ++pos) {
      term /= reduced[pos].negative ? -thetas[pos] : thetas[pos];
      logScale -= reduced[pos].logScale;
    }
    total += term * std::exp(logScale);
  }
  return total;
}

// ------------------------------------------------------------------- generator

namespace {

struct Block {
  int n, m, h;
};

std::int64_t pairingOf(const std::vector<Block>& blocks) {
  std::int64_t s = 0;
  for (const auto& b : blocks) s += static_cast<std::int64_t>(b.n) * b.m;
  return s;
}

}  // namespace

BalancedExpression randomBalancedExpression(std::mt19937_64& rng, const GeneratorOptions& options) {
  // Index layout of VariableSet::standard(1, 1).
  constexpr std::size_t A = 0, H = 1, Z = 2;
  auto uniform = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto nonzero = [&](int bound) {
    int x = uniform(1, bound);
    return uniform(0, 1) ? x : -x;
  };
  auto randomBlocks = [&] {
    std::vector<Block> blocks(static_cast<std::size_t>(uniform(1, options.maxBlocks)));
    for (auto& b : blocks) b = {nonzero(options.maxExponent), nonzero(options.maxExponent),
                                uniform(-options.maxHbar, options.maxHbar)};
    return blocks;
  };
  auto mono = [](int a, int h, int z) {
    Monomial m;
    m.setExponent(A, a);
    m.setExponent(H, h);
    m.setExponent(Z, z);
    return m;
  };

  BalancedExpression expr;
  const int termCount = uniform(1, options.maxTerms);
  std::optional<std::int64_t> target;
  while (static_cast<int>(expr.terms.size()) < termCount) {
    std::vector<Block> blocks = randomBlocks();
    if (target && pairingOf(blocks) != *target) continue;
    target = pairingOf(blocks);
    BalancedTerm term;
    term.coefficient = nonzero(3);
    term.prefactor = mono(uniform(-2, 2), uniform(-2, 2), 0);
    for (const auto& b : blocks) {
      term.numerator.push_back({mono(b.n, b.h, b.m), 0});
      term.denominator.push_back({mono(b.n, b.h, 0), 0});
      term.denominator.push_back({mono(0, 0, b.m), 0});
    }
    expr.terms.push_back(std::move(term));
  }
  return expr;
}

// ------------------------------------------------------------------------- I/O

namespace {

json argsToJson(const std::vector<ThetaArgument>& args, const VariableSet& vars) {
  json out = json::array();
  for (const auto& a : args) {
    json j{{"exp", toJson(a.monomial, vars)}};
    if (a.qShift != 0) j["qshift"] = toString(a.qShift);
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<ThetaArgument> argsFromJson(const json& j, const VariableSet& vars) {
  std::vector<ThetaArgument> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw ParseError("theta factor list must be an array");
  for (const auto& f : j) {
    if (!f.is_object() || !f.contains("exp")) throw ParseError("theta factor needs an 'exp' field");
    ThetaArgument arg{monomialFromJson(f.at("exp"), vars), 0};
    if (!arg.monomial.hasIntegralExponents())
      throw ParseError("theta factor exponents must be integers");
    if (f.contains("qshift")) arg.qShift = rationalFromJson(f.at("qshift"));
    out.push_back(std::move(arg));
  }
  return out;
}

}  // namespace

json toJson(const BalancedExpression& expr, const VariableSet& variables) {
  json terms = json::array();
  for (const auto& t : expr.terms) {
    json j;
    if (t.coefficient != 1) j["coef"] = t.coefficient;
    if (!t.prefactor.isOne()) j["prefactor"] = toJson(t.prefactor, variables);
    j["num"] = argsToJson(t.numerator, variables);
    j["den"] = argsToJson(t.denominator, variables);
    terms.push_back(std::move(j));
  }
  return json{{"terms", std::move(terms)}};
}

BalancedExpression balancedFromJson(const json& j, const VariableSet& variables) {
  if (!j.is_object() || !j.contains("terms") || !j.at("terms").is_array())
    throw ParseError("balanced expression needs a 'terms' array");
  BalancedExpression out;
  for (const auto& tj : j.at("terms")) {
    if (!tj.is_object()) throw ParseError("term must be an object");
    BalancedTerm t;
    if (tj.contains("coef")) {
      if (!tj.at("coef").is_number_integer()) throw ParseError("'coef' must be an integer");
      t.coefficient = tj.at("coef").get<std::int64_t>();
    }
    if (tj.contains("prefactor")) t.prefactor = monomialFromJson(tj.at("prefactor"), variables);
    if (tj.contains("num")) t.numerator = argsFromJson(tj.at("num"), variables);
    if (tj.contains("den")) t.denominator = argsFromJson(tj.at("den"), variables);
    out.terms.push_back(std::move(t));
  }
  return out;
}

std::string formatBalanced(const BalancedExpression& expr, const VariableSet& variables) {
  if (expr.terms.empty()) return "0";
  auto thetas = [&variables](const std::vector<ThetaArgument>& args) {
    std::string s;
    for (const auto& a : args) {
      s += "theta(" + formatMonomial(a.monomial, variables);
      if (a.qShift != 0) s += "*q^" + toString(a.qShift);
      s += ")";
    }
    return s.empty() ? std::string("1") : s;
  };
  std::string out;
  for (const auto& t : expr.terms) {
    if (!out.empty()) out += " + ";
    if (t.coefficient != 1) out += std::to_string(t.coefficient) + "*";
    if (!t.prefactor.isOne()) out += formatMonomial(t.prefactor, variables) + "*";
    out += thetas(t.numerator) + "/" + thetas(t.denominator);
  }
  return out;
}

}  // namespace ellstab
