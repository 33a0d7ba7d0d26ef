#pragma once

// Restriction matrices of elliptic stable envelopes as input data, the
// shifted double limit that turns them into K-theoretic candidates, and
// checks of the K-theoretic stable envelope axioms on the result.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellstab/balanced.hpp"
#include "ellstab/hilbcomb.hpp"

namespace ellstab {

struct MatrixMetadata {
  /// Labels are Young diagrams and Hilbert-scheme data may be derived.
  bool hilbert = false;
  ConventionSet convention;
  /// Equivariant chamber; for Hilbert matrices defaults to convention.chamber().
  std::optional<Chamber> chamber;
  /// Declared attraction order, lowest first; defaults to label order.
  std::vector<std::size_t> order;
  /// Per label, optional.
  std::vector<std::optional<Character>> polarization;
  std::vector<std::optional<Character>> nMinus;
  /// Unnormalized diagonal K(l)|_l to test against the normalization axiom.
  std::vector<std::optional<RationalExpr>> diagonal;
  /// a-degree of the slope line bundle at each label.
  std::vector<std::optional<Rational>> slope;
};

/// entries[l][m] is the restriction of the envelope of label l to fixed point m.
struct RestrictionMatrix {
  VariableSet variables;
  std::vector<std::string> labels;
  std::vector<std::vector<BalancedExpression>> entries;
  MatrixMetadata metadata;

  std::size_t size() const { return labels.size(); }
  /// Diagram of label i for Hilbert matrices.
  YoungDiagram diagram(std::size_t i) const;
  /// Stored polarization, or the Hilbert-scheme one.
  std::optional<Character> polarizationOf(std::size_t i) const;
  /// Stored N^-, or the one built from the polarization.
  std::optional<Character> nMinusOf(std::size_t i) const;
  std::optional<Chamber> chamber() const;

  static RestrictionMatrix identity(const VariableSet& variables, std::vector<std::string> labels);
};

/// Throws ParseError on malformed input.
RestrictionMatrix restrictionMatrixFromJson(const nlohmann::json& j);
nlohmann::json toJson(const RestrictionMatrix& t);

struct CheckRecord {
  std::string check;
  /// Empty for matrix-level checks.
  std::string row, column;
  /// "pass", "fail" or "skipped".
  std::string status;
  std::string detail;
};

struct Report {
  std::vector<CheckRecord> records;

  void add(CheckRecord r) { records.push_back(std::move(r)); }
  std::size_t count(const std::string& status) const;
  bool ok() const { return count("fail") == 0; }
  nlohmann::json toJson() const;
};

/// N^- = P_{<0} + hbar * conjugate(P_{>0}).
Character nMinusFromPolarization(const Character& p, const Chamber& chamber);

/// Section structure of each entry; nothing throws.
Report validateSection(const RestrictionMatrix& t, const std::vector<Rational>& w);

struct HEntry {
  int sign = 1;
  Rational hbarExponent;
};

struct KMatrixCandidate {
  VariableSet variables;
  std::vector<std::string> labels;
  std::vector<std::vector<RationalExpr>> entries;
  /// Hilbert matrices only: exponents of Z = diag(z^{w d}) and both forms of H.
  std::vector<Rational> zExponents;
  std::vector<HEntry> hHilbert;
  std::vector<HEntry> hGeneral;

  nlohmann::json toJson() const;
};

/// lim_{z->0_D} of the q -> 0 limit of T(a q^w, z), entry (l, m) corrected
/// by z^{w . pairing(l, m)}. Errors name the offending entry.
KMatrixCandidate applyLimitTheorem(const RestrictionMatrix& t, const std::vector<Rational>& w,
                                   const KahlerChamber& chamber);

/// Axioms (i) support, (ii) diagonal normalization, (iii) degree window.
Report checkStabAxioms(const KMatrixCandidate& k, const RestrictionMatrix& t,
                       const std::vector<Rational>& w);

/// Expected unnormalized diagonal for (ii):
/// (-1)^{rk(ind - ind^nu)} hbar^{floor(ind w) + rk(ind)/2} / det(ind^nu) * Lambda(conj N^{-,nu}).
RationalExpr expectedDiagonal(const Character& p, const Character& nMinus, const Chamber& chamber,
                              const std::vector<Rational>& w);

/// Exact lim_{q->0} Theta(N^-)/Theta(P) at a -> a q^w.
RationalExpr lemma3Limit(const Character& p, const Character& nMinus, const std::vector<Rational>& w);

/// Lambda(conj P^nu) * lemma3Limit * det(P_0)^{1/2}: the diagonal a limit of a
/// genuine envelope would produce.
RationalExpr syntheticDiagonal(const Character& p, const Character& nMinus, const Chamber& chamber,
                               const std::vector<Rational>& w);

/// (lowest, highest) exponent of equivariant variable i, numerator minus denominator.
std::pair<Rational, Rational> degreeSpan(const RationalExpr& r, std::size_t i);

}  // namespace ellstab
