#pragma once

// Fixed-point combinatorics of the Hilbert scheme of points in the plane:
// contents, hooks, the polarization character at a fixed point, the
// exponents m_lambda(w), and the classification of fixed points by
// contents mod b.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellstab/charalg.hpp"
#include "ellstab/rational.hpp"

namespace ellstab {

class ComponentMismatch : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class YoungDiagram {
 public:
  YoungDiagram() = default;
  /// Rows must be positive and weakly decreasing.
  explicit YoungDiagram(std::vector<int> rows);

  const std::vector<int>& rows() const { return rows_; }
  int size() const;
  bool empty() const { return rows_.empty(); }
  /// Column lengths.
  std::vector<int> transpose() const;

  std::string toString() const;

  friend auto operator<=>(const YoungDiagram&, const YoungDiagram&) = default;

 private:
  std::vector<int> rows_;
};

/// All partitions of n, rows in descending lexicographic order: (2) before (1,1).
std::vector<YoungDiagram> partitions(int n);

enum class ContentSign { iMinusJ, jMinusI };
enum class ChamberSign { attractPositive, attractNegative };

struct ConventionSet {
  ContentSign contentSign = ContentSign::iMinusJ;
  ChamberSign chamberSign = ChamberSign::attractNegative;

  /// attractPositive is direction +1, attractNegative is -1.
  Chamber chamber() const;
  std::string toString() const;
  static std::vector<ConventionSet> all();

  bool operator==(const ConventionSet&) const = default;
};

/// Box (i, j) has row i and column j, both from 1.
std::vector<int> contents(const YoungDiagram& lambda, const ConventionSet& conv);
std::vector<int> hooks(const YoungDiagram& lambda);

/// Character in the single equivariant variable a (VariableSet::standard(1, 0)).
Character polarization(const YoungDiagram& lambda, const ConventionSet& conv);
int dLambda(const YoungDiagram& lambda, const ConventionSet& conv);
/// a-exponent of det(polarization).
Rational sigma(const YoungDiagram& lambda, const ConventionSet& conv);
/// Chamber-positive part of the polarization.
Character index(const YoungDiagram& lambda, const ConventionSet& conv);
/// A-characters of the repelling part of the tangent space: a^{hook} under
/// attractNegative, a^{-hook} under attractPositive.
Character negativeTangent(const YoungDiagram& lambda, const ConventionSet& conv);

/// w d_lambda - sum floor(hook w).
Rational mHilbert(const YoungDiagram& lambda, const Rational& w, const ConventionSet& conv);
/// <sigma, w> - sum over N^- characters of floor(<char, w>).
Rational mGeneral(const YoungDiagram& lambda, const Rational& w, const ConventionSet& conv);

/// Counts of contents by residue mod b, residues in [0, b).
std::vector<int> nuComponent(const YoungDiagram& lambda, int b, const ConventionSet& conv);
std::map<std::vector<int>, std::vector<YoungDiagram>> enumerateComponents(int n, int b,
                                                                        const ConventionSet& conv);

/// w = a/b in lowest terms with b <= n.
bool isNontrivialW(int n, const Rational& w);
/// Every such w in [lo, hi], ascending.
std::vector<Rational> nontrivialWs(int n, const Rational& lo, const Rational& hi);

struct HsthmEntry {
  /// Z = diag(z^{zExponent}).
  Rational zExponent;
  /// H = diag(hSign * hbar^{hbarExponent}).
  int hSign = 1;
  Rational hbarExponent;
};

/// Diagonal data for one component; throws ComponentMismatch when the
/// diagrams are not in one component for b = denominator of w.
std::vector<HsthmEntry> hsthmMatrices(const std::vector<YoungDiagram>& component, const Rational& w,
                                      const ConventionSet& conv);

struct DiflemScan {
  std::int64_t checks = 0;
  std::int64_t failures = 0;
  /// First few failures, as JSON records.
  std::vector<nlohmann::json> samples;
};

/// floor(ind_l w) - floor(ind_m w) == m_l(w) - m_m(w) over 2 <= b <= bMax,
/// coprime 0 < |a| < 4b, n <= nMax, pairs inside each component.
DiflemScan diflemScan(int nMax, int bMax, const ConventionSet& conv, std::size_t maxSamples = 5);

struct Calibration {
  std::vector<std::pair<ConventionSet, DiflemScan>> scans;
  /// First passing convention, or the default when none passes.
  ConventionSet selected;
  bool anyPassed = false;
};

Calibration calibrate(int nMax, int bMax);

/// One JSON record with contents, hooks, d, sigma, polarization, component
/// and m-values.
nlohmann::json diagramReport(const YoungDiagram& lambda, const ConventionSet& conv, int b,
                             const Rational& w);

nlohmann::json toJson(const YoungDiagram& lambda);
YoungDiagram youngDiagramFromJson(const nlohmann::json& j);
/// "2,1" or "(2,1)"; "" or "()" is the empty diagram.
YoungDiagram parseYoungDiagram(const std::string& text);

}  // namespace ellstab
