#include "ellstab/hilbcomb.hpp"

#include <algorithm>
#include <numeric>

#include "ellstab/io.hpp"

namespace ellstab {

using nlohmann::json;

// ----------------------------------------------------------------- diagrams

YoungDiagram::YoungDiagram(std::vector<int> rows) : rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i] <= 0) throw std::invalid_argument("Young diagram rows must be positive");
    if (i > 0 && rows_[i] > rows_[i - 1])
      throw std::invalid_argument("Young diagram rows must be weakly decreasing");
  }
}

int YoungDiagram::size() const { return std::accumulate(rows_.begin(), rows_.end(), 0); }

std::vector<int> YoungDiagram::transpose() const {
  std::vector<int> cols(rows_.empty() ? 0 : static_cast<std::size_t>(rows_.front()), 0);
  for (int r : rows_)
    for (int j = 0; j < r; ++j) ++cols[static_cast<std::size_t>(j)];
  return cols;
}

std::string YoungDiagram::toString() const {
  std::string s = "(";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(rows_[i]);
  }
  return s + ")";
}

std::vector<YoungDiagram> partitions(int n) {
  if (n < 0) throw std::invalid_argument("partition size must be nonnegative");
  std::vector<YoungDiagram> out;
  std::vector<int> current;
  // Largest first part first gives descending lexicographic order.
  auto recurse = [&](auto& self, int remaining, int maxPart) -> void {
    if (remaining == 0) {
      out.emplace_back(current);
      return;
    }
    for (int part = std::min(remaining, maxPart); part >= 1; --part) {
      current.push_back(part);
      self(self, remaining - part, part);
      current.pop_back();
    }
  };
  recurse(recurse, n, n);
  return out;
}

// -------------------------------------------------------------- conventions

Chamber ConventionSet::chamber() const {
  return Chamber({Rational(chamberSign == ChamberSign::attractPositive ? 1 : -1)});
}

std::string ConventionSet::toString() const {
  return std::string(contentSign == ContentSign::iMinusJ ? "i-j" : "j-i") + "/" +
         (chamberSign == ChamberSign::attractPositive ? "pos" : "neg");
}

std::vector<ConventionSet> ConventionSet::all() {
  return {{ContentSign::iMinusJ, ChamberSign::attractNegative},
          {ContentSign::iMinusJ, ChamberSign::attractPositive},
          {ContentSign::jMinusI, ChamberSign::attractNegative},
          {ContentSign::jMinusI, ChamberSign::attractPositive}};
}

// ------------------------------------------------------------ box statistics

std::vector<int> contents(const YoungDiagram& lambda, const ConventionSet& conv) {
  std::vector<int> out;
  const auto& rows = lambda.rows();
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 1; c <= rows[r]; ++c) {
      const int i = static_cast<int>(r) + 1;
      out.push_back(conv.contentSign == ContentSign::iMinusJ ? i - c : c - i);
    }
  return out;
}

std::vector<int> hooks(const YoungDiagram& lambda) {
  std::vector<int> out;
  const auto& rows = lambda.rows();
  const auto cols = lambda.transpose();
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < rows[r]; ++c) {
      const int arm = rows[r] - c - 1;
      const int leg = cols[static_cast<std::size_t>(c)] - static_cast<int>(r) - 1;
      out.push_back(arm + leg + 1);
    }
  return out;
}

namespace {

Monomial aPower(std::int64_t e) { return Monomial::variable(0, Rational(e)); }

}  // namespace

Character polarization(const YoungDiagram& lambda, const ConventionSet& conv) {
  const auto c = contents(lambda, conv);
  Character p;
  for (int ci : c) {
    for (int cj : c) {
      p.add(aPower(ci - cj + 1), 1);
      p.add(aPower(ci - cj), -1);
    }
    p.add(aPower(ci), 1);
  }
  return p;
}

int dLambda(const YoungDiagram& lambda, const ConventionSet& conv) {
  const auto c = contents(lambda, conv);
  return std::accumulate(c.begin(), c.end(), 0);
}

Rational sigma(const YoungDiagram& lambda, const ConventionSet& conv) {
  return determinant(polarization(lambda, conv)).exponent(0);
}

Character index(const YoungDiagram& lambda, const ConventionSet& conv) {
  return chamberSplit(polarization(lambda, conv), conv.chamber()).positive;
}

Character negativeTangent(const YoungDiagram& lambda, const ConventionSet& conv) {
  const int sign = conv.chamberSign == ChamberSign::attractNegative ? 1 : -1;
  Character out;
  for (int h : hooks(lambda)) out.add(aPower(sign * h), 1);
  return out;
}

Rational mHilbert(const YoungDiagram& lambda, const Rational& w, const ConventionSet& conv) {
  Rational m = w * dLambda(lambda, conv);
  for (int h : hooks(lambda)) m -= floorOf(w * h);
  return m;
}

Rational mGeneral(const YoungDiagram& lambda, const Rational& w, const ConventionSet& conv) {
  const Rational ws[] = {w};
  return sigma(lambda, conv) * w - floorPairing(negativeTangent(lambda, conv), ws);
}

// --------------------------------------------------------------- components

std::vector<int> nuComponent(const YoungDiagram& lambda, int b, const ConventionSet& conv) {
  if (b < 1) throw std::invalid_argument("b must be positive");
  std::vector<int> counts(static_cast<std::size_t>(b), 0);
  for (int c : contents(lambda, conv)) ++counts[static_cast<std::size_t>(((c % b) + b) % b)];
  return counts;
}

std::map<std::vector<int>, std::vector<YoungDiagram>> enumerateComponents(int n, int b,
                                                                        const ConventionSet& conv) {
  std::map<std::vector<int>, std::vector<YoungDiagram>> out;
  for (auto& lambda : partitions(n)) out[nuComponent(lambda, b, conv)].push_back(lambda);
  return out;
}

bool isNontrivialW(int n, const Rational& w) { return w.denominator() <= n; }

std::vector<Rational> nontrivialWs(int n, const Rational& lo, const Rational& hi) {
  std::vector<Rational> out;
  for (int b = 1; b <= n; ++b)
    for (std::int64_t a = floorOf(lo * b); a <= ceilOf(hi * b); ++a) {
      if (std::gcd(a, static_cast<std::int64_t>(b)) != 1) continue;
      const Rational w(a, b);
      if (w >= lo && w <= hi) out.push_back(w);
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<HsthmEntry> hsthmMatrices(const std::vector<YoungDiagram>& component, const Rational& w,
                                      const ConventionSet& conv) {
  const int b = static_cast<int>(w.denominator());
  std::vector<HsthmEntry> out;
  std::optional<std::vector<int>> residues;
  const Rational ws[] = {w};
  for (const auto& lambda : component) {
    auto r = nuComponent(lambda, b, conv);
    if (residues && *residues != r)
      throw ComponentMismatch(lambda.toString() + " lies in a different component for b=" +
                              std::to_string(b));
    residues = std::move(r);
    const Character ind = index(lambda, conv);
    const std::int64_t moving = rank(ind - invariantPart(ind, ws));
    out.push_back({w * dLambda(lambda, conv), moving % 2 == 0 ? 1 : -1, mHilbert(lambda, w, conv)});
  }
  return out;
}

// -------------------------------------------------------------- identity scan

DiflemScan diflemScan(int nMax, int bMax, const ConventionSet& conv, std::size_t maxSamples) {
  DiflemScan scan;
  for (int b = 2; b <= bMax; ++b)
    for (int a = -4 * b + 1; a < 4 * b; ++a) {
      if (a == 0 || std::gcd(a, b) != 1) continue;
      const Rational w(a, b);
      const Rational ws[] = {w};
      for (int n = 1; n <= nMax; ++n) {
        for (const auto& [residues, diagrams] : enumerateComponents(n, b, conv)) {
          std::vector<Rational> lhs, rhs;
          for (const auto& lambda : diagrams) {
            lhs.push_back(floorPairing(index(lambda, conv), ws));
            rhs.push_back(mHilbert(lambda, w, conv));
          }
          for (std::size_t i = 0; i < diagrams.size(); ++i)
            for (std::size_t j = i + 1; j < diagrams.size(); ++j) {
              ++scan.checks;
              const Rational l = lhs[i] - lhs[j];
              const Rational r = rhs[i] - rhs[j];
              if (l == r) continue;
              ++scan.failures;
              if (scan.samples.size() < maxSamples)
                scan.samples.push_back({{"w", toString(w)},
                                        {"lambda", diagrams[i].toString()},
                                        {"mu", diagrams[j].toString()},
                                        {"floor_difference", toString(l)},
                                        {"m_difference", toString(r)}});
            }
        }
      }
    }
  return scan;
}

Calibration calibrate(int nMax, int bMax) {
  Calibration cal;
  for (const auto& conv : ConventionSet::all()) {
    cal.scans.emplace_back(conv, diflemScan(nMax, bMax, conv));
    if (!cal.anyPassed && cal.scans.back().second.failures == 0) {
      cal.anyPassed = true;
      cal.selected = conv;
    }
  }
  return cal;
}

// ---------------------------------------------------------------------- I/O

json diagramReport(const YoungDiagram& lambda, const ConventionSet& conv, int b, const Rational& w) {
  const VariableSet vars = VariableSet::standard(1, 0);
  return json{{"diagram", lambda.toString()},
              {"n", lambda.size()},
              {"contents", contents(lambda, conv)},
              {"hooks", hooks(lambda)},
              {"d", dLambda(lambda, conv)},
              {"sigma", toString(sigma(lambda, conv))},
              {"polarization", formatCharacter(polarization(lambda, conv), vars)},
              {"index", formatCharacter(index(lambda, conv), vars)},
              {"b", b},
              {"component", nuComponent(lambda, b, conv)},
              {"w", toString(w)},
              {"m_hilbert", toString(mHilbert(lambda, w, conv))},
              {"m_general", toString(mGeneral(lambda, w, conv))}};
}

json toJson(const YoungDiagram& lambda) { return json(lambda.rows()); }

YoungDiagram youngDiagramFromJson(const json& j) {
  if (j.is_string()) return parseYoungDiagram(j.get<std::string>());
  if (!j.is_array()) throw ParseError("Young diagram must be an array of row lengths");
  std::vector<int> rows;
  for (const auto& r : j) {
    if (!r.is_number_integer()) throw ParseError("row lengths must be integers");
    rows.push_back(r.get<int>());
  }
  try {
    return YoungDiagram(std::move(rows));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

YoungDiagram parseYoungDiagram(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != '(' && c != ')' && c != ' ') s += c;
  std::vector<int> rows;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string part = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad Young diagram '" + text + "'");
    rows.push_back(std::stoi(part));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  try {
    return YoungDiagram(std::move(rows));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace ellstab
