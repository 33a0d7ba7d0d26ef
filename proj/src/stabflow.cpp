#include "ellstab/stabflow.hpp"

#include <algorithm>

#include "ellstab/io.hpp"

namespace ellstab {

using nlohmann::json;

// ------------------------------------------------------------------- matrix

YoungDiagram RestrictionMatrix::diagram(std::size_t i) const {
  if (!metadata.hilbert) throw std::logic_error("labels are not Young diagrams");
  return parseYoungDiagram(labels.at(i));
}

std::optional<Chamber> RestrictionMatrix::chamber() const {
  if (metadata.chamber) return metadata.chamber;
  if (metadata.hilbert) return metadata.convention.chamber();
  return std::nullopt;
}

std::optional<Character> RestrictionMatrix::polarizationOf(std::size_t i) const {
  if (i < metadata.polarization.size() && metadata.polarization[i]) return metadata.polarization[i];
  if (metadata.hilbert) return polarization(diagram(i), metadata.convention);
  return std::nullopt;
}

std::optional<Character> RestrictionMatrix::nMinusOf(std::size_t i) const {
  if (i < metadata.nMinus.size() && metadata.nMinus[i]) return metadata.nMinus[i];
  auto p = polarizationOf(i);
  auto c = chamber();
  if (!p || !c) return std::nullopt;
  return nMinusFromPolarization(*p, *c);
}

RestrictionMatrix RestrictionMatrix::identity(const VariableSet& variables,
                                              std::vector<std::string> labels) {
  RestrictionMatrix t{variables, std::move(labels), {}, {}};
  const std::size_t n = t.labels.size();
  t.entries.assign(n, std::vector<BalancedExpression>(n));
  for (std::size_t i = 0; i < n; ++i) t.entries[i][i].terms.push_back(BalancedTerm{});
  return t;
}

Character nMinusFromPolarization(const Character& p, const Chamber& chamber) {
  const ChamberParts parts = chamberSplit(p, chamber);
  const std::size_t hbar = chamber.direction.size();
  return parts.negative + conjugate(parts.positive).times(Monomial::variable(hbar));
}

// ---------------------------------------------------------------------- JSON

namespace {

template <class T, class F>
std::vector<std::optional<T>> perLabel(const json& meta, const char* key,
                                       const std::vector<std::string>& labels, F parse) {
  std::vector<std::optional<T>> out(labels.size());
  if (!meta.contains(key)) return out;
  const json& obj = meta.at(key);
  if (!obj.is_object()) throw ParseError(std::string("metadata '") + key + "' must map labels to values");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    auto pos = std::find(labels.begin(), labels.end(), it.key());
    if (pos == labels.end()) throw ParseError("metadata '" + std::string(key) + "' names unknown label '" + it.key() + "'");
    out[static_cast<std::size_t>(pos - labels.begin())] = parse(it.value());
  }
  return out;
}

ConventionSet conventionFromJson(const json& j) {
  ConventionSet c;
  if (j.contains("content")) {
    const std::string s = j.at("content").get<std::string>();
    if (s == "i-j") c.contentSign = ContentSign::iMinusJ;
    else if (s == "j-i") c.contentSign = ContentSign::jMinusI;
    else throw ParseError("content sign must be 'i-j' or 'j-i'");
  }
  if (j.contains("attract")) {
    const std::string s = j.at("attract").get<std::string>();
    if (s == "pos") c.chamberSign = ChamberSign::attractPositive;
    else if (s == "neg") c.chamberSign = ChamberSign::attractNegative;
    else throw ParseError("attract must be 'pos' or 'neg'");
  }
  return c;
}

}  // namespace

RestrictionMatrix restrictionMatrixFromJson(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("restriction matrix must be a JSON object");
    RestrictionMatrix t{variableSetFromJson(j.at("variables")), {}, {}, {}};
    for (const auto& l : j.at("labels")) t.labels.push_back(l.get<std::string>());
    const std::size_t n = t.labels.size();
    const json& rows = j.at("entries");
    if (!rows.is_array() || rows.size() != n) throw ParseError("'entries' must have one row per label");
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != n) throw ParseError("every entry row must have one column per label");
      std::vector<BalancedExpression> r;
      for (const auto& e : row) {
        if (e.is_number_integer() && e.get<int>() == 0) {
          r.emplace_back();
        } else if (e.is_number_integer() && e.get<int>() == 1) {
          r.push_back(BalancedExpression{{BalancedTerm{}}});
        } else {
          r.push_back(balancedFromJson(e, t.variables));
        }
      }
      t.entries.push_back(std::move(r));
    }

    const json meta = j.value("metadata", json::object());
    MatrixMetadata& md = t.metadata;
    md.hilbert = meta.value("kind", std::string("opaque")) == "hilbert";
    if (meta.contains("convention")) md.convention = conventionFromJson(meta.at("convention"));
    if (meta.contains("chamber")) {
      std::vector<Rational> d;
      for (const auto& x : meta.at("chamber")) d.push_back(rationalFromJson(x));
      if (d.size() != t.variables.equivariantCount()) throw ParseError("chamber needs one entry per equivariant variable");
      md.chamber = Chamber(std::move(d));
    }
    if (meta.contains("order")) {
      for (const auto& l : meta.at("order")) {
        auto pos = std::find(t.labels.begin(), t.labels.end(), l.get<std::string>());
        if (pos == t.labels.end()) throw ParseError("order names unknown label");
        md.order.push_back(static_cast<std::size_t>(pos - t.labels.begin()));
      }
      auto sorted = md.order;
      std::sort(sorted.begin(), sorted.end());
      if (sorted.size() != n || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ParseError("order must list every label exactly once");
    }
    const VariableSet& v = t.variables;
    md.polarization = perLabel<Character>(meta, "polarization", t.labels,
                                          [&v](const json& x) { return characterFromJson(x, v); });
    md.nMinus = perLabel<Character>(meta, "nminus", t.labels,
                                    [&v](const json& x) { return characterFromJson(x, v); });
    md.diagonal = perLabel<RationalExpr>(meta, "diagonal", t.labels,
                                         [&v](const json& x) { return rationalExprFromJson(x, v); });
    md.slope = perLabel<Rational>(meta, "slopes", t.labels, [](const json& x) { return rationalFromJson(x); });
    if (md.hilbert)
      for (std::size_t i = 0; i < n; ++i) t.diagram(i);
    return t;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed restriction matrix: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("malformed restriction matrix: ") + e.what());
  } catch (const std::domain_error& e) {
    throw ParseError(std::string("malformed restriction matrix: ") + e.what());
  }
}

json toJson(const RestrictionMatrix& t) {
  json entries = json::array();
  for (const auto& row : t.entries) {
    json r = json::array();
    for (const auto& e : row) r.push_back(toJson(e, t.variables));
    entries.push_back(std::move(r));
  }
  json meta{{"kind", t.metadata.hilbert ? "hilbert" : "opaque"}};
  if (!t.metadata.order.empty()) {
    json order = json::array();
    for (auto i : t.metadata.order) order.push_back(t.labels[i]);
    meta["order"] = order;
  }
  return json{{"variables", toJson(t.variables)}, {"labels", t.labels}, {"entries", entries}, {"metadata", meta}};
}

// ---------------------------------------------------------------------- reports

std::size_t Report::count(const std::string& status) const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(),
                                                [&status](const CheckRecord& r) { return r.status == status; }));
}

json Report::toJson() const {
  json out = json::array();
  for (const auto& r : records) {
    json j{{"check", r.check}, {"status", r.status}};
    if (!r.row.empty()) j["row"] = r.row;
    if (!r.column.empty()) j["column"] = r.column;
    if (!r.detail.empty()) j["detail"] = r.detail;
    out.push_back(std::move(j));
  }
  return out;
}

namespace {

const char* verdict(bool ok) { return ok ? "pass" : "fail"; }

bool isZeroExpression(const BalancedExpression& e) {
  return std::all_of(e.terms.begin(), e.terms.end(), [](const BalancedTerm& t) { return t.coefficient == 0; });
}

bool isOneExpression(const BalancedExpression& e) {
  if (e.terms.size() != 1) return false;
  const auto& t = e.terms.front();
  return t.coefficient == 1 && t.prefactor.isOne() && t.numerator == t.denominator;
}

// Position of each label in the declared order.
std::vector<std::size_t> ranks(const std::vector<std::size_t>& order, std::size_t n) {
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[i] = i;
  if (!order.empty())
    for (std::size_t p = 0; p < order.size(); ++p) rank[order[p]] = p;
  return rank;
}

std::string matrixString(const std::vector<std::vector<std::int64_t>>& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ",";
    s += "[";
    for (std::size_t k = 0; k < m[i].size(); ++k) {
      if (k) s += ",";
      s += std::to_string(m[i][k]);
    }
    s += "]";
  }
  return s + "]";
}

}  // namespace

Report validateSection(const RestrictionMatrix& t, const std::vector<Rational>& w) {
  Report report;
  const std::size_t n = t.size();
  const VariableSet& v = t.variables;
  const auto rank = ranks(t.metadata.order, n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m) {
      const BalancedExpression& e = t.entries[l][m];
      const std::string& row = t.labels[l];
      const std::string& col = t.labels[m];
      if (l == m) {
        report.add({"normalized_diagonal", row, col, verdict(isOneExpression(e)), formatBalanced(e, v)});
        continue;
      }
      if (isZeroExpression(e)) continue;
      report.add({"triangular", row, col, verdict(rank[m] <= rank[l]),
                  rank[m] <= rank[l] ? "" : "nonzero entry above the declared order"});
      report.add({"balanced_equivariant", row, col, verdict(isBalancedInEquivariant(e, v)), ""});
      report.add({"balanced_kahler", row, col, verdict(isBalancedInKahler(e, v)), ""});
      report.add({"separated_poles", row, col, verdict(hasSeparatedPoles(e, v)), ""});
      try {
        const QuasiperiodIndex qi = quasiperiodIndex(e, v);
        report.add({"quasiperiod_consistent", row, col, "pass", "pairing " + matrixString(qi.pairing)});
        if (t.metadata.hilbert && v.equivariantCount() == 1 && v.kahlerCount() == 1) {
          const auto& conv = t.metadata.convention;
          const std::int64_t expected = dLambda(t.diagram(l), conv) - dLambda(t.diagram(m), conv);
          const std::int64_t chi = qi.chiDifference()[0][0];
          report.add({"hilbert_pairing", row, col, verdict(chi == expected),
                      "chi difference " + std::to_string(chi) + ", d difference " + std::to_string(expected)});
        }
      } catch (const InconsistentBundle& ex) {
        report.add({"quasiperiod_consistent", row, col, "fail", ex.what()});
      } catch (const std::domain_error& ex) {
        report.add({"quasiperiod_consistent", row, col, "fail", ex.what()});
      }
    }
  if (w.size() != v.equivariantCount())
    report.add({"w_dimension", "", "", "fail", "w needs one entry per equivariant variable"});
  return report;
}

// ------------------------------------------------------------------ pipeline

json KMatrixCandidate::toJson() const {
  json entriesJson = json::array();
  json text = json::array();
  for (const auto& row : entries) {
    json r = json::array();
    json rt = json::array();
    for (const auto& e : row) {
      r.push_back(ellstab::toJson(e, variables));
      rt.push_back(formatRationalExpr(e, variables));
    }
    entriesJson.push_back(std::move(r));
    text.push_back(std::move(rt));
  }
  json out{{"labels", labels}, {"entries", entriesJson}, {"text", text}};
  if (!zExponents.empty()) {
    json z = json::array();
    for (const auto& e : zExponents) z.push_back(toString(e));
    out["z_exponents"] = z;
    auto hJson = [](const std::vector<HEntry>& h) {
      json a = json::array();
      for (const auto& e : h) a.push_back({{"sign", e.sign}, {"hbar", toString(e.hbarExponent)}});
      return a;
    };
    out["h_hilbert"] = hJson(hHilbert);
    out["h_general"] = hJson(hGeneral);
  }
  return out;
}

KMatrixCandidate applyLimitTheorem(const RestrictionMatrix& t, const std::vector<Rational>& w,
                                   const KahlerChamber& chamber) {
  const VariableSet& v = t.variables;
  if (w.size() != v.equivariantCount()) throw std::invalid_argument("w needs one entry per equivariant variable");
  const std::size_t n = t.size();
  KMatrixCandidate k{v, t.labels, std::vector<std::vector<RationalExpr>>(n, std::vector<RationalExpr>(n)), {}, {}, {}};
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m) {
      const BalancedExpression& e = t.entries[l][m];
      const std::string where = "entry (" + t.labels[l] + ", " + t.labels[m] + "): ";
      try {
        const QLimit ql = qLimit(e, w);
        const auto correction = quasiperiodIndex(e, v).zCorrection(w);
        k.entries[l][m] = v.kahlerCount() == 0 ? ql.full().reduced() : zLimit(ql.full(), chamber, correction, v);
      } catch (const LimitUndefined& ex) {
        throw LimitUndefined(where + ex.what());
      } catch (const DivergentLimit& ex) {
        throw DivergentLimit(where + ex.what());
      } catch (const NormalizationMismatch& ex) {
        throw NormalizationMismatch(where + ex.what());
      } catch (const InconsistentBundle& ex) {
        throw InconsistentBundle(where + ex.what());
      }
    }
  if (t.metadata.hilbert && w.size() == 1) {
    std::vector<YoungDiagram> diagrams;
    for (std::size_t i = 0; i < n; ++i) diagrams.push_back(t.diagram(i));
    const auto& conv = t.metadata.convention;
    for (const auto& h : hsthmMatrices(diagrams, w[0], conv)) {
      k.zExponents.push_back(h.zExponent);
      k.hHilbert.push_back({h.hSign, h.hbarExponent});
    }
    for (std::size_t i = 0; i < n; ++i)
      k.hGeneral.push_back({k.hHilbert[i].sign, mGeneral(diagrams[i], w[0], conv) / 2});
  }
  return k;
}

// -------------------------------------------------------------------- axioms

std::pair<Rational, Rational> degreeSpan(const RationalExpr& r, std::size_t i) {
  auto span = [i](const Character& c) {
    std::int32_t lo = 0, hi = 0;
    bool first = true;
    for (const auto& [m, mult] : c.terms()) {
      const std::int32_t e = m.twiceExponent(i);
      if (first || e < lo) lo = e;
      if (first || e > hi) hi = e;
      first = false;
    }
    return std::pair<std::int32_t, std::int32_t>{lo, hi};
  };
  const auto [nl, nh] = span(r.numerator());
  const auto [dl, dh] = span(r.denominator());
  return {Rational(nl - dl, 2), Rational(nh - dh, 2)};
}

RationalExpr lemma3Limit(const Character& p, const Character& nMinus, const std::vector<Rational>& w) {
  BalancedTerm term;
  auto place = [&term](const Character& c, bool upstairs) {
    for (const auto& [m, mult] : c.terms()) {
      if (!m.hasIntegralExponents()) throw std::domain_error("characters must have integral exponents");
      const bool num = (mult > 0) == upstairs;
      for (std::int64_t k = 0; k < (mult > 0 ? mult : -mult); ++k)
        (num ? term.numerator : term.denominator).push_back({m, 0});
    }
  };
  place(nMinus, true);
  place(p, false);
  return qLimit(BalancedExpression{{term}}, w).full().reduced();
}

RationalExpr expectedDiagonal(const Character& p, const Character& nMinus, const Chamber& chamber,
                              const std::vector<Rational>& w) {
  const std::size_t hbar = w.size();
  const Character ind = chamberSplit(p, chamber).positive;
  const Character indNu = invariantPart(ind, w);
  const std::int64_t moving = rank(ind - indNu);
  const Rational hExp = floorPairing(ind, w) + Rational(rank(ind), 2);
  const RationalExpr prefactor =
      RationalExpr::monomial(Monomial::variable(hbar, hExp) / determinant(indNu), moving % 2 == 0 ? 1 : -1);
  return (prefactor * exteriorEuler(conjugate(invariantPart(nMinus, w)))).reduced();
}

RationalExpr syntheticDiagonal(const Character& p, const Character& nMinus, const Chamber& chamber,
                               const std::vector<Rational>& w) {
  const Monomial det0 = determinant(chamberSplit(p, chamber).zero);
  return (exteriorEuler(conjugate(invariantPart(p, w))) * lemma3Limit(p, nMinus, w) *
          RationalExpr::monomial(det0.sqrt()))
      .reduced();
}

Report checkStabAxioms(const KMatrixCandidate& k, const RestrictionMatrix& t, const std::vector<Rational>& w) {
  Report report;
  const std::size_t n = k.labels.size();
  const VariableSet& v = k.variables;
  const auto rank = ranks(t.metadata.order, n);

  // (i) support
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m) {
      const RationalExpr& e = k.entries[l][m];
      if (l == m) {
        const bool one = e == RationalExpr::constant(1);
        report.add({"support_diagonal", k.labels[l], k.labels[m], verdict(one), formatRationalExpr(e, v)});
      } else if (rank[m] > rank[l]) {
        report.add({"support", k.labels[l], k.labels[m], verdict(e.isZero()),
                    e.isZero() ? "" : "nonzero outside the attracting set: " + formatRationalExpr(e, v)});
      }
    }

  // (ii) normalization of the unnormalized diagonal
  const auto chamber = t.chamber();
  for (std::size_t l = 0; l < n; ++l) {
    const bool have = l < t.metadata.diagonal.size() && t.metadata.diagonal[l];
    const auto p = t.polarizationOf(l);
    const auto nm = t.nMinusOf(l);
    if (!have || !p || !nm || !chamber) {
      report.add({"normalization", k.labels[l], k.labels[l], "skipped", "no unnormalized diagonal data"});
      continue;
    }
    const RationalExpr expected = expectedDiagonal(*p, *nm, *chamber, w);
    const RationalExpr& given = *t.metadata.diagonal[l];
    const bool ok = expected == given;
    report.add({"normalization", k.labels[l], k.labels[l], verdict(ok),
                ok ? formatRationalExpr(expected, v)
                   : "expected " + formatRationalExpr(expected, v) + ", given " + formatRationalExpr(given, v)});
  }

  // (iii) degree window, per equivariant variable
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m) {
      if (l == m) continue;
      const RationalExpr& e = k.entries[l][m];
      if (e.isZero()) continue;
      const bool haveSlopes = l < t.metadata.slope.size() && m < t.metadata.slope.size() &&
                              t.metadata.slope[l] && t.metadata.slope[m];
      const auto nm = t.nMinusOf(m);
      std::string span;
      for (std::size_t i = 0; i < v.equivariantCount(); ++i) {
        const auto [lo, hi] = degreeSpan(e, i);
        span += v.name(i) + ":[" + toString(lo) + "," + toString(hi) + "] ";
      }
      if (!haveSlopes || !nm || v.equivariantCount() != 1) {
        report.add({"degree_window", k.labels[l], k.labels[m], "skipped", "entry degree " + span + "(no slope data)"});
        continue;
      }
      const RationalExpr window = exteriorEuler(conjugate(invariantPart(*nm, w)));
      const auto [wl, wh] = degreeSpan(window, 0);
      const Rational shift = *t.metadata.slope[l] - *t.metadata.slope[m];
      const Rational lo = std::min(wl, wh) + shift, hi = std::max(wl, wh) + shift;
      const auto [el, eh] = degreeSpan(e, 0);
      const bool ok = std::min(el, eh) >= lo && std::max(el, eh) <= hi;
      report.add({"degree_window", k.labels[l], k.labels[m], verdict(ok),
                  "entry degree " + span + "window [" + toString(lo) + "," + toString(hi) + "]"});
    }
  return report;
}

}  // namespace ellstab
