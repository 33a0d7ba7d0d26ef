// Batch driver for the verification suites and the limit pipeline. Output is
// JSON lines; the last line of every command is a summary record.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellstab/balanced.hpp"
#include "ellstab/framing.hpp"
#include "ellstab/hilbcomb.hpp"
#include "ellstab/io.hpp"
#include "ellstab/qtheta.hpp"
#include "ellstab/simd/theta_kernels.hpp"
#include "ellstab/stabflow.hpp"

using namespace ellstab;
using nlohmann::json;

namespace {

// Bad flag values or input files; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Emitter {
 public:
  explicit Emitter(std::ostream& out) : out_(out) {}

  void line(const json& j) { out_ << j.dump() << '\n'; }
  void check(json j, bool ok) {
    j["status"] = ok ? "pass" : "fail";
    ++checks_;
    if (!ok) ++failed_;
    line(j);
  }
  void tally(std::int64_t checks, std::int64_t failed) {
    checks_ += checks;
    failed_ += failed;
  }
  int finish(const std::string& command, json extra = json::object()) {
    extra["command"] = command;
    extra["checks"] = checks_;
    extra["passed"] = checks_ - failed_;
    extra["failed"] = failed_;
    line(json{{"summary", extra}});
    out_.flush();
    return failed_ == 0 ? 0 : 1;
  }

 private:
  std::ostream& out_;
  std::int64_t checks_ = 0;
  std::int64_t failed_ = 0;
};

std::vector<Rational> parseRationalList(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parseRational(item));
    } catch (const std::exception&) {
      throw UsageError("not a rational: '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("empty rational list");
  return out;
}

std::vector<int> parseIntList(const std::string& text) {
  std::vector<int> out;
  for (const Rational& r : parseRationalList(text)) {
    if (r.denominator() != 1 || r < 0) throw UsageError("expected nonnegative integers: '" + text + "'");
    out.push_back(static_cast<int>(r.numerator()));
  }
  return out;
}

struct Options {
  std::string order = "10";
  int nMax = 8;
  int bMax = 4;
  int n = 2;
  int b = 0;
  std::string w = "0";
  std::string chamber = "zero";
  std::string content;
  std::string attract;
  std::string input;
  std::string output;
  double tolerance = 1e-3;
  std::uint64_t seed = 1;
  int wDenoms = 6;
  std::string framing;
  std::string dims;
};

ConventionSet conventionFrom(const Options& o) {
  ConventionSet c;
  if (o.content == "j-i") c.contentSign = ContentSign::jMinusI;
  if (o.attract == "pos") c.chamberSign = ChamberSign::attractPositive;
  return c;
}

// ------------------------------------------------------------------ commands

int thetaVerify(const Options& o, Emitter& out) {
  Rational order;
  try {
    order = parseRational(o.order);
  } catch (const std::exception&) {
    throw UsageError("--order must be a rational");
  }
  if (order <= 0) throw UsageError("--order must be positive");
  if (o.wDenoms < 1) throw UsageError("--w-denoms must be at least 1");

  out.check({{"check", "oddness"}, {"order", toString(order)}}, verifyOddness(order));
  out.check({{"check", "quasiperiod"}, {"order", toString(order)}}, verifyQuasiperiod(order));
  out.check({{"check", "quasiperiod_iterated"}, {"order", toString(order)}}, verifyQuasiperiod(order, 3));

  const VariableSet v = VariableSet::standard(1, 1);
  const Monomial a = Monomial::variable(0), z = Monomial::variable(2);
  const RationalExpr binomialRatio(parseCharacter("1 - a*z", v), parseCharacter("1 - a", v));
  std::int64_t grid = 0, gridFailed = 0;
  for (int r = 1; r <= o.wDenoms; ++r)
    for (int p = -3 * r; p <= 3 * r; ++p) {
      const Rational w(p, r);
      if (w.denominator() != r) continue;
      const RationalExpr got = thetaRatioLimit({{z * a, w}}, {{a, w}}).full();
      const Rational zExp = isIntegral(w) ? -w - Rational(1, 2) : -Rational(floorOf(w)) - Rational(1, 2);
      RationalExpr expected = RationalExpr::monomial(Monomial::variable(2, zExp));
      if (isIntegral(w)) expected = expected * binomialRatio;
      const bool ok = got == expected;
      ++grid;
      if (!ok) {
        ++gridFailed;
        out.line({{"check", "thetlim"}, {"w", toString(w)}, {"status", "fail"},
                  {"got", formatRationalExpr(got, v)}, {"expected", formatRationalExpr(expected, v)}});
      }
    }
  out.line({{"check", "thetlim_grid"}, {"cases", grid}, {"failed", gridFailed}});
  out.tally(grid, gridFailed);

  // Seeded numeric spot check of the series against the product formula.
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> mag(0.3, 3.0);
  const QSeries series = thetaSeries({a, 0}, 12);
  const double q = 1e-4;
  for (int k = 0; k < 5; ++k) {
    const double x = mag(rng);
    const std::complex<double> root[] = {std::sqrt(x), 1.0, 1.0};
    std::complex<double> s = 0;
    for (const auto& [e, c] : series.terms()) s += std::pow(q, boost::rational_cast<double>(e)) * evaluate(c, root);
    const std::complex<double> direct = numericTheta(x, q);
    const double rel = std::abs(s - direct) / std::max(1e-300, std::abs(direct));
    out.check({{"check", "numeric_theta"}, {"a", x}, {"q", q}, {"relative_error", rel}}, rel <= o.tolerance);
  }
  return out.finish("theta-verify", {{"isa", simd::isaName(simd::activeIsa())}});
}

int youngReport(const Options& o, Emitter& out) {
  if (o.n < 0) throw UsageError("--n must be nonnegative");
  const ConventionSet conv = conventionFrom(o);
  const std::vector<Rational> ws = parseRationalList(o.w);
  const Rational w = ws.front();
  const int b = o.b > 0 ? o.b : static_cast<int>(w.denominator());
  for (const auto& lambda : partitions(o.n)) {
    json rec = diagramReport(lambda, conv, b, w);
    const Character p = polarization(lambda, conv);
    Character hookSum;
    for (int h : hooks(lambda))
      hookSum = hookSum + Character::monomial(Monomial::variable(0, h)) + Character::monomial(Monomial::variable(0, -h));
    const bool hookOk = p + conjugate(p) == hookSum;
    const bool detOk = determinant(p) == Monomial::variable(0, dLambda(lambda, conv) + o.n * o.n);
    rec["hook_identity"] = hookOk;
    rec["det_identity"] = detOk;
    out.check(rec, hookOk && detOk);
  }
  return out.finish("young-report", {{"convention", conv.toString()}});
}

int diflem(const Options& o, Emitter& out) {
  if (o.nMax < 0 || o.bMax < 2) throw UsageError("--n-max must be >= 0 and --b-max >= 2");
  ConventionSet conv = conventionFrom(o);
  const bool explicitConv = !o.content.empty() || !o.attract.empty();
  if (!explicitConv) conv = calibrate(std::min(o.nMax, 6), o.bMax).selected;
  const DiflemScan s = diflemScan(o.nMax, o.bMax, conv);
  for (const auto& sample : s.samples) out.line(json{{"failure", sample}});
  out.tally(s.checks, s.failures);
  return out.finish("diflem-scan", {{"convention", conv.toString()}, {"calibrated", !explicitConv}});
}

int componentEnum(const Options& o, Emitter& out) {
  if (!o.framing.empty()) {
    const QuiverFrame frame{parseIntList(o.framing), o.dims.empty() ? std::vector<int>{} : parseIntList(o.dims)};
    if (frame.framing.size() != frame.dimension.size()) throw UsageError("--framing and --dims differ in length");
    const FramingPoint p{parseRationalList(o.w)};
    if (static_cast<int>(p.w.size()) != frame.framingRank()) throw UsageError("--w needs one entry per framing coordinate");
    const BlockPartition blocks = indexBlocks(p);
    const FixedComponents fc = enumerateFixedComponents(frame, blocks);
    for (const auto& c : fc.components) out.line({{"component", c}});
    std::int64_t expected = 1;
    for (int nv : frame.dimension) expected *= weakCompositionCount(nv, static_cast<int>(blocks.blocks.size()));
    out.check({{"check", "component_count"}, {"count", fc.components.size()}, {"expected", expected}},
              static_cast<std::int64_t>(fc.components.size()) == expected);
    return out.finish("component-enum", {{"mode", "framing"}});
  }
  if (o.n < 0 || o.b < 1) throw UsageError("--n must be >= 0 and --b >= 1");
  const ConventionSet conv = conventionFrom(o);
  const auto comps = enumerateComponents(o.n, o.b, conv);
  std::size_t total = 0;
  for (const auto& [key, list] : comps) {
    json diagrams = json::array();
    for (const auto& l : list) diagrams.push_back(l.toString());
    out.line({{"component", key}, {"diagrams", diagrams}});
    total += list.size();
  }
  out.check({{"check", "partition_cover"}, {"diagrams", total}}, total == partitions(o.n).size());
  return out.finish("component-enum", {{"mode", "hilbert"}, {"components", comps.size()}});
}

int calibrateCommand(const Options& o, Emitter& out) {
  if (o.nMax < 0 || o.bMax < 2) throw UsageError("--n-max must be >= 0 and --b-max >= 2");
  const Calibration cal = calibrate(o.nMax, o.bMax);
  for (const auto& [conv, scan] : cal.scans)
    out.line({{"convention", conv.toString()}, {"checks", scan.checks}, {"failures", scan.failures},
              {"passed", scan.failures == 0}});
  out.check({{"check", "some_convention_passes"}}, cal.anyPassed);
  return out.finish("calibrate", {{"selected", cal.selected.toString()}, {"any_passed", cal.anyPassed}});
}

int limitApply(const Options& o, Emitter& out) {
  if (o.input.empty()) throw UsageError("limit-apply needs --input");
  std::ifstream in(o.input);
  if (!in) throw UsageError("cannot read " + o.input);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(std::string("input is not JSON: ") + e.what());
  }
  const RestrictionMatrix t = restrictionMatrixFromJson(j);
  const std::vector<Rational> w = parseRationalList(o.w);
  if (w.size() != t.variables.equivariantCount()) throw UsageError("--w needs one entry per equivariant variable");
  if (o.chamber != "zero" && o.chamber != "infinity") throw UsageError("--chamber must be 'zero' or 'infinity'");
  const KahlerChamber chamber = KahlerChamber::uniform(
      o.chamber == "zero" ? KahlerDirection::toZero : KahlerDirection::toInfinity,
      std::max<std::size_t>(1, t.variables.kahlerCount()));

  auto emitReport = [&out](const char* stage, const Report& r) {
    for (const auto& rec : r.records) {
      json line{{"stage", stage}, {"check", rec.check}};
      if (!rec.row.empty()) line["row"] = rec.row;
      if (!rec.column.empty()) line["column"] = rec.column;
      if (!rec.detail.empty()) line["detail"] = rec.detail;
      if (rec.status == "skipped") {
        line["status"] = "skipped";
        out.line(line);
      } else {
        out.check(line, rec.status == "pass");
      }
    }
  };
  emitReport("validate", validateSection(t, w));
  try {
    const KMatrixCandidate k = applyLimitTheorem(t, w, chamber);
    out.line({{"candidate", k.toJson()}});
    emitReport("axioms", checkStabAxioms(k, t, w));
  } catch (const std::domain_error& e) {
    out.check({{"stage", "limit"}, {"check", "limit_exists"}, {"detail", e.what()}}, false);
  }
  return out.finish("limit-apply", {{"w", o.w}, {"chamber", o.chamber}});
}

int framingBlocks(const Options& o, Emitter& out) {
  const FramingPoint p{parseRationalList(o.w)};
  std::unique_ptr<QuiverFrame> frame;
  if (!o.framing.empty()) {
    frame = std::make_unique<QuiverFrame>(QuiverFrame{parseIntList(o.framing), parseIntList(o.dims.empty() ? "0" : o.dims)});
    if (frame->framing.size() != frame->dimension.size()) throw UsageError("--framing and --dims differ in length");
    if (frame->framingRank() != static_cast<int>(p.w.size()))
      throw UsageError("--w needs one entry per framing coordinate");
  }
  json report = framingReport(p, frame.get());
  out.line(report);
  // Blocks against the invariance of a_i/a_j.
  const BlockPartition blocks = indexBlocks(p);
  const int r = static_cast<int>(p.w.size());
  bool consistent = true;
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j <= r; ++j) {
      if (i == j) continue;
      Monomial m;
      m.setExponent(static_cast<std::size_t>(i - 1), 1);
      m.setExponent(static_cast<std::size_t>(j - 1), -1);
      const bool invariant = !invariantPart(Character::monomial(m), p.w).isZero();
      consistent = consistent && invariant != normalCharacterPredicate(i, j, blocks);
    }
  out.check({{"check", "blocks_match_invariance"}}, consistent);
  bool integral = true;
  for (const auto& x : p.w) integral = integral && isIntegral(x * cyclicOrder(p));
  out.check({{"check", "cyclic_order_integral"}, {"b", cyclicOrder(p)}}, integral);
  return out.finish("framing-blocks");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact limit calculus for elliptic and K-theoretic stable envelopes"};
  app.require_subcommand(1);
  Options o;

  auto addConvention = [&o](CLI::App* c) {
    c->add_option("--content", o.content, "content sign")->check(CLI::IsMember({"i-j", "j-i"}));
    c->add_option("--attract", o.attract, "chamber sign")->check(CLI::IsMember({"pos", "neg"}));
  };
  auto addOutput = [&o](CLI::App* c) {
    c->add_option("--output", o.output, "write JSON lines here instead of stdout");
  };

  auto* theta = app.add_subcommand("theta-verify", "oddness, quasiperiod and the ratio-limit grid");
  theta->add_option("--order", o.order, "truncation order (rational)")->capture_default_str();
  theta->add_option("--w-denoms", o.wDenoms, "largest denominator of w in the grid")->capture_default_str();
  theta->add_option("--tolerance", o.tolerance, "relative tolerance of the numeric check at q=1e-4")->capture_default_str();
  theta->add_option("--seed", o.seed, "seed of the numeric spot check")->capture_default_str();
  addOutput(theta);

  auto* young = app.add_subcommand("young-report", "per-diagram data for all partitions of n");
  young->add_option("--n", o.n, "number of boxes")->capture_default_str();
  young->add_option("--b", o.b, "modulus for components; defaults to the denominator of w");
  young->add_option("--w", o.w, "slope")->capture_default_str();
  addConvention(young);
  addOutput(young);

  auto* dif = app.add_subcommand("diflem-scan", "floor-difference identity over n, b ranges");
  dif->add_option("--n-max", o.nMax, "largest n")->capture_default_str();
  dif->add_option("--b-max", o.bMax, "largest b")->capture_default_str();
  addConvention(dif);
  addOutput(dif);

  auto* comp = app.add_subcommand("component-enum", "fixed components mod b, or framing components");
  comp->add_option("--n", o.n, "number of boxes")->capture_default_str();
  comp->add_option("--b", o.b, "modulus");
  comp->add_option("--w", o.w, "framing point, with --framing");
  comp->add_option("--framing", o.framing, "framing ranks per vertex, e.g. 2,1");
  comp->add_option("--dims", o.dims, "dimension vector, e.g. 1,1");
  addConvention(comp);
  addOutput(comp);

  auto* cal = app.add_subcommand("calibrate", "scan all four conventions");
  cal->add_option("--n-max", o.nMax, "largest n")->capture_default_str();
  cal->add_option("--b-max", o.bMax, "largest b")->capture_default_str();
  addOutput(cal);

  auto* lim = app.add_subcommand("limit-apply", "run the limit pipeline on a restriction matrix");
  lim->add_option("--input", o.input, "restriction matrix JSON")->required();
  lim->add_option("--w", o.w, "shift, one entry per equivariant variable")->capture_default_str();
  lim->add_option("--chamber", o.chamber, "Kahler direction")->check(CLI::IsMember({"zero", "infinity"}))->capture_default_str();
  addOutput(lim);

  auto* fr = app.add_subcommand("framing-blocks", "hyperplanes, blocks and cyclic order of a framing point");
  fr->add_option("--w", o.w, "framing point, comma separated")->required();
  fr->add_option("--framing", o.framing, "framing ranks per vertex");
  fr->add_option("--dims", o.dims, "dimension vector");
  addOutput(fr);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) {
      std::cerr << "error: cannot write " << o.output << '\n';
      return 2;
    }
  }
  Emitter out(o.output.empty() ? std::cout : file);

  try {
    if (*theta) return thetaVerify(o, out);
    if (*young) return youngReport(o, out);
    if (*dif) return diflem(o, out);
    if (*comp) return componentEnum(o, out);
    if (*cal) return calibrateCommand(o, out);
    if (*lim) return limitApply(o, out);
    if (*fr) return framingBlocks(o, out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
