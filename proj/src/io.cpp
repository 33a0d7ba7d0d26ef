#include "ellstab/io.hpp"

#include <cctype>
#include <cstdlib>

namespace ellstab {

using nlohmann::json;

std::string formatMonomial(const Monomial& m, const VariableSet& vars) {
  if (m.isOne()) return "1";
  if (m.extent() > vars.size()) throw std::invalid_argument("monomial uses unknown variables");
  std::string out;
  for (std::size_t i = 0; i < m.extent(); ++i) {
    const Rational e = m.exponent(i);
    if (e == 0) continue;
    if (!out.empty()) out += '*';
    out += vars.name(i);
    if (e != 1) out += '^' + toString(e);
  }
  return out;
}

std::string formatCharacter(const Character& v, const VariableSet& vars) {
  if (v.isZero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : v.terms()) {
    const std::int64_t magnitude = c < 0 ? -c : c;
    if (first) {
      if (c < 0) out += '-';
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    if (m.isOne()) {
      out += std::to_string(magnitude);
    } else {
      if (magnitude != 1) out += std::to_string(magnitude) + '*';
      out += formatMonomial(m, vars);
    }
  }
  return out;
}

std::string formatRationalExpr(const RationalExpr& r, const VariableSet& vars) {
  if (r.denominator() == Character(1)) return formatCharacter(r.numerator(), vars);
  auto wrap = [&vars](const Character& c) {
    const std::string s = formatCharacter(c, vars);
    return c.termCount() > 1 ? "(" + s + ")" : s;
  };
  return wrap(r.numerator()) + "/" + wrap(r.denominator());
}

namespace {

class CharacterParser {
 public:
  CharacterParser(std::string_view text, const VariableSet& vars) : text_(text), vars_(vars) {}

  Character parseExpression() {
    Character out;
    skipSpace();
    if (atEnd()) fail("empty expression");
    bool firstTerm = true;
    while (!atEnd()) {
      std::int64_t sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = take() == '-' ? -1 : 1;
        skipSpace();
      } else if (!firstTerm) {
        fail("expected '+' or '-'");
      }
      firstTerm = false;
      auto [coef, mono] = parseTerm();
      out.add(mono, sign * coef);
      skipSpace();
    }
    return out;
  }

  Monomial parseMonomialOnly() {
    skipSpace();
    auto [coef, mono] = parseTerm();
    skipSpace();
    if (!atEnd() || coef != 1) fail("expected a bare monomial");
    return mono;
  }

 private:
  std::pair<std::int64_t, Monomial> parseTerm() {
    std::int64_t coef = 1;
    Monomial mono;
    bool more = true;
    while (more) {
      skipSpace();
      if (atEnd()) fail("dangling operator");
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        coef *= parseUnsigned();
      } else if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
        const std::string name = parseName();
        const auto index = vars_.find(name);
        if (!index) fail("unknown variable '" + name + "'");
        Rational e = 1;
        skipSpace();
        if (!atEnd() && peek() == '^') {
          take();
          e = parseExponent();
        }
        try {
          mono = mono * Monomial::variable(*index, e);
        } catch (const std::domain_error& err) {
          fail(err.what());
        }
      } else {
        fail("unexpected character");
      }
      skipSpace();
      more = !atEnd() && peek() == '*';
      if (more) take();
    }
    return {coef, mono};
  }

  Rational parseExponent() {
    skipSpace();
    bool paren = false;
    if (!atEnd() && peek() == '(') {
      paren = true;
      take();
    }
    std::size_t start = pos_;
    if (!atEnd() && (peek() == '-' || peek() == '+')) take();
    while (!atEnd() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '/')) take();
    if (paren) {
      skipSpace();
      if (atEnd() || take() != ')') fail("expected ')'");
    }
    try {
      const auto end = paren ? pos_ - 1 : pos_;
      return parseRational(text_.substr(start, end - start));
    } catch (const std::invalid_argument&) {
      fail("bad exponent");
    }
  }

  std::int64_t parseUnsigned() {
    std::int64_t value = 0;
    while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek())))
      value = value * 10 + (take() - '0');
    return value;
  }

  std::string parseName() {
    std::string out;
    while (!atEnd() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
      out += take();
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skipSpace() {
    while (!atEnd() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool atEnd() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char take() { return text_[pos_++]; }

  std::string_view text_;
  const VariableSet& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Character parseCharacter(std::string_view text, const VariableSet& vars) {
  return CharacterParser(text, vars).parseExpression();
}

Monomial parseMonomial(std::string_view text, const VariableSet& vars) {
  return CharacterParser(text, vars).parseMonomialOnly();
}

json toJson(const VariableSet& vars) {
  return json{{"equivariant", vars.equivariantNames()},
              {"hbar", vars.hbarName()},
              {"kahler", vars.kahlerNames()}};
}

VariableSet variableSetFromJson(const json& j) {
  try {
    return VariableSet(j.at("equivariant").get<std::vector<std::string>>(),
                       j.value("hbar", std::string("h")),
                       j.value("kahler", std::vector<std::string>{}));
  } catch (const json::exception& e) {
    throw ParseError(std::string("variables: ") + e.what());
  }
}

Rational rationalFromJson(const json& j) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return parseRational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  throw ParseError("expected an integer or a \"p/q\" string, got " + j.dump());
}

json toJson(const Monomial& m, const VariableSet& vars) {
  json out = json::object();
  for (std::size_t i = 0; i < m.extent(); ++i) {
    const Rational e = m.exponent(i);
    if (e != 0) out[vars.name(i)] = toString(e);
  }
  return out;
}

Monomial monomialFromJson(const json& j, const VariableSet& vars) {
  if (!j.is_object()) throw ParseError("monomial must be an object, got " + j.dump());
  Monomial m;
  for (const auto& [name, e] : j.items()) {
    const auto index = vars.find(name);
    if (!index) throw ParseError("unknown variable '" + name + "'");
    try {
      m = m * Monomial::variable(*index, rationalFromJson(e));
    } catch (const std::domain_error& err) {
      throw ParseError(err.what());
    }
  }
  return m;
}

json toJson(const Character& v, const VariableSet& vars) {
  json terms = json::array();
  for (const auto& [m, c] : v.terms()) terms.push_back(json{{"exp", toJson(m, vars)}, {"mult", c}});
  return json{{"terms", terms}};
}

Character characterFromJson(const json& j, const VariableSet& vars) {
  if (j.is_string()) return parseCharacter(j.get<std::string>(), vars);
  if (j.is_number_integer()) return Character(j.get<std::int64_t>());
  if (!j.is_object() || !j.contains("terms")) throw ParseError("character must be {terms:[...]}");
  Character out;
  for (const auto& t : j.at("terms")) {
    if (!t.contains("mult") || !t.at("mult").is_number_integer())
      throw ParseError("character term needs an integer 'mult'");
    out.add(monomialFromJson(t.value("exp", json::object()), vars), t.at("mult").get<std::int64_t>());
  }
  return out;
}

json toJson(const RationalExpr& r, const VariableSet& vars) {
  return json{{"num", toJson(r.numerator(), vars)}, {"den", toJson(r.denominator(), vars)}};
}

RationalExpr rationalExprFromJson(const json& j, const VariableSet& vars) {
  if (!j.is_object() || !j.contains("num")) throw ParseError("rational expression needs 'num'");
  Character den = j.contains("den") ? characterFromJson(j.at("den"), vars) : Character(1);
  if (den.isZero()) throw ParseError("zero denominator");
  return RationalExpr(characterFromJson(j.at("num"), vars), std::move(den));
}

}  // namespace ellstab
