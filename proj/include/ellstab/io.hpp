#pragma once

// Text and JSON forms of characters and rational expressions. The text form
// is canonical: format(parse(s)) == s for every s produced by format.

#include <string>
#include <string_view>

#include <json.hpp>

#include "ellstab/charalg.hpp"

namespace ellstab {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string formatMonomial(const Monomial& m, const VariableSet& vars);
std::string formatCharacter(const Character& v, const VariableSet& vars);
std::string formatRationalExpr(const RationalExpr& r, const VariableSet& vars);

Character parseCharacter(std::string_view text, const VariableSet& vars);
Monomial parseMonomial(std::string_view text, const VariableSet& vars);

nlohmann::json toJson(const VariableSet& vars);
VariableSet variableSetFromJson(const nlohmann::json& j);

/// {"var": "p/q", ...}; zero exponents omitted.
nlohmann::json toJson(const Monomial& m, const VariableSet& vars);
Monomial monomialFromJson(const nlohmann::json& j, const VariableSet& vars);

/// {"terms": [{"exp": {...}, "mult": n}, ...]} in canonical term order.
nlohmann::json toJson(const Character& v, const VariableSet& vars);
Character characterFromJson(const nlohmann::json& j, const VariableSet& vars);

/// {"num": <character>, "den": <character>}.
nlohmann::json toJson(const RationalExpr& r, const VariableSet& vars);
RationalExpr rationalExprFromJson(const nlohmann::json& j, const VariableSet& vars);

/// Accepts a JSON number (integer) or a "p/q" string.
Rational rationalFromJson(const nlohmann::json& j);

}  // namespace ellstab
