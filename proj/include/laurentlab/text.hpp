#pragma once

// Canonical text form of Laurent polynomials and a small expression parser.
//
// Printing groups the terms that share a Laurent monomial; their common
// coefficient (a polynomial in the parameters) is printed first, e.g.
//   (2*a)*f[0,1]^-1*f[2,0]^3 + 1
// Parsing the printed text against the same VarTable reproduces the
// polynomial exactly.

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "laurentlab/poly.hpp"

namespace laurentlab {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at offset " + std::to_string(pos)), msg_(what), pos_(pos) {}
  std::size_t position() const { return pos_; }
  const std::string& message() const { return msg_; }

 private:
  std::string msg_;
  std::size_t pos_;
};

// Names for variables. Laurent variables and parameters get separate index
// ranges; the index order is the canonical variable order.
class VarTable {
 public:
  Var add_variable(const std::string& name) {
    if (auto v = find(name)) {
      if (is_param(*v)) throw AlgebraError("name already used by a parameter: " + name);
      return *v;
    }
    Var v = static_cast<Var>(vars_.size());
    vars_.push_back(name);
    index_[name] = v;
    return v;
  }
  Var add_param(const std::string& name) {
    if (auto v = find(name)) {
      if (!is_param(*v)) throw AlgebraError("name already used by a variable: " + name);
      return *v;
    }
    Var v = param_var(static_cast<std::uint32_t>(params_.size()));
    params_.push_back(name);
    index_[name] = v;
    return v;
  }

  std::optional<Var> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(Var v) const {
    if (is_param(v)) {
      auto i = v & ~kParamBit;
      if (i >= params_.size()) throw AlgebraError("unknown parameter index");
      return params_[i];
    }
    if (v >= vars_.size()) throw AlgebraError("unknown variable index " + std::to_string(v));
    return vars_[v];
  }

  std::size_t variable_count() const { return vars_.size(); }
  std::size_t param_count() const { return params_.size(); }
  const std::vector<std::string>& param_names() const { return params_; }

 private:
  std::vector<std::string> vars_;
  std::vector<std::string> params_;
  std::map<std::string, Var> index_;
};

namespace detail {

inline void print_monomial(std::ostream& os, const Monomial& m, const VarTable& table) {
  bool first = true;
  for (const auto& [v, e] : m.factors()) {
    if (!first) os << '*';
    first = false;
    os << table.name(v);
    if (e != 1) os << '^' << e;
  }
}

// Single term c*m, with the sign folded into the caller's joiner.
inline void print_scalar_term(std::ostream& os, const mpz_class& abs_coeff, const Monomial& m,
                              const VarTable& table) {
  if (m.is_one()) {
    os << abs_coeff.get_str();
    return;
  }
  if (abs_coeff != 1) os << abs_coeff.get_str() << '*';
  print_monomial(os, m, table);
}

}  // namespace detail

inline std::string to_string(const LaurentPoly& p, const VarTable& table) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  const auto& ts = p.terms();
  bool first = true;
  std::size_t i = 0;
  while (i < ts.size()) {
    Monomial lm = ts[i].mono.laurent_part();
    std::size_t j = i + 1;
    while (j < ts.size() && ts[j].mono.laurent_part() == lm) ++j;

    if (j - i == 1) {
      // Single coefficient term: the sign goes into the joiner.
      const Term& t = ts[i];
      bool neg = t.coeff < 0;
      mpz_class a = abs(t.coeff);
      if (first)
        os << (neg ? "-" : "");
      else
        os << (neg ? " - " : " + ");
      Monomial pm = t.mono.param_part();
      if (pm.is_one()) {
        detail::print_scalar_term(os, a, lm, table);
      } else if (lm.is_one()) {
        detail::print_scalar_term(os, a, pm, table);
      } else {
        os << '(';
        detail::print_scalar_term(os, a, pm, table);
        os << ")*";
        detail::print_monomial(os, lm, table);
      }
    } else {
      os << (first ? "" : " + ") << '(';
      for (std::size_t k = i; k < j; ++k) {
        bool neg = ts[k].coeff < 0;
        if (k == i)
          os << (neg ? "-" : "");
        else
          os << (neg ? " - " : " + ");
        detail::print_scalar_term(os, abs(ts[k].coeff), ts[k].mono.param_part(), table);
      }
      os << ')';
      if (!lm.is_one()) {
        os << '*';
        detail::print_monomial(os, lm, table);
      }
    }
    first = false;
    i = j;
  }
  return os.str();
}

// Identifier with an optional bracketed integer index, e.g. `a` or `f[-2,0]`.
struct Symbol {
  std::string ident;
  std::optional<std::vector<long>> index;

  std::string text() const {
    if (!index) return ident;
    std::string s = ident + "[";
    for (std::size_t i = 0; i < index->size(); ++i) {
      if (i) s += ",";
      s += std::to_string((*index)[i]);
    }
    return s + "]";
  }
};

using SymbolResolver = std::function<Var(const Symbol&, std::size_t pos)>;

// Recursive-descent parser for `+ - * / ^`, parentheses, integers and symbols.
// Division must be exact in the Laurent ring (in practice: by monomials).
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, SymbolResolver resolve) : s_(text), resolve_(std::move(resolve)) {}

  LaurentPoly parse_all() {
    LaurentPoly p = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
    return p;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  LaurentPoly expr() {
    skip_ws();
    LaurentPoly acc;
    bool neg = false;
    if (accept('-'))
      neg = true;
    else
      accept('+');
    acc = term();
    if (neg) acc = -acc;
    while (true) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        break;
    }
    return acc;
  }

  LaurentPoly term() {
    LaurentPoly acc = factor();
    while (true) {
      skip_ws();
      std::size_t at = pos_;
      if (accept('*')) {
        acc *= factor();
      } else if (accept('/')) {
        LaurentPoly d = factor();
        if (d.is_zero()) throw ParseError("division by zero", at);
        DivResult r = exact_div(acc, d);
        if (auto* q = std::get_if<LaurentPoly>(&r))
          acc = std::move(*q);
        else
          throw ParseError("division is not exact in the Laurent ring (divide by monomials only)", at);
      } else {
        break;
      }
    }
    return acc;
  }

  LaurentPoly factor() {
    skip_ws();
    std::size_t at = pos_;
    if (accept('-')) return -factor();
    LaurentPoly base = primary();
    if (accept('^')) {
      skip_ws();
      long e = signed_int();
      if (e >= 0) return base.pow(static_cast<unsigned>(e));
      if (!base.is_monomial()) throw ParseError("negative power of a non-monomial", at);
      const Term& t = base.leading();
      if (t.mono.has_param() || abs(t.coeff) != 1)
        throw ParseError("negative power of a non-unit", at);
      return LaurentPoly::monomial(t.mono.pow(static_cast<Exponent>(e)), (e % 2 == 0) ? mpz_class(1) : t.coeff);
    }
    return base;
  }

  long signed_int() {
    skip_ws();
    std::size_t start = pos_;
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      throw ParseError("expected integer", start);
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_++] - '0');
      if (v > (1L << 40)) throw ParseError("integer too large", start);
    }
    return neg ? -v : v;
  }

  LaurentPoly primary() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      LaurentPoly p = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return LaurentPoly(mpz_class(std::string(s_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      Symbol sym{std::string(s_.substr(start, pos_ - start)), std::nullopt};
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '[') {
        ++pos_;
        std::vector<long> idx;
        if (!accept(']')) {
          do {
            idx.push_back(signed_int());
          } while (accept(','));
          if (!accept(']')) throw ParseError("expected ']'", pos_);
        }
        sym.index = std::move(idx);
      }
      return LaurentPoly::var(resolve_(sym, start));
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  std::string_view s_;
  SymbolResolver resolve_;
  std::size_t pos_ = 0;
};

// Parses against a table. Unknown names are rejected unless declare_new is
// set, in which case they become new Laurent variables.
inline LaurentPoly parse_poly(std::string_view text, VarTable& table, bool declare_new = false) {
  ExpressionParser parser(text, [&](const Symbol& s, std::size_t pos) -> Var {
    std::string name = s.text();
    if (auto v = table.find(name)) return *v;
    if (!declare_new) throw ParseError("unknown symbol '" + name + "'", pos);
    return table.add_variable(name);
  });
  return parser.parse_all();
}

}  // namespace laurentlab
