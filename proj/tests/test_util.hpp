#pragma once

#include <string>

#include "laurentlab/text.hpp"

namespace laurentlab::testing {

// Table with Laurent variables f0..f<n-1> and parameters a, b.
inline VarTable make_table(int n = 12) {
  VarTable t;
  for (int i = 0; i < n; ++i) t.add_variable("f" + std::to_string(i));
  t.add_param("a");
  t.add_param("b");
  return t;
}

inline LaurentPoly P(const std::string& s, VarTable& t) { return parse_poly(s, t); }

}  // namespace laurentlab::testing

#include "laurentlab/equation.hpp"

namespace laurentlab::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(LAURENTLAB_SOURCE_DIR) + "/equations/" + name + ".eq";
}

inline EquationDef fixture(const std::string& name) { return load_equation(fixture_path(name)); }

}  // namespace laurentlab::testing
