#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "wittforge/wittforge.hpp"

namespace wittforge {

inline void PrintTo(const Element& a, std::ostream* os) { *os << to_string(a); }
inline void PrintTo(const QForm& q, std::ostream* os) { *os << to_string(q); }
inline void PrintTo(const Place& v, std::ostream* os) { *os << to_string(v); }
inline void PrintTo(const FieldDesc& k, std::ostream* os) { *os << to_string(k); }

}  // namespace wittforge

namespace th {

using namespace wittforge;

inline const FieldDesc Q = FieldDesc::rationals();
inline const FieldDesc Qt = FieldDesc::function_field(0);

inline Element qt(const std::string& s) { return parse_element(Qt, s); }
inline Place at(const std::string& poly) { return Place::irreducible(parse_qpoly(poly)); }
inline QForm qf(const std::vector<Element>& e) { return make_form(Q, e); }

inline std::vector<Rational> rats(const QForm& q) {
  std::vector<Rational> out;
  for (auto& a : q.entries) out.push_back(a.as<Rational>());
  return out;
}

inline std::vector<Rational> rats(const std::vector<long long>& v) { return {v.begin(), v.end()}; }

/// Same class in H^d: the sum is trivial.
inline bool same_class(const SymbolSum& a, const SymbolSum& b) { return is_trivial_or_throw(add(a, b)); }

}  // namespace th
