#pragma once

// Spinor norms of Pfister forms and reduced norms of quaternion algebras.

#include "wittforge/witt.hpp"

namespace wittforge {

/// a lies in Sn(<<a_1..a_d>>) iff <<a_1, ..., a_d, a>> is hyperbolic.
inline bool spinor_norm_member(const FieldDesc& k, const PfisterSpec& spec, const Element& a) {
  require(!a.is_zero(), ErrorCode::ZeroElement, "spinor norm of zero");
  std::vector<Element> slots;
  for (auto& s : spec.slots) slots.push_back(in_field(k, s));
  slots.push_back(in_field(k, a));
  if (slots.size() <= 3) return is_trivial_or_throw(single(k, cup(k, slots)));
  return is_hyperbolic(pfister(k, PfisterSpec{slots}));
}

/// x is a reduced norm of (a, b)_Q iff <1, -a, -b, ab, -x> is isotropic.
inline bool reduced_norm_member(const Element& a, const Element& b, const Element& x) {
  for (const Element* e : {&a, &b, &x}) {
    require(e->holds<Rational>(), ErrorCode::UnsupportedField, "reduced norms are decided over Q only");
    require(!e->is_zero(), ErrorCode::ZeroElement, "zero argument to reduced_norm_member");
  }
  FieldDesc q = FieldDesc::rationals();
  return is_isotropic(make_form(q, {Element(1), -a, -b, a * b, -x}));
}

}  // namespace wittforge
