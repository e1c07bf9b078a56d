#pragma once

// Hermitian forms over a quadratic extension L = K(sqrt delta) and their
// transfer to 2n-dimensional quadratic forms over K.

#include <string>
#include <vector>

#include "wittforge/witt.hpp"

namespace wittforge {

struct QuadExt {
  FieldDesc base;
  Element delta;

  static QuadExt make(const FieldDesc& k, const Element& d) {
    require(!d.is_zero(), ErrorCode::ZeroElement, "L = K(sqrt 0) is not a field");
    Element dd = in_field(k, d);
    require(!is_square(k, dd), ErrorCode::InvalidArgument, "delta is a square; L/K would be split");
    return {k, dd};
  }

  /// Same extension: equal base field and delta in the same square class.
  bool same_as(const QuadExt& o) const { return base == o.base && square_class_equal(base, delta, o.delta); }
};

/// Diagonal hermitian form <c_1, ..., c_n> with c_i in K.
struct HermitianForm {
  QuadExt ext;
  std::vector<Element> entries;

  int dim() const { return static_cast<int>(entries.size()); }
};

inline HermitianForm make_hermitian(const QuadExt& l, const std::vector<Element>& entries) {
  require(!entries.empty(), ErrorCode::InvalidArgument, "hermitian form needs n >= 1");
  HermitianForm h{l, {}};
  for (auto& c : entries) {
    require(!c.is_zero(), ErrorCode::ZeroElement, "zero hermitian entry");
    h.entries.push_back(in_field(l.base, c));
  }
  return h;
}

/// q_h = <c_1, -delta c_1, ..., c_n, -delta c_n>.
inline QForm transfer(const HermitianForm& h) {
  QForm q{h.ext.base, {}};
  for (auto& c : h.entries) {
    q.entries.push_back(c);
    q.entries.push_back(-(h.ext.delta * c));
  }
  return q;
}

inline bool hermitian_equivalent(const HermitianForm& a, const HermitianForm& b) {
  require(a.ext.same_as(b.ext), ErrorCode::ExtensionMismatch, "hermitian forms over different extensions");
  require(a.dim() == b.dim(), ErrorCode::DimensionMismatch, "hermitian forms of different dimensions");
  return witt_equivalent(transfer(a), transfer(b));
}

inline HermitianForm hermitian_sum(const HermitianForm& a, const HermitianForm& b) {
  require(a.ext.same_as(b.ext), ErrorCode::ExtensionMismatch, "hermitian forms over different extensions");
  HermitianForm out = a;
  out.entries.insert(out.entries.end(), b.entries.begin(), b.entries.end());
  return out;
}

inline HermitianForm hermitian_scale(const Element& lambda, const HermitianForm& h) {
  require(!lambda.is_zero(), ErrorCode::ZeroScalar, "scaling by zero");
  HermitianForm out{h.ext, {}};
  for (auto& c : h.entries) out.entries.push_back(in_field(h.ext.base, lambda) * c);
  return out;
}

// ---------------------------------------------------------------------------
// Elements of L = K[x]/(x^2 - delta) and Gram matrix ingestion

/// x + y sqrt(delta).
struct LElem {
  Element x, y;
};

namespace detail {

inline LElem l_add(const LElem& a, const LElem& b) { return {a.x + b.x, a.y + b.y}; }
inline LElem l_sub(const LElem& a, const LElem& b) { return {a.x - b.x, a.y - b.y}; }
inline LElem l_mul(const QuadExt& l, const LElem& a, const LElem& b) {
  return {a.x * b.x + l.delta * a.y * b.y, a.x * b.y + a.y * b.x};
}
inline LElem l_conj(const LElem& a) { return {a.x, -a.y}; }
inline Element l_norm(const QuadExt& l, const LElem& a) { return a.x * a.x - l.delta * a.y * a.y; }
inline LElem l_inv(const QuadExt& l, const LElem& a) {
  Element n = l_norm(l, a);
  require(!n.is_zero(), ErrorCode::ZeroElement, "inverse of zero in L");
  return {a.x / n, -(a.y / n)};
}
inline bool l_zero(const LElem& a) { return a.x.is_zero() && a.y.is_zero(); }

}  // namespace detail

/// Diagonalizes a nondegenerate hermitian Gram matrix H (H_ji = conj H_ij).
inline HermitianForm diagonalize_hermitian(const QuadExt& l, std::vector<std::vector<LElem>> g) {
  using namespace detail;
  const FieldDesc& k = l.base;
  std::size_t n = g.size();
  for (auto& row : g) {
    require(row.size() == n, ErrorCode::DimensionMismatch, "Gram matrix is not square");
    for (auto& e : row) e = {in_field(k, e.x), in_field(k, e.y)};
  }
  for (std::size_t i = 0; i < n; ++i) {
    require(g[i][i].y.is_zero(), ErrorCode::InvalidArgument, "hermitian diagonal must lie in K");
    for (std::size_t j = 0; j < n; ++j) {
      LElem c = l_conj(g[j][i]);
      require(g[i][j].x == c.x && g[i][j].y == c.y, ErrorCode::InvalidArgument, "Gram matrix is not hermitian");
    }
  }
  std::vector<Element> diag;
  while (!g.empty()) {
    std::size_t m = g.size();
    std::size_t s = m;
    for (std::size_t i = 0; i < m; ++i)
      if (!l_zero(g[i][i])) {
        s = i;
        break;
      }
    if (s == m) {
      // All diagonal entries vanish: replace e_0 by e_0 + c e_j with h(e_0 + c e_j) = Tr(c h_j0) != 0.
      std::size_t j = 1;
      while (j < m && l_zero(g[0][j])) ++j;
      require(j < m, ErrorCode::InvalidArgument, "degenerate hermitian Gram matrix");
      LElem c{from_int(k, 1), from_int(k, 0)};
      if (l_mul(l, c, g[j][0]).x.is_zero()) c = {from_int(k, 0), from_int(k, 1)};
      // row_0 += conj(c) row_j ; col_0 += c col_j
      for (std::size_t t = 0; t < m; ++t) g[0][t] = l_add(g[0][t], l_mul(l, l_conj(c), g[j][t]));
      for (std::size_t t = 0; t < m; ++t) g[t][0] = l_add(g[t][0], l_mul(l, g[t][j], c));
      s = 0;
    }
    LElem d = g[s][s];
    diag.push_back(d.x);
    LElem dinv = l_inv(l, d);
    std::vector<std::vector<LElem>> next;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == s) continue;
      std::vector<LElem> row;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == s) continue;
        row.push_back(l_sub(g[i][j], l_mul(l, l_mul(l, g[i][s], dinv), g[s][j])));
      }
      next.push_back(std::move(row));
    }
    g = std::move(next);
  }
  return make_hermitian(l, diag);
}

}  // namespace wittforge
