#pragma once

// Orders of the unramified groups H^i(K, mu_2)_V and of Pic(V)/2Pic(V) for
// certified (K, V) configurations, read from a versioned data file.

#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wittforge/divisorial.hpp"

namespace wittforge {

struct UnramifiedGroupTable {
  ValuationSet vset;
  int n = 0;
  int ell = 0;
  long long d0 = 1;
  std::vector<std::optional<long long>> d;      ///< d[i-1] = |H^i(K, mu_2)_V|, i = 1..ell
  std::vector<std::optional<long long>> omega;  ///< kernels of localization along V
  std::vector<std::string> provenance;
};

/// floor(log2 n) + 1.
inline int ell(long long n) {
  require(n >= 1, ErrorCode::InvalidArgument, "ell needs n >= 1");
  int l = 0;
  while ((n >> l) > 1) ++l;
  return l + 1;
}

/// Path of the table file: $WITTFORGE_TABLE_PATH, else the build-time default.
inline std::string unramified_table_path() {
  if (const char* env = std::getenv("WITTFORGE_TABLE_PATH"); env && *env) return env;
#ifdef WITTFORGE_DEFAULT_TABLE_PATH
  return WITTFORGE_DEFAULT_TABLE_PATH;
#else
  fail(ErrorCode::UnsupportedConfiguration, "no unramified table: set WITTFORGE_TABLE_PATH");
#endif
}

namespace detail {

inline const nlohmann::json& table_document() {
  static const nlohmann::json doc = [] {
    std::string path = unramified_table_path();
    std::ifstream in(path);
    require(in.good(), ErrorCode::UnsupportedConfiguration, "cannot open unramified table " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::ParseError, "unramified table: " + std::string(e.what()));
    }
    require(j.value("schema", "") == "wittforge-unramified-table" && j.value("version", 0) == 1,
            ErrorCode::UnsupportedConfiguration, "unrecognized unramified table schema");
    return j;
  }();
  return doc;
}

inline bool entry_matches(const nlohmann::json& e, const ValuationSet& vs) {
  const FieldDesc& k = vs.field;
  std::string field = e.at("field").get<std::string>();
  bool field_ok = (field == "Q" && k.kind == FieldDesc::Kind::Rationals) ||
                  (field == "Q(t)" && k.is_function_field() && k.p == 0);
  if (!field_ok) return false;
  const auto& v = e.at("vset");
  if (v.at("kind").get<std::string>() != to_string(vs.kind)) return false;
  std::vector<Integer> s;
  if (v.contains("S"))
    for (auto& p : v.at("S")) s.push_back(Integer(p.get<long long>()));
  return s == vs.excluded;
}

inline std::optional<long long> order_at(const nlohmann::json& e, const char* list, const char* tail, int i) {
  const auto& l = e.at(list);
  const nlohmann::json* x = i <= static_cast<int>(l.size()) ? &l.at(i - 1) : &e.at(tail);
  if (x->is_null()) return std::nullopt;
  return x->get<long long>();
}

}  // namespace detail

/// d_0, ..., d_ell and the kernel orders for forms of dimension n.
inline UnramifiedGroupTable unramified_table(const ValuationSet& vs, long long n) {
  const auto& doc = detail::table_document();
  for (auto& e : doc.at("entries")) {
    if (!detail::entry_matches(e, vs)) continue;
    UnramifiedGroupTable t{vs, static_cast<int>(n), ell(n), e.at("pic2").get<long long>(), {}, {}, {}};
    for (int i = 1; i <= t.ell; ++i) {
      t.d.push_back(detail::order_at(e, "orders", "orders_tail", i));
      t.omega.push_back(detail::order_at(e, "kernel_orders", "kernel_tail", i));
    }
    for (auto& [key, val] : e.at("provenance").items()) t.provenance.push_back(key + ": " + val.get<std::string>());
    return t;
  }
  fail(ErrorCode::UnsupportedConfiguration, "no certified table entry for " + to_string(vs));
}

/// d_0 d_1 ... d_ell.
inline long long sieve_bound(const ValuationSet& vs, long long n) {
  UnramifiedGroupTable t = unramified_table(vs, n);
  long long b = t.d0;
  for (int i = 0; i < t.ell; ++i) {
    require(t.d[i].has_value(), ErrorCode::UnsupportedConfiguration,
            "H^" + std::to_string(i + 1) + " order not certified for " + to_string(vs));
    b *= *t.d[i];
  }
  return b;
}

/// omega_1 ... omega_ell.
inline long long fiber_bound(const ValuationSet& vs, long long n) {
  UnramifiedGroupTable t = unramified_table(vs, n);
  long long b = 1;
  for (int i = 0; i < t.ell; ++i) {
    require(t.omega[i].has_value(), ErrorCode::UnsupportedConfiguration,
            "kernel order " + std::to_string(i + 1) + " not certified for " + to_string(vs));
    b *= *t.omega[i];
  }
  return b;
}

}  // namespace wittforge
