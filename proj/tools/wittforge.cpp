// Command-line front end: reads forms, symbols and catalogs as JSON and
// prints JSON reports (or a plain table with --pretty).

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "wittforge/wittforge.hpp"

namespace {

using namespace wittforge;
using io::json;

enum Exit { kOk = 0, kUsage = 2, kData = 3, kUndecided = 4, kInvariant = 5 };

struct Options {
  std::string field = "Q";
  std::string vset, place, catalog, form, symbol, spec, element, a, b, x, h1, h2, base;
  long long n = 0;
  bool pretty = false;
  bool allow_undecided = false;
  unsigned jobs = 1;
};

/// Raised when the report is complete but contains an Undecided or Refused outcome.
struct Incomplete {
  json report;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::InvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FieldDesc field_of(const Options& o) { return parse_field(o.field); }

ValuationSet vset_of(const Options& o, const std::optional<io::Catalog>& cat = std::nullopt) {
  if (!o.vset.empty()) return io::vset_from_json(io::parse(o.vset), cat ? cat->field : field_of(o));
  require(cat && cat->vset, ErrorCode::InvalidArgument, "a valuation set is required (--vset or catalog \"vset\")");
  return *cat->vset;
}

io::Catalog catalog_of(const Options& o) {
  require(!o.catalog.empty(), ErrorCode::InvalidArgument, "--catalog is required");
  return io::catalog_from_json(io::parse(slurp(o.catalog)));
}

const std::string& need(const std::string& value, const char* flag) {
  require(!value.empty(), ErrorCode::InvalidArgument, std::string(flag) + " is required");
  return value;
}

/// Applies f to 0..n-1 on up to `jobs` threads; results keep index order.
template <class F>
auto parallel_map(std::size_t n, unsigned jobs, F f) {
  using R = decltype(f(std::size_t{0}));
  std::vector<std::optional<R>> out(n);
  std::vector<std::exception_ptr> errors(n);
  unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          out[i] = f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> res;
  for (auto& r : out) res.push_back(std::move(*r));
  return res;
}

// ---------------------------------------------------------------------------
// Subcommands

json cmd_residue(const Options& o) {
  FieldDesc k = field_of(o);
  Place v = io::place_from_json(k, io::parse(need(o.place, "--place")));
  if (!o.symbol.empty()) {
    SymbolSum s = io::symbol_sum_from_json(k, io::parse(o.symbol));
    SymbolSum r = symbol_residue(k, v, s);
    json out{{"place", io::to_json(k, v)}, {"symbol", io::to_json(s)}, {"residue", io::to_json(r)}};
    if (r.symbols.size() == 1) {
      json slots = json::array();
      for (auto& a : r.symbols[0].slots) slots.push_back(json::array({format(r.field, a)}));
      out["residue_slots"] = slots;
    }
    return out;
  }
  QForm q = io::form_from_json(k, io::parse(need(o.form, "--form or --symbol")));
  ResidueSplit rs = residue_split(k, v, q);
  return {{"place", io::to_json(k, v)},
          {"form", io::to_json(q)},
          {"residue_field", to_string(rs.first.field)},
          {"uniformizer", format(k, rs.scaling_used)},
          {"first", io::to_json(rs.first)},
          {"second", io::to_json(rs.second)}};
}

json cmd_profile(const Options& o) {
  std::vector<QForm> forms;
  std::vector<std::string> ids;
  std::optional<io::Catalog> cat;
  if (!o.catalog.empty()) {
    cat = catalog_of(o);
    forms = cat->quadratic();
    ids = cat->ids_of("quadratic");
  } else {
    forms.push_back(io::form_from_json(field_of(o), io::parse(need(o.form, "--form or --catalog"))));
    ids.push_back("form");
  }
  ValuationSet vs = vset_of(o, cat);
  auto reports = parallel_map(forms.size(), o.jobs, [&](std::size_t i) { return reduction_profile(vs, forms[i], ids[i]); });
  json arr = json::array();
  bool refused = false;
  for (auto& r : reports) {
    arr.push_back(io::to_json(r));
    refused = refused || r.any(ReductionVerdict::Status::Refused);
  }
  json out{{"reports", arr}};
  if (refused) throw Incomplete{out};
  return out;
}

json cmd_classify(const Options& o) {
  io::Catalog cat = catalog_of(o);
  Classification c = classify_similarity(vset_of(o, cat), cat.quadratic(), cat.ids_of("quadratic"));
  json out = io::to_json(c);
  require(c.bound_ok(), ErrorCode::InternalInvariant, "class count exceeds the certified bound: " + out.dump());
  return out;
}

json cmd_fiber(const Options& o) {
  io::Catalog cat = catalog_of(o);
  std::optional<QForm> base = cat.base;
  if (!o.base.empty()) base = io::form_from_json(cat.field, io::parse(o.base));
  require(base.has_value(), ErrorCode::InvalidArgument, "fiber needs a base form (--base or catalog \"base\")");
  Classification c = fiber_classify(vset_of(o, cat), *base, cat.quadratic(), cat.ids_of("quadratic"));
  json out = io::to_json(c);
  require(c.bound_ok(), ErrorCode::InternalInvariant, "class count exceeds the certified bound: " + out.dump());
  return out;
}

json cmd_pic(const Options& o) { return io::to_json(pic(vset_of(o))); }

json cmd_bound(const Options& o) {
  require(o.n >= 1, ErrorCode::InvalidArgument, "--n must be positive");
  ValuationSet vs = vset_of(o);
  UnramifiedGroupTable t = unramified_table(vs, o.n);
  json out{{"table", io::to_json(t)}, {"ell", ell(o.n)}};
  out["sieve_bound"] = sieve_bound(vs, o.n);
  try {
    out["fiber_bound"] = fiber_bound(vs, o.n);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnsupportedConfiguration) throw;
    out["fiber_bound"] = nullptr;
  }
  return out;
}

json cmd_symbol(const Options& o) {
  FieldDesc k = field_of(o);
  SymbolSum s = io::symbol_sum_from_json(k, io::parse(need(o.symbol, "--symbol")));
  json out{{"symbol", io::to_json(s)}};
  std::optional<bool> t;
  if (!o.place.empty()) {
    Place v = io::place_from_json(k, io::parse(o.place));
    out["place"] = io::to_json(k, v);
    t = is_trivial_local(v, s);
    if (!v.archimedean() && k.is_function_field()) out["residue"] = io::to_json(symbol_residue(k, v, s));
  } else {
    t = is_trivial(s);
  }
  out["trivial"] = t ? json(*t) : json("undecided");
  if (!t) throw Incomplete{out};
  return out;
}

json cmd_g2_genus(const Options& o) {
  io::Catalog cat = catalog_of(o);
  GenusReport r = genus_obstruction(cat.octonion(), vset_of(o, cat));
  json out = io::to_json(r, cat.field, cat.ids_of("octonion"));
  if (!r.undecided.empty()) throw Incomplete{out};
  return out;
}

json cmd_hermitian_eq(const Options& o) {
  FieldDesc k = field_of(o);
  HermitianForm h1 = io::hermitian_from_json(k, io::parse(need(o.h1, "--h1")));
  HermitianForm h2 = io::hermitian_from_json(k, io::parse(need(o.h2, "--h2")));
  return {{"h1", io::to_json(h1)},
          {"h2", io::to_json(h2)},
          {"transfer1", io::to_json(transfer(h1))},
          {"transfer2", io::to_json(transfer(h2))},
          {"equivalent", hermitian_equivalent(h1, h2)}};
}

json cmd_spinor_norm(const Options& o) {
  FieldDesc k = field_of(o);
  PfisterSpec spec = io::pfister_from_json(k, io::parse(need(o.spec, "--spec")));
  Element a = parse_element(k, need(o.element, "--element"));
  return {{"spec", io::to_json(QForm{k, spec.slots})}, {"element", format(k, a)},
          {"member", spinor_norm_member(k, spec, a)}};
}

json cmd_nrd(const Options& o) {
  FieldDesc k = field_of(o);
  require(k.kind == FieldDesc::Kind::Rationals, ErrorCode::UnsupportedField, "nrd is decided over Q only");
  Element a = parse_element(k, need(o.a, "--a")), b = parse_element(k, need(o.b, "--b")),
          x = parse_element(k, need(o.x, "--x"));
  return {{"a", format(k, a)}, {"b", format(k, b)}, {"x", format(k, x)}, {"member", reduced_norm_member(a, b, x)}};
}

// ---------------------------------------------------------------------------
// Output

void pretty(std::ostream& os, const json& j, const std::string& indent = "") {
  if (j.is_object()) {
    for (auto& [key, val] : j.items()) {
      if (val.is_structured() && !(val.is_array() && std::all_of(val.begin(), val.end(), [](auto& e) { return e.is_primitive(); }))) {
        os << indent << key << ":\n";
        pretty(os, val, indent + "  ");
      } else {
        os << indent << key << ": " << (val.is_string() ? val.get<std::string>() : val.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (auto& e : j) {
      if (e.is_object()) {
        os << indent << "-\n";
        pretty(os, e, indent + "  ");
      } else {
        os << indent << "- " << (e.is_string() ? e.get<std::string>() : e.dump()) << "\n";
      }
    }
  } else {
    os << indent << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const Options& o, const json& j) {
  if (o.pretty)
    pretty(std::cout, j);
  else
    std::cout << j.dump() << "\n";
}

int exit_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::Undecided:
    case ErrorCode::InvariantUndecided:
    case ErrorCode::UnsupportedField: return kUndecided;
    case ErrorCode::InternalInvariant: return kInvariant;
    default: return kData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wittforge: quadratic forms, symbols and good reduction over global fields"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--field", o.field, "field: Q, F_p, Q(sqrt(m)), Q(t), F_p(t)");
  app.add_option("--vset", o.vset, "valuation set as JSON");
  app.add_option("--place", o.place, "place as JSON");
  app.add_option("--catalog", o.catalog, "catalog file (JSON)");
  app.add_flag("--pretty", o.pretty, "human-readable output");
  app.add_flag("--allow-undecided", o.allow_undecided, "exit 0 on undecided or refused outcomes");
  app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1u, 256u));
  app.fallthrough();

  std::vector<std::pair<CLI::App*, json (*)(const Options&)>> subs;
  auto sub = [&](const char* name, const char* help, json (*fn)(const Options&)) {
    CLI::App* s = app.add_subcommand(name, help);
    subs.push_back({s, fn});
    return s;
  };
  auto* residue = sub("residue", "first/second residue of a form, or tame residue of a symbol", cmd_residue);
  residue->add_option("--form", o.form, "diagonal form as a JSON array");
  residue->add_option("--symbol", o.symbol, "symbol or symbol sum as JSON");
  sub("profile", "reduction profile of forms along V", cmd_profile)->add_option("--form", o.form, "diagonal form");
  sub("classify", "similarity classification of a catalog", cmd_classify);
  sub("fiber", "classes in a local-global fiber", cmd_fiber)->add_option("--base", o.base, "base form");
  sub("pic", "Pic(V) report", cmd_pic);
  sub("bound", "unramified table and sieve bound", cmd_bound)->add_option("--n", o.n, "dimension")->required();
  sub("symbol", "triviality of a symbol sum, globally or at --place", cmd_symbol)
      ->add_option("--symbol", o.symbol, "symbol or symbol sum as JSON");
  sub("g2-genus", "genus obstruction for octonion algebras", cmd_g2_genus);
  auto* heq = sub("hermitian-eq", "equivalence of hermitian forms", cmd_hermitian_eq);
  heq->add_option("--h1", o.h1, "hermitian form JSON");
  heq->add_option("--h2", o.h2, "hermitian form JSON");
  auto* sn = sub("spinor-norm", "spinor norm membership for a Pfister form", cmd_spinor_norm);
  sn->add_option("--spec", o.spec, "Pfister slots as a JSON array");
  sn->add_option("--element", o.element, "element to test");
  auto* nrd = sub("nrd", "reduced norm membership for (a, b)_Q", cmd_nrd);
  nrd->add_option("--a", o.a, "first slot");
  nrd->add_option("--b", o.b, "second slot");
  nrd->add_option("--x", o.x, "element to test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  for (auto& [s, fn] : subs) {
    if (!s->parsed()) continue;
    try {
      emit(o, fn(o));
      return kOk;
    } catch (const Incomplete& inc) {
      emit(o, inc.report);
      return o.allow_undecided ? kOk : kUndecided;
    } catch (const Error& e) {
      int rc = exit_for(e.code());
      if (rc == kUndecided && o.allow_undecided) {
        emit(o, json{{"undecided", e.what()}, {"code", to_string(e.code())}});
        return kOk;
      }
      std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
      return rc;
    }
  }
  return kUsage;
}
