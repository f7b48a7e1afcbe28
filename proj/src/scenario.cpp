#include "bakry/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace bakry {

namespace {

struct Value {
  enum class Kind { String, Word, Number, Bool, List };
  Kind kind = Kind::Word;
  std::string text;
  double number = 0.0;
  bool flag = false;
  std::vector<Value> items;
  int line = 0;
  int column = 0;
};

struct Entry {
  Value value;
  int line = 0;
  int column = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

class Reader {
 public:
  Reader(std::string_view line, int lineno) : s_(line), line_(lineno) {}

  Value value() {
    skip();
    if (pos_ >= s_.size()) fail("missing value");
    Value v;
    v.line = line_;
    v.column = column();
    const char c = s_[pos_];
    if (c == '"') {
      ++pos_;
      const std::size_t end = s_.find('"', pos_);
      if (end == std::string_view::npos) fail("unterminated string");
      v.kind = Value::Kind::String;
      v.text = std::string(s_.substr(pos_, end - pos_));
      pos_ = end + 1;
      return v;
    }
    if (c == '[') {
      ++pos_;
      v.kind = Value::Kind::List;
      skip();
      if (peek() == ']') {
        ++pos_;
        return v;
      }
      while (true) {
        v.items.push_back(value());
        skip();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ']') {
          ++pos_;
          return v;
        }
        fail("expected ',' or ']' in list");
      }
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && !std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (pos_ == start) fail("unexpected character '" + std::string(1, c) + "'");
    v.text = std::string(s_.substr(start, pos_ - start));
    if (v.text == "true" || v.text == "false") {
      v.kind = Value::Kind::Bool;
      v.flag = v.text == "true";
      return v;
    }
    double d = 0.0;
    const auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), d);
    if (ec == std::errc() && ptr == v.text.data() + v.text.size()) {
      v.kind = Value::Kind::Number;
      v.number = d;
      return v;
    }
    for (char ch : v.text)
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-' && ch != '.')
        fail("bad bare word '" + v.text + "' (quote expressions)");
    v.kind = Value::Kind::Word;
    return v;
  }

  void expect_end() {
    skip();
    if (pos_ < s_.size()) fail("trailing characters after value");
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  int column() const { return static_cast<int>(offset_ + pos_) + 1; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, column(), what); }

 public:
  std::size_t offset_ = 0;

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
};

std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

std::map<std::string, Section> read_sections(std::string_view text) {
  static const std::set<std::string> known{"scenario", "manifold", "immersion", "mesh", "params", "checks",
                                           "tolerances", "sampling"};
  std::map<std::string, Section> out;
  Section* current = nullptr;
  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    const std::string line = strip_comment(text.substr(start, end - start));
    start = end + 1;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '[') {
      const auto close = line.find(']', first);
      if (close == std::string::npos) throw ParseError(lineno, static_cast<int>(first) + 1, "unterminated section header");
      const std::string name = line.substr(first + 1, close - first - 1);
      if (!known.count(name)) throw ParseError(lineno, static_cast<int>(first) + 2, "unknown section [" + name + "]");
      if (out.count(name)) throw ParseError(lineno, static_cast<int>(first) + 1, "duplicate section [" + name + "]");
      if (line.find_first_not_of(" \t\r", close + 1) != std::string::npos)
        throw ParseError(lineno, static_cast<int>(close) + 2, "trailing characters after section header");
      current = &out[name];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, static_cast<int>(first) + 1, "expected key = value");
    std::string key = line.substr(first, eq - first);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    if (key.empty()) throw ParseError(lineno, static_cast<int>(first) + 1, "empty key");
    for (char ch : key)
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '.')
        throw ParseError(lineno, static_cast<int>(first) + 1, "bad key '" + key + "'");
    if (!current) throw ParseError(lineno, static_cast<int>(first) + 1, "key outside of any section");
    if (current->count(key)) throw ParseError(lineno, static_cast<int>(first) + 1, "duplicate key '" + key + "'");
    const std::string rest = line.substr(eq + 1);
    Reader r(rest, lineno);
    r.offset_ = eq + 1;
    Entry e;
    e.value = r.value();
    r.expect_end();
    e.line = lineno;
    e.column = static_cast<int>(first) + 1;
    (*current)[key] = e;
  }
  return out;
}

// Typed access to one section with field names for error messages.
class Fields {
 public:
  Fields(std::string name, Section* s) : name_(std::move(name)), s_(s) {}

  bool has(const std::string& key) const { return s_ && s_->count(key); }

  const Value* find(const std::string& key) {
    if (!s_) return nullptr;
    auto it = s_->find(key);
    if (it == s_->end()) return nullptr;
    it->second.used = true;
    return &it->second.value;
  }

  const Value& need(const std::string& key) {
    const Value* v = find(key);
    if (!v) throw ValidationError(key, "missing in [" + name_ + "]");
    return *v;
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const Value* v = find(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::String && v->kind != Value::Kind::Word) throw ValidationError(key, "expected a string");
    return v->text;
  }

  std::string word(const std::string& key, const std::string& fallback) { return string(key, fallback); }

  double number(const std::string& key, double fallback) {
    const Value* v = find(key);
    if (!v) return fallback;
    return as_number(key, *v);
  }

  int integer(const std::string& key, int fallback) {
    const Value* v = find(key);
    if (!v) return fallback;
    return as_int(key, *v);
  }

  bool flag(const std::string& key, bool fallback) {
    const Value* v = find(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::Bool) throw ValidationError(key, "expected true or false");
    return v->flag;
  }

  std::vector<int> integers(const std::string& key, std::vector<int> fallback) {
    const Value* v = find(key);
    if (!v) return fallback;
    std::vector<int> out;
    for (const Value& item : list(key, *v)) out.push_back(as_int(key, item));
    return out;
  }

  void reject_unused() const {
    if (!s_) return;
    for (const auto& [key, e] : *s_)
      if (!e.used) throw ValidationError(key, "unknown key in [" + name_ + "]");
  }

  static double as_number(const std::string& key, const Value& v) {
    if (v.kind != Value::Kind::Number) throw ValidationError(key, "expected a number");
    return v.number;
  }

  static int as_int(const std::string& key, const Value& v) {
    const double d = as_number(key, v);
    if (d != std::floor(d) || std::abs(d) > 1e9) throw ValidationError(key, "expected an integer");
    return static_cast<int>(d);
  }

  static const std::vector<Value>& list(const std::string& key, const Value& v) {
    if (v.kind != Value::Kind::List) throw ValidationError(key, "expected a [list]");
    return v.items;
  }

 private:
  std::string name_;
  Section* s_;
};

Expr expression(const std::string& field, const Value& v, int dim) {
  if (v.kind == Value::Kind::Number) return Expr::number(v.number);
  if (v.kind != Value::Kind::String) throw ValidationError(field, "expected a quoted expression");
  // Column of the first character inside the quotes.
  const int base = v.column + 1;
  try {
    return parse(v.text, dim);
  } catch (const SyntaxError& e) {
    throw ParseError(v.line, base + static_cast<int>(e.offset()), field + ": " + e.what());
  } catch (const UnknownIdentifier& e) {
    throw ParseError(v.line, base + static_cast<int>(e.offset()), field + ": " + e.what());
  } catch (const DimensionMismatch& e) {
    throw ValidationError(field, e.what());
  }
}

double constant(const std::string& field, const Value& v) {
  if (v.kind == Value::Kind::Number) return v.number;
  const Expr e = expression(field, v, 1);
  if (!e.is_constant()) throw ValidationError(field, "must be a constant");
  return e.evaluate(std::span<const double>{});
}

std::vector<Expr> expressions(const std::string& field, const Value& v, int dim) {
  std::vector<Expr> out;
  if (v.kind == Value::Kind::List) {
    for (const Value& item : v.items) out.push_back(expression(field, item, dim));
  } else {
    out.push_back(expression(field, v, dim));
  }
  return out;
}

EndKind end_kind(const std::string& field, const Value& v) {
  if (v.kind == Value::Kind::Word && v.text == "boundary") return EndKind::Boundary;
  if (v.kind == Value::Kind::Word && v.text == "singular") return EndKind::Singular;
  throw ValidationError(field, "ends must be boundary or singular");
}

Domain read_domain(Fields& f, int dim) {
  Domain d;
  for (int a = 0; a < dim; ++a) {
    const std::string prefix = "x" + std::to_string(a + 1) + ".";
    Axis ax;
    const Value& range = f.need(prefix + "range");
    const auto& ends = Fields::list(prefix + "range", range);
    if (ends.size() != 2) throw ValidationError(prefix + "range", "expected [lo, hi]");
    ax.lo = constant(prefix + "range", ends[0]);
    ax.hi = constant(prefix + "range", ends[1]);
    if (!(ax.hi > ax.lo)) throw ValidationError(prefix + "range", "needs lo < hi");
    ax.periodic = f.flag(prefix + "periodic", false);
    if (const Value* e = f.find(prefix + "ends")) {
      const auto& kinds = Fields::list(prefix + "ends", *e);
      if (kinds.size() != 2) throw ValidationError(prefix + "ends", "expected [lo, hi]");
      if (ax.periodic) throw ValidationError(prefix + "ends", "a periodic axis has no ends");
      ax.lo_end = end_kind(prefix + "ends", kinds[0]);
      ax.hi_end = end_kind(prefix + "ends", kinds[1]);
    }
    d.axes.push_back(ax);
  }
  return d;
}

BoundaryCondition boundary_condition(const std::string& field, const std::string& s) {
  if (s == "dirichlet") return BoundaryCondition::Dirichlet;
  if (s == "neumann") return BoundaryCondition::Neumann;
  throw ValidationError(field, "expected dirichlet or neumann");
}

struct Need {
  bool manifold = false;
  bool immersion = false;
  bool bc = false, c = false, m = false, a = false;
  int functions = 0;  // 0: none, 1: chart expressions, 3: ambient expressions
  bool optional_functions = false;
  bool cells = false;
};

Need requirements(const std::string& check) {
  Need n;
  if (check == "thm1") n = {.manifold = true, .bc = true, .c = true};
  else if (check == "madu") n = {.manifold = true, .bc = true, .m = true, .a = true};
  else if (check == "corollary") n = {.manifold = true, .bc = true};
  else if (check == "bochner") n = {.manifold = true, .functions = 1};
  else if (check == "hessian_bound") n = {.manifold = true, .m = true, .functions = 1};
  else if (check == "reilly") n = {.manifold = true, .m = true, .functions = 1, .cells = true};
  else if (check == "h_minimality") n = {.immersion = true, .functions = 1, .optional_functions = true};
  else if (check == "stability") n = {.immersion = true};
  else if (check == "prop25") n = {.immersion = true, .functions = 1};
  else if (check == "splitting") n = {.immersion = true, .functions = 3};
  else if (check == "thm2") n = {.immersion = true, .c = true};
  return n;
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"thm1",          "madu",   "corollary", "bochner",
                                              "hessian_bound", "reilly", "h_minimality", "stability",
                                              "prop25",        "splitting", "thm2"};
  return names;
}

WeightedManifold Scenario::space() const {
  if (manifold) return *manifold;
  return induced_manifold(*immersion);
}

Scenario parse_scenario(std::string_view text) {
  auto sections = read_sections(text);
  auto section = [&](const std::string& name) -> Section* {
    auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
  };

  Scenario sc;
  Fields head("scenario", section("scenario"));
  sc.id = head.string("id", "");
  if (sc.id.empty()) throw ValidationError("id", "missing in [scenario]");
  sc.description = head.string("description", "");
  head.reject_unused();

  const bool has_manifold = section("manifold") != nullptr;
  const bool has_immersion = section("immersion") != nullptr;
  if (has_manifold == has_immersion) throw ValidationError("manifold", "give exactly one of [manifold] or [immersion]");

  int dim = 2;
  if (has_manifold) {
    Fields f("manifold", section("manifold"));
    dim = f.integer("dim", 0);
    if (dim != 1 && dim != 2) throw ValidationError("dim", "must be 1 or 2");
    Domain domain = read_domain(f, dim);
    const Value* mv = f.find("metric");
    if (!mv) throw ValidationError("metric", "missing in [manifold]");
    const auto comps = expressions("metric", *mv, dim);
    const std::size_t want = dim == 1 ? 1 : 3;
    if (comps.size() != want) throw ValidationError("metric", dim == 1 ? "expected [g11]" : "expected [g11, g12, g22]");
    ChartMetric metric{dim, {}};
    for (std::size_t i = 0; i < want; ++i) metric.components[i] = comps[i];
    const Value* wv = f.find("weight");
    if (!wv) throw ValidationError("weight", "missing in [manifold]");
    const Expr weight = expression("weight", *wv, dim);
    f.reject_unused();
    sc.manifold = WeightedManifold::from_expressions(std::move(domain), metric, weight);
    try {
      sc.manifold->validate();
    } catch (const Error& e) {
      throw ValidationError("metric", e.what());
    }
  } else {
    Fields f("immersion", section("immersion"));
    Immersion imm;
    imm.domain = read_domain(f, 2);
    const Value* mv = f.find("map");
    if (!mv) throw ValidationError("map", "missing in [immersion]");
    const auto comps = expressions("map", *mv, 2);
    if (comps.size() != 3) throw ValidationError("map", "expected three components");
    for (int i = 0; i < 3; ++i) imm.map[i] = comps[i];
    const Value* wv = f.find("ambient_weight");
    imm.ambient_weight = wv ? expression("ambient_weight", *wv, 3) : Expr::number(0.0);
    const std::string orient = f.word("orientation", "plus");
    if (orient != "plus" && orient != "minus") throw ValidationError("orientation", "expected plus or minus");
    imm.orientation = orient == "plus" ? Orientation::Plus : Orientation::Minus;
    imm.shape_sign = f.integer("shape_sign", 1);
    if (imm.shape_sign != 1 && imm.shape_sign != -1) throw ValidationError("shape_sign", "expected 1 or -1");
    f.reject_unused();
    sc.immersion = imm;
    try {
      induced_manifold(imm).validate();
    } catch (const Error& e) {
      throw ValidationError("map", e.what());
    }
  }

  Fields mesh("mesh", section("mesh"));
  sc.mesh.axisymmetric = mesh.flag("axisymmetric", false);
  sc.mesh.cells = mesh.integers("cells", std::vector<int>(sc.mesh.axisymmetric ? 1 : dim, 16));
  const std::size_t want_cells = sc.mesh.axisymmetric ? 1 : static_cast<std::size_t>(dim);
  if (sc.mesh.cells.size() != want_cells) throw ValidationError("cells", "expected " + std::to_string(want_cells) + " counts");
  for (int c : sc.mesh.cells)
    if (c < 1) throw ValidationError("cells", "counts must be positive");
  if (sc.mesh.axisymmetric && dim != 2) throw ValidationError("axisymmetric", "needs a 2D chart");
  sc.mesh.levels = mesh.integer("levels", 3);
  if (sc.mesh.levels < 2 || sc.mesh.levels > 8) throw ValidationError("levels", "must be between 2 and 8");
  sc.mesh.max_fourier_mode = mesh.integer("fourier_modes", 0);
  if (sc.mesh.max_fourier_mode < 0) throw ValidationError("fourier_modes", "must be non-negative");
  if (sc.mesh.max_fourier_mode > 0 && !sc.mesh.axisymmetric) throw ValidationError("fourier_modes", "needs axisymmetric = true");
  sc.mesh.quadrature_order = mesh.integer("quadrature", 4);
  if (sc.mesh.quadrature_order < 1 || sc.mesh.quadrature_order > 12) throw ValidationError("quadrature", "must be 1..12");
  const std::string method = mesh.word("eigensolver", "auto");
  if (method == "auto") sc.mesh.eigen.method = EigenMethod::Auto;
  else if (method == "dense") sc.mesh.eigen.method = EigenMethod::Dense;
  else if (method == "shift-invert") sc.mesh.eigen.method = EigenMethod::ShiftInvert;
  else throw ValidationError("eigensolver", "expected auto, dense or shift-invert");
  mesh.reject_unused();
  if (sc.mesh.axisymmetric) {
    try {
      build_axisymmetric_mesh(sc.space(), 4);
    } catch (const Error& e) {
      throw ValidationError("axisymmetric", e.what());
    }
  }

  Fields samp("sampling", section("sampling"));
  sc.plan.counts = samp.integers("counts", std::vector<int>(dim, dim == 1 ? 100 : 16));
  if (static_cast<int>(sc.plan.counts.size()) != dim) throw ValidationError("counts", "one count per chart axis");
  for (int c : sc.plan.counts)
    if (c < 1) throw ValidationError("counts", "counts must be positive");
  const std::string mode = samp.word("mode", "grid");
  if (mode == "grid") sc.plan.mode = SampleMode::Grid;
  else if (mode == "halton") sc.plan.mode = SampleMode::LowDiscrepancy;
  else throw ValidationError("mode", "expected grid or halton");
  sc.plan.inset = samp.number("inset", 1e-3);
  if (!(sc.plan.inset > 0.0 && sc.plan.inset < 0.5)) throw ValidationError("inset", "must lie in (0, 0.5)");
  samp.reject_unused();

  Fields tol("tolerances", section("tolerances"));
  auto positive = [&](const char* key, double fallback) {
    const double v = tol.number(key, fallback);
    if (!(v > 0.0)) throw ValidationError(key, "tolerance must be positive");
    return v;
  };
  sc.tolerances.hypothesis = positive("hypothesis", sc.tolerances.hypothesis);
  sc.tolerances.bochner = positive("bochner", sc.tolerances.bochner);
  sc.tolerances.hessian_bound = positive("hessian_bound", sc.tolerances.hessian_bound);
  sc.tolerances.reilly = positive("reilly", sc.tolerances.reilly);
  sc.tolerances.identity = positive("identity", sc.tolerances.identity);
  sc.tolerances.h_minimality = positive("h_minimality", sc.tolerances.h_minimality);
  sc.tolerances.splitting = positive("splitting", sc.tolerances.splitting);
  sc.tolerances.quadratic_form = positive("quadratic_form", sc.tolerances.quadratic_form);
  sc.mesh.eigen.tol = positive("eigen", sc.mesh.eigen.tol);
  tol.reject_unused();

  Fields params("params", section("params"));
  Fields checks("checks", section("checks"));
  const Value* run = checks.find("run");
  if (!run) throw ValidationError("run", "missing in [checks]");
  std::set<std::string> seen;
  for (const Value& item : Fields::list("run", *run)) {
    if (item.kind != Value::Kind::Word) throw ValidationError("run", "check names are bare words");
    const auto& names = known_checks();
    if (std::find(names.begin(), names.end(), item.text) == names.end())
      throw ValidationError("run", "unknown check '" + item.text + "'");
    if (!seen.insert(item.text).second) throw ValidationError("run", "check '" + item.text + "' listed twice");
    const Need need = requirements(item.text);
    if (need.manifold && !sc.manifold) throw ValidationError(item.text, "needs a [manifold] section");
    if (need.immersion && !sc.immersion) throw ValidationError(item.text, "needs an [immersion] section");

    CheckSpec spec;
    spec.name = item.text;
    const std::string p = item.text + ".";
    auto param = [&](const std::string& key) {
      const Value* v = checks.find(p + key);
      if (!v) v = params.find(key);
      if (!v) throw ValidationError(p + key, "missing (set it in [checks] or [params])");
      return Fields::as_number(p + key, *v);
    };
    if (need.bc) {
      const Value* v = checks.find(p + "bc");
      if (!v) throw ValidationError(p + "bc", "missing in [checks]");
      spec.bc = boundary_condition(p + "bc", v->text);
    }
    if (need.c) spec.c = param("c");
    if (need.m) spec.m = param("m");
    if (need.a) spec.a = param("a");
    if (need.functions) {
      const Value* v = checks.find(p + "f");
      if (!v && !need.optional_functions) throw ValidationError(p + "f", "missing in [checks]");
      if (v) spec.functions = expressions(p + "f", *v, need.functions == 3 ? 3 : dim);
      if (v && spec.functions.empty()) throw ValidationError(p + "f", "needs at least one function");
    }
    if (need.cells) {
      spec.cells = checks.integers(p + "cells", std::vector<int>(dim, 32));
      if (static_cast<int>(spec.cells.size()) != dim) throw ValidationError(p + "cells", "one count per chart axis");
    }
    if (spec.name == "thm1" && !(spec.c > 0.0)) throw ValidationError(p + "c", "must be positive");
    if (spec.name == "thm2" && !(spec.c > 0.0)) throw ValidationError(p + "c", "must be positive");
    if (need.m && !(spec.m > dim)) throw ValidationError(p + "m", "must exceed the dimension");
    if (need.a && !(spec.a > 0.0)) throw ValidationError(p + "a", "must be positive");
    if (spec.name == "corollary" && !sc.manifold->fields().weight_is_constant())
      throw ValidationError("corollary", "needs a constant weight");
    sc.checks.push_back(std::move(spec));
  }
  checks.reject_unused();
  // Unused [params] entries are allowed: several checks may share them.
  return sc;
}

Scenario load_scenario(const std::string& path_or_id) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_regular_file(path_or_id, ec)) {
    std::ifstream in(path_or_id, std::ios::binary);
    if (!in) throw ValidationError("path", "cannot read " + path_or_id);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
  }
  for (const CatalogEntry& e : catalog())
    if (e.id == path_or_id) return parse_scenario(e.text);
  throw ValidationError("path", "no such file or catalog scenario: " + path_or_id);
}

std::string catalog_listing() {
  std::ostringstream os;
  for (const CatalogEntry& e : catalog()) {
    const Scenario sc = parse_scenario(e.text);
    os << sc.id << ": checks = [";
    for (std::size_t i = 0; i < sc.checks.size(); ++i) os << (i ? ", " : "") << sc.checks[i].name;
    os << "]\n";
  }
  return os.str();
}

}  // namespace bakry
