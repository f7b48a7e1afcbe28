#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bakry/errors.hpp"
#include "bakry/hypersurface.hpp"
#include "bakry/verify.hpp"

namespace bakry {

/// Malformed scenario text or a malformed expression inside it.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Well-formed text describing an unusable scenario; `field` names the culprit.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A requested check with its options resolved against [params].
struct CheckSpec {
  std::string name;
  BoundaryCondition bc = BoundaryCondition::None;
  double c = std::numeric_limits<double>::quiet_NaN();
  double m = std::numeric_limits<double>::quiet_NaN();
  double a = std::numeric_limits<double>::quiet_NaN();
  /// Test functions (chart expressions; ambient ones for `splitting`).
  std::vector<Expr> functions;
  /// Full chart mesh for integral checks.
  std::vector<int> cells;
};

struct Tolerances {
  double hypothesis = 1e-9;
  double bochner = 1e-7;
  double hessian_bound = 1e-12;
  double reilly = 1e-6;
  double identity = 1e-8;
  double h_minimality = 1e-10;
  double splitting = 1e-8;
  /// Relative agreement of the two routes to the stability form.
  double quadratic_form = 1e-9;
};

struct Scenario {
  std::string id;
  std::string description;
  /// Exactly one of these is set.
  std::optional<WeightedManifold> manifold;
  std::optional<Immersion> immersion;
  MeshSpec mesh;
  std::vector<CheckSpec> checks;
  Tolerances tolerances;
  SamplePlan plan;

  /// The manifold itself, or the one induced by the immersion.
  WeightedManifold space() const;
};

/// Parses and validates scenario text.
Scenario parse_scenario(std::string_view text);
/// Reads a file, or a catalog id when no such file exists.
Scenario load_scenario(const std::string& path_or_id);

struct CatalogEntry {
  std::string id;
  std::string text;
};

const std::vector<CatalogEntry>& catalog();
/// One line per scenario: "id: checks = [a, b]".
std::string catalog_listing();

/// Known check names in canonical order.
const std::vector<std::string>& known_checks();

}  // namespace bakry
