#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bakry/report.hpp"
#include "bakry/scenario.hpp"

namespace {

bool write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

bakry::BoundaryCondition parse_bc(const std::string& s, const bakry::Scenario& sc) {
  if (s == "dirichlet") return bakry::BoundaryCondition::Dirichlet;
  if (s == "neumann") return bakry::BoundaryCondition::Neumann;
  return bakry::default_bc(sc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted-manifold spectral and curvature checks"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_path;
  std::string csv_path;
  int levels = 0;
  bool timing = false;
  auto* run = app.add_subcommand("run", "Run every check of a scenario and write a JSON report");
  run->add_option("scenario", scenario, "Scenario file or catalog id")->required();
  run->add_option("--out", out_path, "Report path (default stdout)");
  run->add_option("--csv", csv_path, "Also write the eigenvalue convergence table");
  run->add_option("--levels", levels, "Refinement levels")->check(CLI::Range(2, 8));
  run->add_flag("--timing", timing, "Add runtime_ms to each check");

  std::string bc_name = "auto";
  auto* converge = app.add_subcommand("converge", "Print the lambda1 convergence table as CSV");
  converge->add_option("scenario", scenario, "Scenario file or catalog id")->required();
  converge->add_option("--levels", levels, "Refinement levels")->check(CLI::Range(3, 8));
  converge->add_option("--bc", bc_name, "dirichlet, neumann or auto")
      ->check(CLI::IsMember({"auto", "dirichlet", "neumann"}));
  converge->add_option("--out", out_path, "CSV path (default stdout)");

  std::string export_dir;
  auto* catalog = app.add_subcommand("catalog", "List the built-in scenarios");
  catalog->add_option("--export", export_dir, "Write every scenario as <id>.scn into this directory");

  int k = 1;
  int level = -1;
  auto* spectrum = app.add_subcommand("spectrum", "Print the k smallest eigenvalues as CSV");
  spectrum->add_option("scenario", scenario, "Scenario file or catalog id")->required();
  spectrum->add_option("--k", k, "Number of eigenvalues")->required()->check(CLI::Range(1, 200));
  spectrum->add_option("--level", level, "Refinement level (default finest)")->check(CLI::Range(0, 8));
  spectrum->add_option("--bc", bc_name, "dirichlet, neumann or auto")
      ->check(CLI::IsMember({"auto", "dirichlet", "neumann"}));
  spectrum->add_option("--out", out_path, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (catalog->parsed()) {
      if (export_dir.empty()) {
        std::cout << bakry::catalog_listing();
        return 0;
      }
      std::filesystem::create_directories(export_dir);
      for (const auto& entry : bakry::catalog())
        if (!write_text((std::filesystem::path(export_dir) / (entry.id + ".scn")).string(), entry.text)) return 1;
      return 0;
    }

    const bakry::Scenario sc = bakry::load_scenario(scenario);

    if (run->parsed()) {
      bakry::RunOptions opts;
      if (levels > 0) opts.levels = levels;
      opts.timing = timing;
      const auto report = bakry::run_report(sc, opts);
      if (!write_text(out_path, report.dump(2) + "\n")) return 1;
      if (!csv_path.empty()) {
        const int n = std::max(3, levels > 0 ? levels : sc.mesh.levels);
        const auto rows = bakry::convergence_table(sc, bakry::default_bc(sc), n);
        if (!write_text(csv_path, bakry::convergence_csv(rows))) return 1;
      }
      return bakry::exit_code(report);
    }
    if (converge->parsed()) {
      const int n = levels > 0 ? levels : sc.mesh.levels;
      const auto rows = bakry::convergence_table(sc, parse_bc(bc_name, sc), n);
      return write_text(out_path, bakry::convergence_csv(rows)) ? 0 : 1;
    }
    if (spectrum->parsed()) {
      const int lv = level >= 0 ? level : sc.mesh.levels - 1;
      const auto rows = bakry::spectrum(sc, parse_bc(bc_name, sc), k, lv);
      return write_text(out_path, bakry::spectrum_csv(rows)) ? 0 : 1;
    }
  } catch (const bakry::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const bakry::ValidationError& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return 1;
  } catch (const bakry::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
