#pragma once

// Command-line front end: scenario files, command dispatch and reports.
//
// Exit codes: 0 every requested check passed, 1 some check failed,
// 2 configuration error (bad key, missing file, invalid parameter),
// 3 numerical failure (eigensolver, degenerate spectrum).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ladderlab/matrix_io.hpp"
#include "ladderlab/operator_space.hpp"

namespace ladderlab::cli {

inline constexpr const char* kSchemaVersion = "1.0";

enum class ExitCode : int { pass = 0, failed = 1, config = 2, numerical = 3 };

enum class Model { quon, dgha, graphene, imported };
enum class Format { json, csv, human };
enum class DressingKind { identity, diagonal, random };

struct Scenario {
  Model model = Model::quon;
  int dim = 16;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  int n_max = -1;   // -1: as many as the window allows

  DressingKind dressing = DressingKind::identity;
  double dressing_cond = 1.0;
  std::vector<Complex> dressing_scales;

  Complex q{0.5, 0.0};
  std::vector<Complex> quon_alpha;   // alpha_1..alpha_{dim-1} when given
  Complex osc_alpha{std::numbers::sqrt2 / 2, 0.0};
  Complex osc_beta{std::numbers::sqrt2 / 2, 0.0};

  std::string f = "2*x+1";

  double vf = 1.0;
  double xi = 1.0;
  int ncut = 5;

  std::filesystem::path H_path, T_path, S_path;
  Complex lambda{1.0, 0.0};
  double perturbation = 0.0;   // amplitude of the seeded random term added to H
  double imported_cond = 1.0;  // declared conditioning of the unknown dressing

  std::vector<Complex> z_grid{Complex(0.0, 0.0)};
  int n_terms = 30;

  std::vector<std::string> checks;   // empty: every check of the command counts
  std::optional<std::filesystem::path> out;
  Format format = Format::json;
};

// Strict parse: unknown keys, wrong types and out-of-range values throw
// ConfigError before anything is computed. Relative matrix paths resolve
// against base_dir; every referenced file must exist.
Scenario parse_scenario(const Json& j, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

// Effective scenario as it is echoed in reports.
Json to_json(const Scenario& s);

// "0.5", "-2i", "0.3-1.2i", "i"
Complex parse_complex(const std::string& text);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ladderlab::cli
