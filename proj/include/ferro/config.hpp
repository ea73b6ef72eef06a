// Batch front end: flat sectioned key-value configuration files selecting
// model, parameters, geometry, load schedule and outputs; plus the runner
// that executes a configuration and emits CSV curves, VTK fields and solver
// logs.
#pragma once

#include "ferro/constitutive.hpp"
#include "ferro/fem.hpp"
#include "ferro/point_lab.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ferro {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("parse error at line " + std::to_string(line) +
                           ": " + what),
        line(line) {}
  int line;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& field_name,
                           const std::string& detail = "")
      : std::runtime_error("invalid configuration: " + field_name +
                           (detail.empty() ? "" : " (" + detail + ")")),
        field(field_name) {}
  std::string field;
};

struct GeometrySpec {
  std::string type;  // point | square | beam | triangle | mesh
  int dim = 3;       // point mode only
  int nx = 1, ny = 1;
  double length = 2e-3;
  double height = 2e-3;
  std::string path;  // mesh file
  // side roles for the generators, comma lists of
  // {fix, rollerx, rollery, ins, el, ground, trac, free}
  std::string left, right, top, bottom;
};

struct ScheduleSegment {
  int steps = 1;
  std::optional<double> E;     // axial field target (point and generators)
  std::optional<double> T;     // axial stress target (point)
  std::optional<double> phi0;  // electrode potential target (fem)
  std::optional<double> tx, ty;  // traction targets (fem)
};

struct SolverSpec {
  double tol = 1e-6;
  int max_iter = 50;
};

struct OutputSpec {
  std::string csv;
  std::string vtk_prefix;
  std::string iteration_log;
  int vtk_every = 1;
};

struct RunConfig {
  MaterialParams material;
  GeometrySpec geometry;
  std::vector<ScheduleSegment> schedule;
  SolverSpec solver;
  OutputSpec output;
  unsigned seed = 12345;
};

/// Parse and fully validate a configuration file. Throws ParseError on
/// malformed text, ValidationError on missing or inconsistent fields.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Serialize a configuration; parse_config_text(serialize(c)) is equivalent
/// to c.
std::string serialize(const RunConfig& cfg);

/// Expanded point-mode schedule (linear ramps between segment targets).
std::vector<PointLoadStep> expand_point_schedule(const RunConfig& cfg);

/// Per-step finite-element load data expanded from the schedule.
std::vector<LoadData> expand_fe_schedule(const RunConfig& cfg);
std::vector<double> schedule_times(const RunConfig& cfg);

/// Build the finite-element system of a fem-mode configuration.
std::unique_ptr<FeSystem> build_fe_system(const RunConfig& cfg);

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 2 configuration error, 3 solver failure
  std::string message;
};

/// Execute a configuration: run the schedule, write the requested artifacts.
/// Never throws; failures are reported through the exit code and message.
RunOutcome run(const RunConfig& cfg, std::ostream* log = nullptr);

/// Command-line entry: run <config> [--tol v] [--reg-eps v] [--out-dir d]
/// [--seed n] [--log-level l].
int cli_main(int argc, const char* const* argv);

}  // namespace ferro
