#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "axiswirl/initial_data.hpp"
#include "axiswirl/model1d.hpp"
#include "axiswirl/ode.hpp"

namespace axiswirl {

/// Model families a run can drive.
enum class RunKind { Ode, ReactionDiffusion, Euler1d, Lagrangian };

const char* to_string(RunKind k) noexcept;
/// Accepts "ode", "rd", "euler1d", "lagrangian".
std::optional<RunKind> parse_run_kind(const std::string& name);

/// Parsed run configuration. Text form is `key = value` lines under the
/// sections [model], [grid], [init], [output] and [sweep]; `#` starts a
/// comment. Every key is optional and has a default.
struct ConfigDocument {
  // [model]
  std::optional<RunKind> kind;
  double nu = 1.0;
  int sign = +1;
  bool dealias = true;
  Scheme scheme = Scheme::ImexEuler;
  double d = 2.0;

  // [grid]
  std::size_t n = 4096;
  double t_end = 0.01;
  double cap = 0.01;
  double dt0 = 1e-5;
  double dt_min = 1e-13;
  double cfl = 0.1;
  /// Sampling interval of ODE trajectories.
  double dt = 1e-4;
  std::size_t max_steps = 0;

  // [init]
  std::optional<InitKind> init;
  double epsilon = 0.0;
  double amplitude = 1.0;
  int frequency = 1;
  double u0 = 0.01;
  double v0 = -100.0;

  // [output]
  /// Write every k-th record to series.csv (the first and last rows always).
  std::size_t series_stride = 1;
  std::size_t snapshot_stride = 0;
  std::vector<double> snapshot_times;

  // [sweep]
  /// "section.key" of a numeric parameter, e.g. "model.d".
  std::string sweep_param;
  std::vector<double> sweep_values;

  friend bool operator==(const ConfigDocument&, const ConfigDocument&) = default;

  ModelConfig model_config() const;
  StepController step_controller() const;
  InitParams init_params(InitKind fallback) const;
  OdeParams ode_params() const;
};

/// Throws ParseError(line), UnknownKey(name) or BadValue(key).
ConfigDocument parse_config(const std::string& text);

/// Lossless text form; parse_config(emit_config(doc)) == doc.
std::string emit_config(const ConfigDocument& doc);

/// Sets one `section.key` from its text value, with the parser's validation.
void set_config_value(ConfigDocument& doc, const std::string& section_key, const std::string& value);

/// Formats with 17 significant digits, which round-trips any double.
std::string format_double(double x);

}  // namespace axiswirl
