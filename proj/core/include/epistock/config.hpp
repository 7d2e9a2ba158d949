#ifndef EPISTOCK_CONFIG_HPP_
#define EPISTOCK_CONFIG_HPP_

#include <string>
#include <vector>

#include "epistock/model.hpp"
#include "epistock/solver.hpp"

namespace epistock {

/// Integeration and model-gate knobs grouped as the `numerics` section of
/// a scenario document.
struct NumericsConfig {
  double rel_tol = 1e-6;
  double abs_tol = 1e-6;
  double h_init = 1e-3;
  double h_min = 1e-12;
  double h_max = 0.25;
  double dense_output_dt = 0.5;
  double horizon = 600.0;  // days past the latest onset
  /// auto | rk45 | rosenbrock; auto picks the stiff-capable method.
  std::string integrator = "auto";
  ModelNumerics model;

  friend bool operator==(const NumericsConfig&, const NumericsConfig&) = default;
};

/// Fully resolved scenario configuration (defaults applied).
struct ScenarioConfig {
  EpidemicParams epidemic;
  CommunityParams community_a;
  CommunityParams community_b;
  SharingParams sharing;
  NumericsConfig numerics;

  ScenarioParams params() const;
  /// Integration window implied by onsets and horizon, solver method from
  /// the integrator string, scales from the community parameters.
  IntegratorSettings integrator_settings() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Built-in defaults: two identical communities, community B onset at
/// +180 days, sharing at theta = 0.6.
ScenarioConfig default_config();

/// Parses a sectioned key=value document, applies dotted-key overrides on
/// top, fills missing keys from defaults and validates the invariants.
/// Errors: ParseError (malformed document), UnknownKeyError,
/// ValidationError (named field). Duplicate override keys resolve
/// last-wins and append a note to `warnings` when given.
ScenarioConfig load_config(const std::string& text,
                           const std::vector<std::string>& overrides = {},
                           std::vector<std::string>* warnings = nullptr);

/// Canonical text form listing every key; load(echo(cfg)) == cfg.
std::string echo_config(const ScenarioConfig& cfg);

/// Re-checks all invariants of an assembled config (load_config does this
/// automatically). Throws ValidationError naming the offending field.
void validate_config(const ScenarioConfig& cfg);

std::string to_string(DemandMode mode);

}  // namespace epistock

#endif  // EPISTOCK_CONFIG_HPP_
