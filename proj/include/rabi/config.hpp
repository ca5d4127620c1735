#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rabi/dynamics.hpp"
#include "rabi/operators.hpp"
#include "rabi/phase_diagram.hpp"

namespace rabi {

enum class Mode { phase_diagram, quench, ground_state, wigner };

const char* to_string(Mode m);
std::optional<Mode> parse_mode(const std::string& name);

/// Configuration problem. `kind` separates malformed text, schema violations (unknown,
/// missing or mistyped fields) and physically invalid values.
class ConfigError : public std::runtime_error {
 public:
  enum class Kind { syntax, schema, physics };

  ConfigError(Kind kind, std::vector<std::string> issues);

  Kind kind() const { return kind_; }
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  Kind kind_;
  std::vector<std::string> issues_;
};

struct WignerAxes {
  RealVector x = linspace(-8.0, 8.0, 81);
  RealVector p = linspace(-8.0, 8.0, 81);

  friend bool operator==(const WignerAxes& a, const WignerAxes& b) {
    return a.x.size() == b.x.size() && a.p.size() == b.p.size() && a.x == b.x && a.p == b.p;
  }
};

struct RunConfig {
  Mode mode = Mode::ground_state;
  ModelParams model;
  bool constrained = true;
  FockCutoff cutoff;
  BathSpec bath;
  QuenchProtocol protocol;
  SweepSpec sweep;
  WignerAxes wigner;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses a JSON run configuration and applies defaults. `mode` overrides a missing
/// "mode" key and must agree with it when both are present.
RunConfig parse_config(const std::string& text, std::optional<Mode> mode = std::nullopt);

/// Fully resolved configuration; parse_config(serialize(c).dump()) == c.
nlohmann::json serialize(const RunConfig& config);

}  // namespace rabi
