#include "rabi/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <sstream>

namespace rabi {

using nlohmann::json;

const char* to_string(Mode m) {
  switch (m) {
    case Mode::phase_diagram: return "phase-diagram";
    case Mode::quench: return "quench";
    case Mode::ground_state: return "ground-state";
    case Mode::wigner: return "wigner";
  }
  return "?";
}

std::optional<Mode> parse_mode(const std::string& name) {
  for (Mode m : {Mode::phase_diagram, Mode::quench, Mode::ground_state, Mode::wigner}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

namespace {

std::string join(const std::vector<std::string>& issues) {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) os << (i ? "; " : "") << issues[i];
  return os.str();
}

const char* kind_name(ConfigError::Kind k) {
  switch (k) {
    case ConfigError::Kind::syntax: return "syntax error";
    case ConfigError::Kind::schema: return "schema error";
    case ConfigError::Kind::physics: return "invalid physical parameter";
  }
  return "error";
}

}  // namespace

ConfigError::ConfigError(Kind kind, std::vector<std::string> issues)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + join(issues)),
      kind_(kind),
      issues_(std::move(issues)) {}

namespace {

// Walks a JSON object collecting schema and physics issues keyed by field path.
class Reader {
 public:
  std::vector<std::string> schema;
  std::vector<std::string> physics;

  static std::string child(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    for (const auto& [key, value] : obj.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
        schema.push_back(child(path, key) + ": unknown or inapplicable field");
      }
    }
  }

  const json* object(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) return nullptr;
    const json& v = obj.at(key);
    if (!v.is_object()) {
      schema.push_back(child(path, key) + ": expected an object");
      return nullptr;
    }
    return &v;
  }

  std::optional<double> number(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      schema.push_back(child(path, key) + ": expected a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<long long> integer(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      schema.push_back(child(path, key) + ": expected an integer");
      return std::nullopt;
    }
    return v.get<long long>();
  }

  std::optional<bool> boolean(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
      schema.push_back(child(path, key) + ": expected true or false");
      return std::nullopt;
    }
    return v.get<bool>();
  }

  std::optional<std::vector<std::string>> strings(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    std::vector<std::string> out;
    if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_string()) break;
        out.push_back(e.get<std::string>());
      }
      if (out.size() == v.size()) return out;
    }
    schema.push_back(child(path, key) + ": expected an array of strings");
    return std::nullopt;
  }

  std::optional<std::vector<double>> numbers(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    std::vector<double> out;
    if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_number()) break;
        out.push_back(e.get<double>());
      }
      if (out.size() == v.size()) return out;
    }
    schema.push_back(child(path, key) + ": expected an array of numbers");
    return std::nullopt;
  }

  /// Either an explicit array or {"start", "stop", "count"}.
  std::optional<std::vector<double>> axis(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    const std::string here = child(path, key);
    if (v.is_array()) return numbers(obj, path, key);
    if (!v.is_object()) {
      schema.push_back(here + ": expected an array or {start, stop, count}");
      return std::nullopt;
    }
    allow_keys(v, here, {"start", "stop", "count"});
    const auto start = number(v, here, "start");
    const auto stop = number(v, here, "stop");
    const auto count = integer(v, here, "count");
    if (!start) schema.push_back(child(here, "start") + ": required");
    if (!stop) schema.push_back(child(here, "stop") + ": required");
    if (!count) schema.push_back(child(here, "count") + ": required");
    if (!start || !stop || !count) return std::nullopt;
    if (*count < 1 || *count > 100000) {
      physics.push_back(child(here, "count") + ": must be in [1, 100000]");
      return std::nullopt;
    }
    const RealVector r = linspace(*start, *stop, static_cast<int>(*count));
    return std::vector<double>(r.data(), r.data() + r.size());
  }
};

void physics_check(Reader& r, bool ok, const std::string& path, const std::string& what) {
  if (!ok) r.physics.push_back(path + ": " + what);
}

RealVector to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void read_model(Reader& r, const json& doc, RunConfig& cfg, bool g_allowed, bool g_required) {
  const json* model = r.object(doc, "", "model");
  const json empty = json::object();
  const json& m = model ? *model : empty;
  if (g_allowed) {
    r.allow_keys(m, "model", {"omega_c", "omega_q", "g", "constrained"});
  } else {
    r.allow_keys(m, "model", {"omega_c", "omega_q", "constrained"});
  }
  cfg.constrained = r.boolean(m, "model", "constrained").value_or(true);
  cfg.model.omega_c = r.number(m, "model", "omega_c").value_or(0.1);
  physics_check(r, cfg.model.omega_c > 0.0 && std::isfinite(cfg.model.omega_c), "model.omega_c", "must be positive");
  const auto wq = r.number(m, "model", "omega_q");
  cfg.model.omega_q = wq.value_or(cfg.model.omega_c > 0.0 ? 1.0 / cfg.model.omega_c : 10.0);
  physics_check(r, cfg.model.omega_q > 0.0 && std::isfinite(cfg.model.omega_q), "model.omega_q", "must be positive");
  if (cfg.constrained && wq && cfg.model.omega_c > 0.0) {
    physics_check(r, std::abs(cfg.model.omega_c * cfg.model.omega_q - 1.0) <= 1e-12, "model.omega_q",
                  "constrained model requires omega_c * omega_q = 1");
  }
  if (g_allowed) {
    const auto g = r.number(m, "model", "g");
    if (!g && g_required) r.schema.push_back("model.g: required");
    cfg.model.g = g.value_or(0.0);
    physics_check(r, cfg.model.g >= 0.0, "model.g", "must be non-negative");
  } else {
    cfg.model.g = 0.0;
  }
}

void read_cutoff(Reader& r, const json& doc, RunConfig& cfg) {
  const auto n = r.integer(doc, "", "n_max");
  if (!n) return;
  if (*n < 1 || *n > 2000) {
    r.physics.push_back("n_max: must be in [1, 2000]");
    return;
  }
  cfg.cutoff = FockCutoff(static_cast<int>(*n));
}

void read_bath(Reader& r, const json& doc, RunConfig& cfg) {
  cfg.bath = BathSpec::defaults_for(cfg.model);
  const json* bath = r.object(doc, "", "bath");
  if (!bath) return;
  r.allow_keys(*bath, "bath", {"gamma_c", "gamma_q", "temperature", "omega_0"});
  cfg.bath.gamma_c = r.number(*bath, "bath", "gamma_c").value_or(cfg.bath.gamma_c);
  cfg.bath.gamma_q = r.number(*bath, "bath", "gamma_q").value_or(cfg.bath.gamma_q);
  cfg.bath.temperature = r.number(*bath, "bath", "temperature").value_or(cfg.bath.temperature);
  cfg.bath.omega_0 = r.number(*bath, "bath", "omega_0").value_or(cfg.bath.omega_0);
  physics_check(r, cfg.bath.gamma_c >= 0.0, "bath.gamma_c", "damping rate must be non-negative");
  physics_check(r, cfg.bath.gamma_q >= 0.0, "bath.gamma_q", "damping rate must be non-negative");
  physics_check(r, cfg.bath.temperature >= 0.0 && std::isfinite(cfg.bath.temperature), "bath.temperature",
                "must be non-negative");
  physics_check(r, cfg.bath.omega_0 > 0.0, "bath.omega_0", "must be positive");
}

void read_wigner_axes(Reader& r, const json& w, const std::string& path, WignerAxes& axes) {
  r.allow_keys(w, path, {"x", "p"});
  if (auto x = r.axis(w, path, "x")) axes.x = to_eigen(*x);
  if (auto p = r.axis(w, path, "p")) axes.p = to_eigen(*p);
  physics_check(r, axes.x.size() > 0 && axes.p.size() > 0, path, "grid axes must be non-empty");
}

void read_quench(Reader& r, const json& doc, RunConfig& cfg) {
  const json* q = r.object(doc, "", "quench");
  if (!q) {
    if (!doc.contains("quench")) r.schema.push_back("quench.g0: required");
    return;
  }
  r.allow_keys(*q, "quench",
               {"g0", "g_prime", "delta_g", "t_max", "dt", "record_stride", "observables", "snapshot_times"});
  const auto g0 = r.number(*q, "quench", "g0");
  if (!g0) {
    r.schema.push_back("quench.g0: required");
    return;
  }
  QuenchProtocol p = QuenchProtocol::defaults_for(*g0, cfg.model);
  const auto g_prime = r.number(*q, "quench", "g_prime");
  const auto delta_g = r.number(*q, "quench", "delta_g");
  if (g_prime && delta_g) r.schema.push_back("quench: give at most one of g_prime and delta_g");
  if (g_prime) p.g_prime = *g_prime;
  if (delta_g) p.g_prime = *g0 + *delta_g;
  p.t_max = r.number(*q, "quench", "t_max").value_or(p.t_max);
  if (auto dt = r.number(*q, "quench", "dt")) {
    p.dt = *dt;
    if (*dt > 0.0) p.record_stride = std::max(1, static_cast<int>(std::lround(0.1 / *dt)));
  }
  if (auto stride = r.integer(*q, "quench", "record_stride")) {
    physics_check(r, *stride >= 1, "quench.record_stride", "must be >= 1");
    p.record_stride = static_cast<int>(std::max<long long>(1, *stride));
  }
  if (auto obs = r.strings(*q, "quench", "observables")) {
    for (const auto& name : *obs) {
      if (std::find(kQuenchObservables.begin(), kQuenchObservables.end(), name) == kQuenchObservables.end()) {
        r.schema.push_back("quench.observables: unknown observable '" + name + "'");
      }
    }
    p.observables = *obs;
  }
  if (auto snaps = r.numbers(*q, "quench", "snapshot_times")) p.snapshot_times = *snaps;

  physics_check(r, p.g0 >= 0.0, "quench.g0", "must be non-negative");
  physics_check(r, p.g_prime >= 0.0, "quench.g_prime", "must be non-negative");
  physics_check(r, p.dt > 0.0, "quench.dt", "must be positive");
  physics_check(r, p.t_max >= p.dt, "quench.t_max", "must be at least dt");
  physics_check(r, p.t_max <= 1e7, "quench.t_max", "must be at most 1e7");
  for (double t : p.snapshot_times) {
    physics_check(r, t >= 0.0 && t <= p.t_max, "quench.snapshot_times", "must lie in [0, t_max]");
  }
  cfg.protocol = p;
}

void read_sweep(Reader& r, const json& doc, RunConfig& cfg) {
  cfg.sweep = SweepSpec::defaults();
  cfg.sweep.cutoff = cfg.cutoff;
  const json* s = r.object(doc, "", "sweep");
  if (!s) return;
  r.allow_keys(*s, "sweep", {"g_values", "omega_c_values", "constrained", "omega_q", "quantities"});
  if (auto g = r.axis(*s, "sweep", "g_values")) cfg.sweep.g_values = *g;
  if (auto wc = r.axis(*s, "sweep", "omega_c_values")) cfg.sweep.omega_c_values = *wc;
  cfg.sweep.constrained = r.boolean(*s, "sweep", "constrained").value_or(true);
  const auto wq = r.number(*s, "sweep", "omega_q");
  if (cfg.sweep.constrained && wq) r.schema.push_back("sweep.omega_q: only allowed when constrained is false");
  if (!cfg.sweep.constrained) {
    if (!wq) r.schema.push_back("sweep.omega_q: required when constrained is false");
    cfg.sweep.omega_q = wq.value_or(1.0);
  }
  if (auto qs = r.strings(*s, "sweep", "quantities")) {
    cfg.sweep.quantities.clear();
    for (const auto& name : *qs) {
      if (auto q = parse_quantity(name)) {
        cfg.sweep.quantities.push_back(*q);
      } else {
        r.schema.push_back("sweep.quantities: unknown quantity '" + name + "'");
      }
    }
  }
  try {
    cfg.sweep.validate();
  } catch (const std::invalid_argument& e) {
    r.physics.push_back(std::string("sweep: ") + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text, std::optional<Mode> mode) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(ConfigError::Kind::syntax, {e.what()});
  }
  if (!doc.is_object()) throw ConfigError(ConfigError::Kind::schema, {"document must be a JSON object"});

  Reader r;
  RunConfig cfg;
  if (doc.contains("mode")) {
    const json& m = doc.at("mode");
    const auto parsed = m.is_string() ? parse_mode(m.get<std::string>()) : std::nullopt;
    if (!parsed) {
      throw ConfigError(ConfigError::Kind::schema,
                        {"mode: expected one of phase-diagram, quench, ground-state, wigner"});
    }
    if (mode && *mode != *parsed) {
      throw ConfigError(ConfigError::Kind::schema,
                        {std::string("mode: document says '") + to_string(*parsed) +
                         "' but the command requested '" + to_string(*mode) + "'"});
    }
    mode = parsed;
  }
  if (!mode) {
    std::vector<std::string> missing{"mode: required"};
    missing.push_back("quench.g0: required for mode quench");
    missing.push_back("model.g: required for modes ground-state and wigner");
    throw ConfigError(ConfigError::Kind::schema, missing);
  }
  cfg.mode = *mode;

  switch (cfg.mode) {
    case Mode::quench:
      r.allow_keys(doc, "", {"mode", "model", "n_max", "bath", "quench", "wigner"});
      read_model(r, doc, cfg, false, false);
      read_cutoff(r, doc, cfg);
      read_bath(r, doc, cfg);
      read_quench(r, doc, cfg);
      if (const json* w = r.object(doc, "", "wigner")) read_wigner_axes(r, *w, "wigner", cfg.wigner);
      break;
    case Mode::phase_diagram:
      r.allow_keys(doc, "", {"mode", "n_max", "sweep"});
      read_cutoff(r, doc, cfg);
      read_sweep(r, doc, cfg);
      break;
    case Mode::ground_state:
      r.allow_keys(doc, "", {"mode", "model", "n_max"});
      read_model(r, doc, cfg, true, true);
      read_cutoff(r, doc, cfg);
      break;
    case Mode::wigner:
      r.allow_keys(doc, "", {"mode", "model", "n_max", "wigner"});
      read_model(r, doc, cfg, true, true);
      read_cutoff(r, doc, cfg);
      if (const json* w = r.object(doc, "", "wigner")) read_wigner_axes(r, *w, "wigner", cfg.wigner);
      break;
  }

  if (!r.schema.empty()) throw ConfigError(ConfigError::Kind::schema, r.schema);
  if (!r.physics.empty()) throw ConfigError(ConfigError::Kind::physics, r.physics);
  return cfg;
}

namespace {

json axis_json(const RealVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

json serialize(const RunConfig& c) {
  json doc;
  doc["mode"] = to_string(c.mode);
  doc["n_max"] = c.cutoff.n_max();
  auto model = [&](bool with_g) {
    json m{{"omega_c", c.model.omega_c}, {"omega_q", c.model.omega_q}, {"constrained", c.constrained}};
    if (with_g) m["g"] = c.model.g;
    return m;
  };
  switch (c.mode) {
    case Mode::quench: {
      doc["model"] = model(false);
      doc["bath"] = {{"gamma_c", c.bath.gamma_c},
                     {"gamma_q", c.bath.gamma_q},
                     {"temperature", c.bath.temperature},
                     {"omega_0", c.bath.omega_0}};
      const auto& p = c.protocol;
      doc["quench"] = {{"g0", p.g0},
                       {"g_prime", p.g_prime},
                       {"t_max", p.t_max},
                       {"dt", p.dt},
                       {"record_stride", p.record_stride},
                       {"observables", p.observables},
                       {"snapshot_times", p.snapshot_times}};
      doc["wigner"] = {{"x", axis_json(c.wigner.x)}, {"p", axis_json(c.wigner.p)}};
      break;
    }
    case Mode::phase_diagram: {
      json s{{"g_values", c.sweep.g_values},
             {"omega_c_values", c.sweep.omega_c_values},
             {"constrained", c.sweep.constrained}};
      if (!c.sweep.constrained) s["omega_q"] = c.sweep.omega_q;
      std::vector<std::string> qs;
      for (Quantity q : c.sweep.quantities) qs.emplace_back(to_string(q));
      s["quantities"] = qs;
      doc["sweep"] = s;
      break;
    }
    case Mode::ground_state:
      doc["model"] = model(true);
      break;
    case Mode::wigner:
      doc["model"] = model(true);
      doc["wigner"] = {{"x", axis_json(c.wigner.x)}, {"p", axis_json(c.wigner.p)}};
      break;
  }
  return doc;
}

}  // namespace rabi
