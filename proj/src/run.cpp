#include "rabi/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <omp.h>
#include <spdlog/spdlog.h>

#include "rabi/version.hpp"

namespace rabi {

namespace fs = std::filesystem;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string snapshot_file_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "wigner_t%g.csv", t);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    row(header);
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << csv_field(fields[i]);
    out_ << "\n";
  }

  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("failed writing CSV output");
  }

 private:
  std::ofstream out_;
};

// Tracks created files so that a failed run leaves nothing behind.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

  fs::path add(const std::string& name) {
    files_.push_back(dir_ / name);
    return files_.back();
  }
  void discard() {
    std::error_code ec;
    for (const auto& f : files_) fs::remove(f, ec);
    files_.clear();
  }
  const std::vector<fs::path>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<fs::path> files_;
};

std::vector<std::string> point_fields(const PointRecord& rec) {
  std::vector<std::string> row{format_number(rec.g), format_number(rec.omega_c), format_number(rec.omega_q)};
  for (double v : rec.values) row.push_back(format_number(v));
  row.push_back(rec.converged ? "1" : "0");
  row.push_back(rec.reason);
  return row;
}

void write_wigner(const fs::path& path, const WignerGrid& w) {
  CsvWriter csv(path, kWignerHeader);
  for (Eigen::Index i = 0; i < w.x_values.size(); ++i) {
    for (Eigen::Index j = 0; j < w.p_values.size(); ++j) {
      csv.row({format_number(w.x_values(i)), format_number(w.p_values(j)), format_number(w.values(i, j))});
    }
  }
  csv.close();
}

nlohmann::json run_phase_diagram(const RunConfig& cfg, OutputSet& out, const ExecuteOptions& opt) {
  const PhaseDiagramGrid grid = run_sweep(cfg.sweep, opt.workers);
  CsvWriter csv(out.add("phase_diagram.csv"), kPhaseDiagramHeader);
  for (const auto& rec : grid.points) csv.row(point_fields(rec));
  csv.close();
  if (grid.flagged() > 0) spdlog::warn("{} of {} grid points flagged non-converged", grid.flagged(), grid.points.size());
  return {{"points", grid.points.size()}, {"flagged_points", grid.flagged()}};
}

nlohmann::json run_ground_state(const RunConfig& cfg, OutputSet& out) {
  const auto& m = cfg.model;
  const std::vector<Quantity> all(kAllQuantities.begin(), kAllQuantities.end());
  const PointRecord rec = compute_point(m.g, m.omega_c, m.omega_q, cfg.cutoff, all);
  const EigenSystem es = solve_model(m, cfg.cutoff);
  auto fields = point_fields(rec);
  fields.insert(fields.begin() + 3, format_number(es.energies(0)));
  CsvWriter csv(out.add("ground_state.csv"), kGroundStateHeader);
  csv.row(fields);
  csv.close();
  return {{"converged", rec.converged}, {"flag_reason", rec.reason}};
}

DensityMatrix ground_cavity_state(const RunConfig& cfg) {
  const EigenSystem es = solve_model(cfg.model, cfg.cutoff);
  const SubsystemDims dims{kQubitDim, cfg.cutoff.cavity_dim()};
  return partial_trace(DensityMatrix::pure(es.ground_state(), Basis::bare, dims), Subsystem::cavity);
}

nlohmann::json run_wigner(const RunConfig& cfg, OutputSet& out) {
  const WignerGrid w = wigner_function(ground_cavity_state(cfg), cfg.wigner.x, cfg.wigner.p);
  write_wigner(out.add("wigner.csv"), w);
  return {{"integral", w.integral()}, {"minimum", w.values.minCoeff()}};
}

nlohmann::json run_quench_mode(const RunConfig& cfg, OutputSet& out) {
  const SnapshotGrid grid{cfg.wigner.x, cfg.wigner.p};
  const QuenchResult res = run_quench(cfg.model, cfg.cutoff, cfg.protocol, cfg.bath, grid);

  CsvWriter csv(out.add("quench.csv"), kQuenchHeader);
  for (std::size_t i = 0; i < res.times.size(); ++i) {
    std::vector<std::string> row{format_number(res.times[i])};
    for (const auto& name : kQuenchObservables) {
      const auto it = res.series.find(name);
      row.push_back(format_number(it == res.series.end() ? std::numeric_limits<double>::quiet_NaN()
                                                         : it->second[i]));
    }
    csv.row(row);
  }
  csv.close();

  nlohmann::json snaps = nlohmann::json::array();
  for (const auto& s : res.wigner_snapshots) {
    const std::string name = snapshot_file_name(s.time);
    write_wigner(out.add(name), s.grid);
    snaps.push_back({{"t", s.time}, {"file", name}});
  }
  const auto& d = res.diagnostics;
  return {{"steps", d.steps},
          {"records", d.records},
          {"clip_events", d.clip_events},
          {"max_trace_drift", d.max_trace_drift},
          {"min_eigenvalue", d.min_eigenvalue},
          {"wigner_snapshots", snaps}};
}

}  // namespace

ExecuteResult execute(const RunConfig& config, const fs::path& output_dir, const ExecuteOptions& options) {
  ExecuteResult result;
  OutputSet out(output_dir);
  try {
    fs::create_directories(output_dir);
    if (options.workers > 0) omp_set_num_threads(options.workers);

    nlohmann::json summary;
    switch (config.mode) {
      case Mode::phase_diagram: summary = run_phase_diagram(config, out, options); break;
      case Mode::ground_state: summary = run_ground_state(config, out); break;
      case Mode::wigner: summary = run_wigner(config, out); break;
      case Mode::quench: summary = run_quench_mode(config, out); break;
    }

    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : out.files()) files.push_back(f.filename().string());
    const nlohmann::json meta{{"library", "rabi"},
                              {"version", kVersion},
                              {"config", serialize(config)},
                              {"outputs", files},
                              {"summary", summary}};
    const fs::path meta_path = out.add("metadata.json");
    std::ofstream os(meta_path, std::ios::binary);
    os << meta.dump(2) << "\n";
    os.close();
    if (!os) throw std::runtime_error("failed writing metadata.json");
    result.files = out.files();
  } catch (const std::exception& e) {
    out.discard();
    result.exit_status = 1;
    result.error = e.what();
  }
  return result;
}

}  // namespace rabi
