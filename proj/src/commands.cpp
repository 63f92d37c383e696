#include "bpch/commands.hpp"

#include <fstream>
#include <map>
#include <optional>

namespace bpch {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string status_name(RunStatus s) {
  return s == RunStatus::Completed ? "completed" : "picard_failure";
}

void write_manifest(const fs::path& path, const RunConfig& config, const SimulationResult& r) {
  std::ofstream out = open_output(path);
  out << to_manifest(config);
  out << "# status=" << status_name(r.status) << '\n'
      << "# steps_taken=" << r.steps_taken << '\n'
      << "# failed_steps=" << r.failed_steps << '\n';
  if (r.first_failure) out << "# first_failure=" << *r.first_failure << '\n';
  finish(out, path);
}

SimulationResult run_into(const RunConfig& config, const fs::path& dir) {
  const MeshPtr mesh = config.make_mesh();
  const NodalField phi0 = make_initial(config.initial, mesh);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  SimulationResult r = run_simulation(phi0, config.simulation(), [&dir](const Snapshot& s) {
    write_snapshot(dir / ("phi_" + std::to_string(s.step) + ".csv"), s);
  });
  write_series(dir / "series.csv", r.series);
  RunConfig resolved = config;
  resolved.output_dir = dir;
  write_manifest(dir / "manifest.txt", resolved, r);
  return r;
}

void report(std::ostream& log, Scheme scheme, const SimulationResult& r) {
  log << to_string(scheme) << ": " << status_name(r.status) << " after " << r.steps_taken
      << " steps";
  if (r.first_failure) log << " (first Picard failure at step " << *r.first_failure << ")";
  if (!r.series.empty()) {
    const SeriesRecord& last = r.series.back();
    log << ", min_phi=" << format_double(last.min_phi)
        << ", max_phi=" << format_double(last.max_phi);
  }
  log << '\n';
}

}  // namespace

void write_series(const fs::path& path, const std::vector<SeriesRecord>& series) {
  std::ofstream out = open_output(path);
  out << kSeriesHeader << '\n';
  for (const SeriesRecord& r : series) {
    out << r.step << ',' << format_double(r.time) << ',' << format_double(r.energy) << ','
        << format_double(r.volume) << ',' << format_double(r.min_phi) << ','
        << format_double(r.max_phi) << ',' << format_double(r.int_G_eps) << ','
        << format_double(r.int_J_eps) << ',' << format_double(r.neg_part_sq) << ','
        << format_double(r.over_part_sq) << ',' << r.picard_iters << '\n';
  }
  finish(out, path);
}

void write_snapshot(const fs::path& path, const Snapshot& snap) {
  std::ofstream out = open_output(path);
  const StructuredMesh& mesh = *snap.phi.mesh;
  out << (mesh.dim() == 1 ? "x,phi,mu" : "x,y,phi,mu") << '\n';
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const auto c = mesh.coord(i);
    out << format_double(c[0]) << ',';
    if (mesh.dim() == 2) out << format_double(c[1]) << ',';
    out << format_double(snap.phi[i]) << ',' << format_double(snap.mu[i]) << '\n';
  }
  finish(out, path);
}

int cmd_run(const RunConfig& config, std::ostream& log) {
  const SimulationResult r = run_into(config, config.output_dir);
  report(log, config.params.scheme, r);
  return r.status == RunStatus::Completed ? kExitOk : kExitPicard;
}

int cmd_converge(const RunConfig& config, std::ostream& log) {
  if (config.dim != 1) throw ConfigError("dim", "convergence studies run on the interval only");
  if (config.sizes.empty()) throw ConfigError("sizes", "missing for converge");
  const fs::path path = config.output_dir / "convergence.csv";
  std::ofstream out = open_output(path);
  out << "scheme,N,e2,r2\n";
  for (Scheme s : config.scheme_list()) {
    RunConfig c = config;
    c.params.scheme = s;
    c.validate();
    for (const ConvergenceRow& row : convergence_study(c.convergence())) {
      out << to_string(s) << ',' << row.n << ',' << format_double(row.e2) << ','
          << (row.r2 ? format_double(*row.r2) : "") << '\n';
      log << to_string(s) << " N=" << row.n << " e2=" << format_double(row.e2);
      if (row.r2) log << " r2=" << format_double(*row.r2);
      log << '\n';
    }
  }
  finish(out, path);
  return kExitOk;
}

int cmd_compare(const RunConfig& config, std::ostream& log) {
  const std::vector<Scheme> schemes = config.scheme_list();
  std::vector<SimulationResult> results;
  bool failed = false;
  for (Scheme s : schemes) {
    RunConfig c = config;
    c.params.scheme = s;
    c.schemes.clear();
    c.validate();
    results.push_back(run_into(c, config.output_dir / to_string(s)));
    report(log, s, results.back());
    failed = failed || results.back().status != RunStatus::Completed;
  }

  // merge on step index; a scheme that stopped early leaves blank cells
  std::map<std::size_t, std::vector<std::optional<SeriesRecord>>> rows;
  for (std::size_t k = 0; k < results.size(); ++k) {
    for (const SeriesRecord& rec : results[k].series) {
      auto& row = rows[rec.step];
      row.resize(results.size());
      row[k] = rec;
    }
  }
  const fs::path path = config.output_dir / "compare.csv";
  std::ofstream out = open_output(path);
  out << "step,time";
  for (Scheme s : schemes) out << ",min_phi_" << to_string(s) << ",max_phi_" << to_string(s);
  out << '\n';
  for (const auto& [step, row] : rows) {
    out << step << ',' << format_double(static_cast<double>(step) * config.params.dt);
    for (const auto& rec : row) {
      if (rec) {
        out << ',' << format_double(rec->min_phi) << ',' << format_double(rec->max_phi);
      } else {
        out << ",,";
      }
    }
    out << '\n';
  }
  finish(out, path);
  return failed ? kExitPicard : kExitOk;
}

int guarded(const std::function<int()>& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const MeshError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitPicard;
  } catch (const FieldFileError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace bpch
