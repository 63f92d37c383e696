#include "bpch/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bpch {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out)) {
    throw ConfigError(key, "expected a finite number, got '" + v + "'");
  }
  return out;
}

template <typename T>
T parse_integer(const std::string& key, const std::string& v) {
  T out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) {
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  std::string low = v;
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (low == "true" || low == "1" || low == "yes") return true;
  if (low == "false" || low == "0" || low == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

Scheme parse_scheme_key(const std::string& key, const std::string& v) {
  try {
    return parse_scheme(v);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

InitialKind parse_initial(const std::string& key, const std::string& v) {
  if (v == "two_balls") return InitialKind::TwoBalls;
  if (v == "spinodal") return InitialKind::Spinodal;
  if (v == "file") return InitialKind::File;
  throw ConfigError(key, "expected two_balls, spinodal or file, got '" + v + "'");
}

std::string initial_name(InitialKind k) {
  switch (k) {
    case InitialKind::TwoBalls: return "two_balls";
    case InitialKind::Spinodal: return "spinodal";
    case InitialKind::File: return "file";
  }
  return "?";
}

void apply(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "scheme") {
    c.params.scheme = parse_scheme_key(key, v);
  } else if (key == "eta") {
    c.params.eta = parse_double(key, v);
  } else if (key == "eps") {
    c.params.eps = parse_double(key, v);
  } else if (key == "dim") {
    c.dim = parse_integer<int>(key, v);
  } else if (key == "nx") {
    c.nx = parse_integer<std::size_t>(key, v);
  } else if (key == "ny") {
    c.ny = parse_integer<std::size_t>(key, v);
  } else if (key == "dt") {
    c.params.dt = parse_double(key, v);
  } else if (key == "t_end") {
    c.t_end = parse_double(key, v);
  } else if (key == "picard_tol") {
    c.params.picard_tol = parse_double(key, v);
  } else if (key == "picard_max_iter") {
    c.params.picard_max_iter = parse_integer<int>(key, v);
  } else if (key == "linear_rtol") {
    c.params.linear_rtol = parse_double(key, v);
  } else if (key == "abort_on_fail") {
    c.abort_on_fail = parse_bool(key, v);
  } else if (key == "initial") {
    c.initial.kind = parse_initial(key, v);
  } else if (key == "amplitude") {
    c.initial.amplitude = parse_double(key, v);
  } else if (key == "seed") {
    c.initial.seed = parse_integer<std::uint64_t>(key, v);
  } else if (key == "field_file") {
    if (v.empty()) throw ConfigError(key, "empty path");
    c.initial.path = v;
  } else if (key == "record_every") {
    c.record_every = parse_integer<std::size_t>(key, v);
  } else if (key == "snapshot_every") {
    c.snapshot_every = parse_integer<std::size_t>(key, v);
  } else if (key == "output_dir") {
    if (v.empty()) throw ConfigError(key, "empty path");
    c.output_dir = v;
  } else if (key == "schemes") {
    c.schemes.clear();
    for (const auto& s : split_list(v)) c.schemes.push_back(parse_scheme_key(key, s));
  } else if (key == "sizes") {
    c.sizes.clear();
    for (const auto& s : split_list(v)) c.sizes.push_back(parse_integer<std::size_t>(key, s));
  } else if (key == "reference") {
    c.reference = parse_integer<std::size_t>(key, v);
  } else if (key == "reference_scheme") {
    c.has_reference_scheme = true;
    c.reference_scheme = parse_scheme_key(key, v);
  } else {
    throw ConfigError(key, "unknown key");
  }
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "scheme",       "eta",         "eps",        "dim",          "nx",
      "ny",           "dt",          "t_end",      "picard_tol",   "picard_max_iter",
      "linear_rtol",  "abort_on_fail", "initial",  "amplitude",    "seed",
      "field_file",   "record_every", "snapshot_every", "output_dir", "schemes",
      "sizes",        "reference",   "reference_scheme"};
  return keys;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t RunConfig::steps() const {
  return static_cast<std::size_t>(std::llround(t_end / params.dt));
}

MeshPtr RunConfig::make_mesh() const {
  return dim == 1 ? build_interval(nx) : build_grid(nx, ny);
}

SimulationConfig RunConfig::simulation() const {
  SimulationConfig s;
  s.params = params;
  s.steps = steps();
  s.record_every = record_every;
  s.snapshot_every = snapshot_every;
  s.abort_on_fail = abort_on_fail;
  return s;
}

std::vector<Scheme> RunConfig::scheme_list() const {
  return schemes.empty() ? std::vector<Scheme>{params.scheme} : schemes;
}

ConvergenceSpec RunConfig::convergence() const {
  ConvergenceSpec spec;
  spec.params = params;
  spec.initial = initial;
  spec.steps = steps();
  spec.sizes = sizes;
  spec.reference = reference;
  if (has_reference_scheme) spec.reference_scheme = reference_scheme;
  return spec;
}

void RunConfig::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    throw ConfigError(msg.substr(0, colon), trim(msg.substr(colon + 1)));
  }
  for (Scheme s : schemes) {
    if ((s == Scheme::GEps || s == Scheme::JEps) && !(params.eps > 0.0 && params.eps < 0.5)) {
      throw ConfigError("eps", "must lie in (0, 0.5)");
    }
  }
  if (dim != 1 && dim != 2) throw ConfigError("dim", "must be 1 or 2");
  if (nx < 2) throw ConfigError("nx", "must be at least 2");
  if (dim == 2 && ny < 2) throw ConfigError("ny", "must be at least 2");
  if (!(t_end >= 0.0)) throw ConfigError("t_end", "must be non-negative");
  const double n = t_end / params.dt;
  if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
    throw ConfigError("t_end", "t_end / dt = " + format_double(n) + " is not a whole number");
  }
  if (record_every == 0) throw ConfigError("record_every", "must be positive");
  switch (initial.kind) {
    case InitialKind::TwoBalls:
      if (dim != 1) throw ConfigError("initial", "two_balls needs dim=1");
      break;
    case InitialKind::Spinodal:
      if (!(initial.amplitude >= 0.0 && initial.amplitude < 0.5)) {
        throw ConfigError("amplitude", "must lie in [0, 0.5)");
      }
      break;
    case InitialKind::File:
      if (initial.path.empty()) throw ConfigError("field_file", "required for initial=file");
      break;
  }
  for (std::size_t s : sizes) {
    if (s < 2 || reference % s != 0) {
      throw ConfigError("sizes", std::to_string(s) + " does not divide reference " +
                                     std::to_string(reference));
    }
  }
}

void ConfigBuilder::set(const std::string& key, const std::string& value) {
  RunConfig scratch;
  const std::string v = trim(value);
  apply(scratch, key, v);
  values_[key] = v;
}

void ConfigBuilder::load_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno), "expected key=value");
    }
    set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void ConfigBuilder::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  load_text(ss.str());
}

RunConfig ConfigBuilder::build() const {
  for (const char* key : {"scheme", "eta", "nx", "dt", "t_end"}) {
    if (!has(key)) throw ConfigError(key, "missing required key");
  }
  RunConfig c;
  for (const auto& [key, value] : values_) apply(c, key, value);
  if (c.dim == 2 && !has("ny")) c.ny = c.nx;
  if (c.dim == 2 && !has("initial")) c.initial.kind = InitialKind::Spinodal;
  c.initial.eta = c.params.eta;
  c.validate();
  return c;
}

std::vector<std::string> preset_names() { return {"example1", "example2", "example3", "example4"}; }

ConfigBuilder preset(const std::string& name) {
  ConfigBuilder b;
  auto set_all = [&b](std::initializer_list<std::pair<const char*, const char*>> kv) {
    for (const auto& [k, v] : kv) b.set(k, v);
  };
  if (name == "example1" || name == "example2") {
    set_all({{"scheme", "GEPS"},
             {"eta", "0.005"},
             {"eps", "1e-20"},
             {"dim", "1"},
             {"nx", "10000"},
             {"dt", "1e-10"},
             {"t_end", "1e-7"},
             {"initial", "two_balls"},
             {"record_every", "1"},
             {"snapshot_every", "1000"}});
    if (name == "example1") {
      set_all({{"schemes", "GEPS,JEPS,M0"}, {"output_dir", "out/example1"}});
    } else {
      set_all({{"schemes", "GEPS,JEPS"},
               {"sizes", "2000,3000,4000"},
               {"reference", "12000"},
               {"reference_scheme", "GEPS"},
               {"record_every", "1000"},
               {"snapshot_every", "0"},
               {"output_dir", "out/example2"}});
    }
  } else if (name == "example3") {
    set_all({{"scheme", "GEPS"},
             {"eta", "0.005"},
             {"eps", "1e-20"},
             {"dim", "1"},
             {"nx", "1000"},
             {"dt", "1e-8"},
             {"t_end", "1e-3"},
             {"initial", "spinodal"},
             {"amplitude", "0.01"},
             {"seed", "1"},
             {"record_every", "100"},
             {"snapshot_every", "10000"},
             {"output_dir", "out/example3"}});
  } else if (name == "example4") {
    set_all({{"scheme", "GEPS"},
             {"schemes", "GEPS,JEPS,CONST"},
             {"eta", "0.01"},
             {"eps", "1e-8"},
             {"dim", "2"},
             {"nx", "100"},
             {"ny", "100"},
             {"dt", "1e-9"},
             {"t_end", "5e-5"},
             {"initial", "spinodal"},
             {"amplitude", "0.01"},
             {"seed", "1"},
             {"record_every", "100"},
             {"snapshot_every", "10000"},
             {"output_dir", "out/example4"}});
  } else {
    throw ConfigError("preset", "unknown preset '" + name + "'");
  }
  return b;
}

std::string to_manifest(const RunConfig& c) {
  std::ostringstream out;
  auto join = [](const auto& items, auto fmt) {
    std::string s;
    for (const auto& it : items) {
      if (!s.empty()) s += ',';
      s += fmt(it);
    }
    return s;
  };
  out << "scheme=" << to_string(c.params.scheme) << '\n'
      << "eta=" << format_double(c.params.eta) << '\n'
      << "eps=" << format_double(c.params.eps) << '\n'
      << "dim=" << c.dim << '\n'
      << "nx=" << c.nx << '\n';
  if (c.dim == 2) out << "ny=" << c.ny << '\n';
  out << "dt=" << format_double(c.params.dt) << '\n'
      << "t_end=" << format_double(c.t_end) << '\n'
      << "picard_tol=" << format_double(c.params.picard_tol) << '\n'
      << "picard_max_iter=" << c.params.picard_max_iter << '\n'
      << "linear_rtol=" << format_double(c.params.linear_rtol) << '\n'
      << "abort_on_fail=" << (c.abort_on_fail ? "true" : "false") << '\n'
      << "initial=" << initial_name(c.initial.kind) << '\n'
      << "amplitude=" << format_double(c.initial.amplitude) << '\n'
      << "seed=" << c.initial.seed << '\n';
  if (c.initial.kind == InitialKind::File) out << "field_file=" << c.initial.path.string() << '\n';
  out << "record_every=" << c.record_every << '\n'
      << "snapshot_every=" << c.snapshot_every << '\n'
      << "output_dir=" << c.output_dir.string() << '\n';
  if (!c.schemes.empty()) {
    out << "schemes=" << join(c.schemes, [](Scheme s) { return to_string(s); }) << '\n';
  }
  if (!c.sizes.empty()) {
    out << "sizes=" << join(c.sizes, [](std::size_t n) { return std::to_string(n); }) << '\n';
  }
  out << "reference=" << c.reference << '\n';
  if (c.has_reference_scheme) out << "reference_scheme=" << to_string(c.reference_scheme) << '\n';
  return out.str();
}

}  // namespace bpch
