#include "bpch/initial_conditions.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace bpch {

NodalField two_balls(const MeshPtr& mesh, double eta) {
  if (mesh->dim() != 1) {
    throw std::invalid_argument("two_balls: only 1D meshes are supported");
  }
  if (!(eta > 0.0)) {
    throw std::invalid_argument("two_balls: eta must be positive");
  }
  const double width = std::sqrt(2.0) * eta;
  Vector v(static_cast<Eigen::Index>(mesh->num_nodes()));
  for (std::size_t i = 0; i < mesh->num_nodes(); ++i) {
    const double x = mesh->coord(i)[0];
    const double t1 = std::tanh((std::abs(x - 0.3) - 0.08) / width);
    const double t2 = std::tanh((std::abs(x - 0.72) - 0.15) / width);
    v[static_cast<Eigen::Index>(i)] = -0.5 * (t1 + t2) + 1.0;
  }
  return NodalField(mesh, std::move(v));
}

NodalField spinodal(const MeshPtr& mesh, double amplitude, std::uint64_t seed) {
  if (!(amplitude >= 0.0 && amplitude < 0.5)) {
    throw std::invalid_argument("spinodal: amplitude must lie in [0, 0.5)");
  }
  std::mt19937_64 gen(seed);
  Vector v(static_cast<Eigen::Index>(mesh->num_nodes()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    v[i] = 0.5 + amplitude * (2.0 * u - 1.0);
  }
  return NodalField(mesh, std::move(v));
}

NodalField load_field(const std::filesystem::path& path, const MeshPtr& mesh) {
  std::ifstream in(path);
  if (!in) throw FieldFileError("cannot open field file " + path.string());

  Vector v(static_cast<Eigen::Index>(mesh->num_nodes()));
  std::size_t count = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
      throw FieldFileError(path.string() + ":" + std::to_string(line_no) +
                           ": cannot parse '" + std::string(begin, end) + "'");
    }
    if (count >= mesh->num_nodes()) {
      throw FieldFileError(path.string() + ": more values than the " +
                           std::to_string(mesh->num_nodes()) + " mesh nodes");
    }
    v[static_cast<Eigen::Index>(count++)] = value;
  }
  if (count != mesh->num_nodes()) {
    throw FieldFileError(path.string() + ": expected " + std::to_string(mesh->num_nodes()) +
                         " values, found " + std::to_string(count));
  }
  return NodalField(mesh, std::move(v));
}

void save_field(const std::filesystem::path& path, const NodalField& field) {
  std::ofstream out(path);
  if (!out) throw FieldFileError("cannot write field file " + path.string());
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < field.values.size(); ++i) out << field.values[i] << '\n';
  if (!out) throw FieldFileError("write failed for " + path.string());
}

NodalField make_initial(const InitialSpec& spec, const MeshPtr& mesh) {
  switch (spec.kind) {
    case InitialKind::TwoBalls: return two_balls(mesh, spec.eta);
    case InitialKind::Spinodal: return spinodal(mesh, spec.amplitude, spec.seed);
    case InitialKind::File: return load_field(spec.path, mesh);
  }
  throw std::invalid_argument("unknown initial condition kind");
}

}  // namespace bpch
