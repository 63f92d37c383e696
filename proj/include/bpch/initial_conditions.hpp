#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "bpch/fespace.hpp"

namespace bpch {

class FieldFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitialKind { TwoBalls, Spinodal, File };

struct InitialSpec {
  InitialKind kind = InitialKind::TwoBalls;
  double eta = 0.005;          // TwoBalls
  double amplitude = 0.01;     // Spinodal
  std::uint64_t seed = 1;      // Spinodal
  std::filesystem::path path;  // File
};

/// Two phase-1 balls, centred at 0.3 (radius 0.08) and 0.72 (radius 0.15),
/// in a phase-0 background, with tanh interfaces of width ~ sqrt(2) eta.
/// 1D meshes only.
NodalField two_balls(const MeshPtr& mesh, double eta);

/// 0.5 + u_i with u_i uniform on [-amplitude, amplitude].
///
/// Generator: std::mt19937_64 seeded with `seed`; each node draws one 64-bit
/// word w and uses u = (w >> 11) * 2^-53 in [0, 1), mapped to
/// amplitude * (2u - 1). Nodes are visited in index order.
NodalField spinodal(const MeshPtr& mesh, double amplitude, std::uint64_t seed);

/// One value per line, ordered by node index.
NodalField load_field(const std::filesystem::path& path, const MeshPtr& mesh);
void save_field(const std::filesystem::path& path, const NodalField& field);

NodalField make_initial(const InitialSpec& spec, const MeshPtr& mesh);

}  // namespace bpch
