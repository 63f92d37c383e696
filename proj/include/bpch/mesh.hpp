#pragma once

#include <array>
#include <cstddef>
#include <algorithm>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpch {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simplex of a structured mesh. `nodes[0]` is the reference vertex x0 and
/// `nodes[k]` (k = 1..dim) its neighbour along axis k-1. `step[k-1]` is the
/// signed coordinate offset x_k - x0 along that axis, so |step| = h_k.
struct Element {
  std::array<std::size_t, 3> nodes{};
  std::array<double, 2> step{};
};

/// Axis-aligned mesh of the unit interval or the unit square.
///
/// In 2D every cell [i, i+1] x [j, j+1] is cut along its lower-left to
/// upper-right diagonal; each of the two right triangles uses its right-angle
/// corner as x0. Nodes are numbered row-major: node = j * (nx + 1) + i.
class StructuredMesh {
 public:
  static StructuredMesh interval(std::size_t nx);
  static StructuredMesh grid(std::size_t nx, std::size_t ny);

  int dim() const { return dim_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  /// Largest axis spacing.
  double h() const { return dim_ == 1 ? hx_ : std::max(hx_, hy_); }

  std::size_t num_nodes() const { return coords_.size(); }
  std::size_t num_elements() const { return elements_.size(); }

  const std::array<double, 2>& coord(std::size_t node) const { return coords_[node]; }
  const std::vector<std::array<double, 2>>& coords() const { return coords_; }
  const std::vector<Element>& elements() const { return elements_; }
  const Element& element(std::size_t e) const { return elements_[e]; }

  /// |I_i|; identical for all elements of a structured mesh.
  double element_measure() const { return measure_; }

  /// Node index of grid point (i, j); j is ignored in 1D.
  std::size_t node_index(std::size_t i, std::size_t j = 0) const {
    return j * (nx_ + 1) + i;
  }

  /// True when every node of `coarse` is a node of this mesh and the
  /// triangulations nest (integer refinement factor per axis).
  bool refines(const StructuredMesh& coarse) const;

  /// Evaluate the P1 function with nodal `values` at point (x, y).
  double evaluate(std::span<const double> values, double x, double y = 0.0) const;

 private:
  StructuredMesh() = default;

  int dim_ = 1;
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  double hx_ = 0.0;
  double hy_ = 0.0;
  double measure_ = 0.0;
  std::vector<std::array<double, 2>> coords_;
  std::vector<Element> elements_;
};

using MeshPtr = std::shared_ptr<const StructuredMesh>;

MeshPtr build_interval(std::size_t nx);
MeshPtr build_grid(std::size_t nx, std::size_t ny);

}  // namespace bpch
