#include "bpch/mesh.hpp"

#include <cmath>

namespace bpch {

StructuredMesh StructuredMesh::interval(std::size_t nx) {
  if (nx < 2) {
    throw MeshError("interval mesh needs nx >= 2, got " + std::to_string(nx));
  }
  StructuredMesh m;
  m.dim_ = 1;
  m.nx_ = nx;
  m.ny_ = 0;
  m.hx_ = 1.0 / static_cast<double>(nx);
  m.hy_ = 0.0;
  m.measure_ = m.hx_;

  m.coords_.resize(nx + 1);
  for (std::size_t i = 0; i <= nx; ++i) {
    m.coords_[i] = {static_cast<double>(i) / static_cast<double>(nx), 0.0};
  }
  m.elements_.resize(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    Element& el = m.elements_[i];
    el.nodes = {i, i + 1, 0};
    el.step = {m.coords_[i + 1][0] - m.coords_[i][0], 0.0};
  }
  return m;
}

StructuredMesh StructuredMesh::grid(std::size_t nx, std::size_t ny) {
  if (nx < 2 || ny < 2) {
    throw MeshError("grid mesh needs nx, ny >= 2, got " + std::to_string(nx) +
                    "x" + std::to_string(ny));
  }
  StructuredMesh m;
  m.dim_ = 2;
  m.nx_ = nx;
  m.ny_ = ny;
  m.hx_ = 1.0 / static_cast<double>(nx);
  m.hy_ = 1.0 / static_cast<double>(ny);
  m.measure_ = 0.5 * m.hx_ * m.hy_;

  m.coords_.resize((nx + 1) * (ny + 1));
  for (std::size_t j = 0; j <= ny; ++j) {
    for (std::size_t i = 0; i <= nx; ++i) {
      m.coords_[m.node_index(i, j)] = {static_cast<double>(i) / static_cast<double>(nx),
                                       static_cast<double>(j) / static_cast<double>(ny)};
    }
  }

  auto offset = [&m](std::size_t from, std::size_t to, int axis) {
    return m.coords_[to][axis] - m.coords_[from][axis];
  };

  m.elements_.reserve(2 * nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t ll = m.node_index(i, j);
      const std::size_t lr = m.node_index(i + 1, j);
      const std::size_t ul = m.node_index(i, j + 1);
      const std::size_t ur = m.node_index(i + 1, j + 1);
      // below the diagonal: right angle at lr
      Element lower{{lr, ll, ur}, {offset(lr, ll, 0), offset(lr, ur, 1)}};
      // above the diagonal: right angle at ul
      Element upper{{ul, ur, ll}, {offset(ul, ur, 0), offset(ul, ll, 1)}};
      m.elements_.push_back(lower);
      m.elements_.push_back(upper);
    }
  }
  return m;
}

bool StructuredMesh::refines(const StructuredMesh& coarse) const {
  if (dim_ != coarse.dim_) return false;
  if (coarse.nx_ == 0 || nx_ % coarse.nx_ != 0) return false;
  if (dim_ == 2 && (coarse.ny_ == 0 || ny_ % coarse.ny_ != 0)) return false;
  return true;
}

double StructuredMesh::evaluate(std::span<const double> values, double x, double y) const {
  if (values.size() != num_nodes()) {
    throw MeshError("evaluate: value count does not match node count");
  }
  auto locate = [](double t, std::size_t n, double& local) {
    double scaled = t * static_cast<double>(n);
    double cell = std::floor(scaled);
    if (cell < 0.0) cell = 0.0;
    if (cell > static_cast<double>(n - 1)) cell = static_cast<double>(n - 1);
    local = scaled - cell;
    return static_cast<std::size_t>(cell);
  };

  double s = 0.0;
  const std::size_t i = locate(x, nx_, s);
  if (dim_ == 1) {
    return (1.0 - s) * values[i] + s * values[i + 1];
  }
  double t = 0.0;
  const std::size_t j = locate(y, ny_, t);
  const double v_ll = values[node_index(i, j)];
  const double v_lr = values[node_index(i + 1, j)];
  const double v_ul = values[node_index(i, j + 1)];
  const double v_ur = values[node_index(i + 1, j + 1)];
  if (s >= t) {
    return v_ll + s * (v_lr - v_ll) + t * (v_ur - v_lr);
  }
  return v_ll + t * (v_ul - v_ll) + s * (v_ur - v_ul);
}

MeshPtr build_interval(std::size_t nx) {
  return std::make_shared<const StructuredMesh>(StructuredMesh::interval(nx));
}

MeshPtr build_grid(std::size_t nx, std::size_t ny) {
  return std::make_shared<const StructuredMesh>(StructuredMesh::grid(nx, ny));
}

}  // namespace bpch
