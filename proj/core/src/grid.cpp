#include "frachj/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "frachj/error.hpp"

namespace frachj {

const char* to_string(BoundaryMode mode) noexcept {
  switch (mode) {
    case BoundaryMode::periodic: return "periodic";
    case BoundaryMode::dirichlet_from_exact: return "dirichlet_from_exact";
    case BoundaryMode::dirichlet_frozen: return "dirichlet_frozen";
  }
  return "unknown";
}

BoundaryMode parse_boundary_mode(const std::string& name) {
  if (name == "periodic") return BoundaryMode::periodic;
  if (name == "dirichlet_from_exact" || name == "exact") return BoundaryMode::dirichlet_from_exact;
  if (name == "dirichlet_frozen" || name == "frozen") return BoundaryMode::dirichlet_frozen;
  throw Error(ErrorKind::configuration, "unknown boundary mode '" + name + "'");
}

GridSpec GridSpec::on_box(int dim, double h, double lo, double hi, BoundaryMode mode) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorKind::configuration, "grid spacing h must be positive");
  }
  if (!(hi > lo)) throw Error(ErrorKind::configuration, "box must satisfy lo < hi");
  const double cells = (hi - lo) / h;
  const double rounded = std::round(cells);
  if (rounded < 1.0 || std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells)) {
    throw Error(ErrorKind::configuration,
                "box length " + format_real(hi - lo) + " is not an integer multiple of h = " +
                    format_real(h));
  }
  GridSpec spec;
  spec.dim = dim;
  spec.h = h;
  spec.origin = {lo, dim == 2 ? lo : 0.0};
  spec.boundary = mode;
  const auto n = static_cast<std::size_t>(rounded);
  spec.nodes_per_axis = mode == BoundaryMode::periodic ? n : n + 1;
  spec.validate();
  return spec;
}

std::size_t GridSpec::node_count() const noexcept {
  return dim == 1 ? nodes_per_axis : nodes_per_axis * nodes_per_axis;
}

std::array<std::size_t, 2> GridSpec::multi_index(std::size_t flat) const noexcept {
  if (dim == 1) return {flat, 0};
  return {flat / nodes_per_axis, flat % nodes_per_axis};
}

Point GridSpec::node(std::size_t flat) const noexcept {
  const auto [i, j] = multi_index(flat);
  if (dim == 1) return {coordinate(i, 1), 0.0};
  return {coordinate(i, 1), coordinate(j, 2)};
}

void GridSpec::validate() const {
  if (dim != 1 && dim != 2) throw Error(ErrorKind::configuration, "grid dim must be 1 or 2");
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorKind::configuration, "grid spacing h must be positive");
  }
  const std::size_t min_nodes = boundary == BoundaryMode::periodic ? 3 : 2;
  if (nodes_per_axis < min_nodes) {
    throw Error(ErrorKind::configuration, "too few nodes per axis");
  }
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.node_count()) {
    throw Error(ErrorKind::length_mismatch, "GridFunction: value count does not match grid");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      const Point p = spec_.node(k);
      throw Error(ErrorKind::numerical, "GridFunction: non-finite value at node " +
                                            std::to_string(k) + " (" + format_real(p[0]) +
                                            ", " + format_real(p[1]) + ")");
    }
  }
}

GridFunction GridFunction::sample(const GridSpec& spec,
                                  const std::function<double(const Point&)>& fn) {
  std::vector<double> v(spec.node_count());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(spec.node(k));
  return GridFunction(spec, std::move(v));
}

GridFunction GridFunction::constant(const GridSpec& spec, double value) {
  return GridFunction(spec, std::vector<double>(spec.node_count(), value));
}

DiscreteGradient::DiscreteGradient(int dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {}

double DiscreteGradient::sup_norm() const noexcept {
  double m = 0.0;
  for (double e : entries_) m = std::max(m, std::abs(e));
  return m;
}

namespace {

// Value of u one step away from node (i, j) along `axis` (offset ±1).
double neighbour(const GridFunction& u, std::size_t i, std::size_t j, int axis, int offset,
                 const GhostProvider& ghost) {
  const GridSpec& s = u.spec();
  const auto n = static_cast<std::ptrdiff_t>(s.nodes_per_axis);
  std::ptrdiff_t a = static_cast<std::ptrdiff_t>(axis == 1 ? i : j) + offset;
  if (a >= 0 && a < n) {
    return axis == 1 ? u.at(static_cast<std::size_t>(a), j) : u.at(i, static_cast<std::size_t>(a));
  }
  if (s.boundary == BoundaryMode::periodic) {
    a = (a + n) % n;
    return axis == 1 ? u.at(static_cast<std::size_t>(a), j) : u.at(i, static_cast<std::size_t>(a));
  }
  if (!ghost) {
    throw Error(ErrorKind::missing_boundary,
                std::string("Dirichlet grid (") + to_string(s.boundary) +
                    ") needs a ghost value provider");
  }
  Point p = s.dim == 1 ? Point{s.coordinate(i, 1), 0.0}
                       : Point{s.coordinate(i, 1), s.coordinate(j, 2)};
  p[static_cast<std::size_t>(axis - 1)] += static_cast<double>(offset) * s.h;
  return ghost(p);
}

void check_axis(const GridSpec& s, int axis) {
  if (axis < 1 || axis > s.dim) {
    throw Error(ErrorKind::domain, "axis must be in [1, dim]");
  }
}

}  // namespace

GridFunction forward_diff(const GridFunction& u, int axis, const GhostProvider& ghost) {
  const GridSpec& s = u.spec();
  check_axis(s, axis);
  std::vector<double> out(u.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto [i, j] = s.multi_index(k);
    out[k] = (neighbour(u, i, j, axis, +1, ghost) - u[k]) / s.h;
  }
  return GridFunction(s, std::move(out));
}

DiscreteGradient discrete_gradient(const GridFunction& u, const GhostProvider& ghost) {
  const GridSpec& s = u.spec();
  const auto stride = static_cast<std::size_t>(2 * s.dim);
  std::vector<double> entries(u.size() * stride);
  for (std::size_t k = 0; k < u.size(); ++k) {
    const auto [i, j] = s.multi_index(k);
    for (int axis = 1; axis <= s.dim; ++axis) {
      const std::size_t base = k * stride + static_cast<std::size_t>(2 * (axis - 1));
      entries[base] = (neighbour(u, i, j, axis, +1, ghost) - u[k]) / s.h;
      entries[base + 1] = (u[k] - neighbour(u, i, j, axis, -1, ghost)) / s.h;
    }
  }
  return DiscreteGradient(s.dim, std::move(entries));
}

double sup_norm(const GridFunction& u) noexcept {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
  if (!(a.spec() == b.spec())) {
    throw Error(ErrorKind::length_mismatch, "sup_distance: grids differ");
  }
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const GridFunction& u, const std::string& value_name) {
  const GridSpec& s = u.spec();
  os << (s.dim == 1 ? "x," : "x,y,") << value_name << '\n';
  for (std::size_t k = 0; k < u.size(); ++k) {
    const Point p = s.node(k);
    os << format_real(p[0]) << ',';
    if (s.dim == 2) os << format_real(p[1]) << ',';
    os << format_real(u[k]) << '\n';
  }
}

}  // namespace frachj
