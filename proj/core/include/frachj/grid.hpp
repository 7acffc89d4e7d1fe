#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace frachj {

enum class BoundaryMode { periodic, dirichlet_from_exact, dirichlet_frozen };

const char* to_string(BoundaryMode mode) noexcept;
BoundaryMode parse_boundary_mode(const std::string& name);

/// Spatial point; the second coordinate is ignored in 1D.
using Point = std::array<double, 2>;

/// Supplies values at ghost nodes just outside a Dirichlet grid.
using GhostProvider = std::function<double(const Point&)>;

/// Uniform node-centred grid with equal spacing on every axis.
///
/// Nodes sit at origin + i·h, i = 0..nodes_per_axis-1. A periodic grid
/// represents a torus of period nodes_per_axis·h (the node at the far end of
/// the box is identified with the origin). A Dirichlet grid includes both
/// box end points and reads one ghost layer from a GhostProvider.
/// Flat indices are row-major: index(i, j) = i·nodes_per_axis + j.
struct GridSpec {
  int dim = 1;
  double h = 0.1;
  Point origin{0.0, 0.0};
  std::size_t nodes_per_axis = 1;
  BoundaryMode boundary = BoundaryMode::periodic;

  /// Grid covering [lo, hi]^dim. Throws if (hi − lo)/h is not integral.
  static GridSpec on_box(int dim, double h, double lo, double hi, BoundaryMode mode);

  std::size_t node_count() const noexcept;
  std::size_t index(std::size_t i, std::size_t j = 0) const noexcept {
    return dim == 1 ? i : i * nodes_per_axis + j;
  }
  /// (i, j) for a flat index; j is 0 in 1D.
  std::array<std::size_t, 2> multi_index(std::size_t flat) const noexcept;
  Point node(std::size_t flat) const noexcept;
  double coordinate(std::size_t i, int axis) const noexcept {
    return origin[static_cast<std::size_t>(axis - 1)] + static_cast<double>(i) * h;
  }

  void validate() const;

  bool operator==(const GridSpec&) const = default;
};

/// Immutable scalar field on a GridSpec; every value is finite.
class GridFunction {
 public:
  GridFunction(GridSpec spec, std::vector<double> values);

  static GridFunction sample(const GridSpec& spec,
                             const std::function<double(const Point&)>& fn);
  static GridFunction constant(const GridSpec& spec, double value);

  const GridSpec& spec() const noexcept { return spec_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t flat) const noexcept { return values_[flat]; }
  double at(std::size_t i, std::size_t j = 0) const noexcept {
    return values_[spec_.index(i, j)];
  }

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

/// Per-node one-sided differences, 2·dim entries per node:
/// ((D₁⁺U)_{i,j}, (D₁⁺U)_{i−1,j}, (D₂⁺U)_{i,j}, (D₂⁺U)_{i,j−1}).
class DiscreteGradient {
 public:
  DiscreteGradient(int dim, std::vector<double> entries);

  int dim() const noexcept { return dim_; }
  std::size_t stride() const noexcept { return static_cast<std::size_t>(2 * dim_); }
  std::size_t node_count() const noexcept { return entries_.size() / stride(); }
  std::span<const double> at(std::size_t flat) const noexcept {
    return std::span<const double>(entries_).subspan(flat * stride(), stride());
  }
  /// max |entry| over all nodes.
  double sup_norm() const noexcept;

 private:
  int dim_;
  std::vector<double> entries_;
};

/// (U at the neighbour one step along `axis`) − U, divided by h.
/// Dirichlet grids need `ghost` for the last node on the axis.
GridFunction forward_diff(const GridFunction& u, int axis, const GhostProvider& ghost = {});

DiscreteGradient discrete_gradient(const GridFunction& u, const GhostProvider& ghost = {});

double sup_norm(const GridFunction& u) noexcept;
double sup_distance(const GridFunction& a, const GridFunction& b);

/// Formats with 17 significant digits (round-trips a double).
std::string format_real(double v);

/// Snapshot CSV: header, then one row per node (coordinates, value), row-major.
void write_csv(std::ostream& os, const GridFunction& u, const std::string& value_name = "value");

}  // namespace frachj
