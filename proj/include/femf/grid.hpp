#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "femf/measure.hpp"

namespace femf {

/// Where a field lives on the staggered lattice. Vector fields on edges or
/// faces follow the Yee layout (component k along edge k / normal to face k);
/// node and center fields may be scalar or collocated vectors.
enum class Location : std::uint8_t { Node, Edge, Face, Center };

/// Operator applied to a field on the wrong kind of site.
class LayoutError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Per-axis site offset: 0 for integer (node) positions, 1 for half-integer
/// (cell-center) positions.
using Parity = std::array<int, 3>;
using Extents = std::array<std::size_t, 3>;

Parity parity_of(Location loc, int component);

/// One scalar array on the lattice, stored row-major with axis 0 slowest.
struct Component {
  Parity parity{};
  Extents extents{};
  std::vector<double> data;

  std::size_t size() const { return data.size(); }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * extents[1] + j) * extents[2] + k;
  }
  double &operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data[index(i, j, k)];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data[index(i, j, k)];
  }
};

class FieldArray {
public:
  FieldArray() = default;
  FieldArray(Location loc, std::vector<Component> comps);

  Location location() const { return location_; }
  int components() const { return static_cast<int>(comps_.size()); }
  bool is_vector() const { return comps_.size() == 3; }

  Component &operator[](int c) { return comps_[static_cast<std::size_t>(c)]; }
  const Component &operator[](int c) const {
    return comps_[static_cast<std::size_t>(c)];
  }

  double max_abs() const;
  /// Throws std::runtime_error naming the first non-finite entry.
  void require_finite(const char *what) const;

  FieldArray &operator+=(const FieldArray &o);
  FieldArray &operator-=(const FieldArray &o);
  FieldArray &operator*=(double s);
  /// this += s * o
  FieldArray &axpy(double s, const FieldArray &o);

private:
  Location location_ = Location::Node;
  std::vector<Component> comps_;
};

FieldArray operator+(FieldArray a, const FieldArray &b);
FieldArray operator-(FieldArray a, const FieldArray &b);
FieldArray operator*(double s, FieldArray a);

/// Uniform staggered lattice on [0,L0]x[0,L1]x[0,L2] with the per-axis
/// c1 coefficient tabulated at every integer and half-integer coordinate.
class StaggeredGrid {
public:
  const std::array<int, 3> &cells() const { return n_; }
  int cells(int k) const { return n_[k]; }
  const Vec3 &spacing() const { return h_; }
  double spacing(int k) const { return h_[k]; }
  const Vec3 &extent() const { return L_; }
  const FractalDims &dims() const { return dims_; }
  const Vec3 &margin() const { return margin_; }

  /// Coefficient table along axis k at parity p (n+1 entries for p = 0,
  /// n entries for p = 1).
  std::span<const double> coeff(int k, int p) const { return coeff_[k][p]; }
  std::span<const double> inv_coeff(int k, int p) const { return inv_coeff_[k][p]; }

  /// Coordinate of site m at parity p along axis k.
  double coordinate(int k, int p, std::size_t m) const {
    return (static_cast<double>(m) + 0.5 * p) * h_[k];
  }
  Vec3 position(const Parity &p, std::size_t i, std::size_t j, std::size_t k) const {
    return {coordinate(0, p[0], i), coordinate(1, p[1], j), coordinate(2, p[2], k)};
  }
  Extents extents(const Parity &p) const;
  std::size_t cell_count() const {
    return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
  }

private:
  friend StaggeredGrid build_grid(const std::array<int, 3> &, const Vec3 &,
                                  const FractalDims &, const Vec3 &,
                                  const AxisMeasure &);
  std::array<int, 3> n_{};
  Vec3 h_{};
  Vec3 L_{};
  Vec3 margin_{};
  FractalDims dims_;
  std::array<std::array<std::vector<double>, 2>, 3> coeff_;
  std::array<std::array<std::vector<double>, 2>, 3> inv_coeff_;
};

/// Default singularity margin, 5% of each axis extent l_k.
Vec3 default_margin(const FractalDims &dims);

/// Validates n_k >= 4, 0 < L_k <= l_k - margin_k, margin_k > 0 and builds the
/// coefficient tables from the power-law measure.
StaggeredGrid build_grid(const std::array<int, 3> &n, const Vec3 &L,
                         const FractalDims &dims, const Vec3 &margin);
StaggeredGrid build_grid(const std::array<int, 3> &n, const Vec3 &L,
                         const FractalDims &dims);
/// Same, with a user-supplied axis measure.
StaggeredGrid build_grid(const std::array<int, 3> &n, const Vec3 &L,
                         const FractalDims &dims, const Vec3 &margin,
                         const AxisMeasure &measure);

Component make_component(const StaggeredGrid &g, const Parity &p);
/// Zero-initialised field; `vector` selects three collocated components for
/// node/center locations (edge and face fields are always vectors).
FieldArray allocate_field(const StaggeredGrid &g, Location loc, bool vector = false);

/// Table lookup of c1 on axis k at staggered index s, where s = 2m + parity
/// (even s: node m, odd s: half site between nodes m and m+1).
double coefficient_at(const StaggeredGrid &g, int k, std::size_t s);

FieldArray sample(const StaggeredGrid &g, Location loc, const ScalarFn &f);
FieldArray sample(const StaggeredGrid &g, Location loc, const VectorFn &f);

// Binary snapshots: "FEMF", u32 version, u32 n0 n1 n2, u8 tag, then every
// component as little-endian f64 in row-major order. Tags: 0 node scalar,
// 1 edge vector, 2 face vector, 3 center scalar, 4 node vector,
// 5 center vector.
inline constexpr std::uint32_t kSnapshotVersion = 1;
std::uint8_t snapshot_tag(const FieldArray &f);
void write_snapshot(std::ostream &os, const StaggeredGrid &g, const FieldArray &f);
/// Reads a snapshot; `cells` receives the header's cell counts.
FieldArray read_snapshot(std::istream &is, std::array<int, 3> &cells);

} // namespace femf
