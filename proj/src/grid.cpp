#include "femf/grid.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string_view>

#include <fmt/format.h>

namespace femf {

Parity parity_of(Location loc, int component) {
  switch (loc) {
  case Location::Node:
    return {0, 0, 0};
  case Location::Center:
    return {1, 1, 1};
  case Location::Edge: {
    Parity p{0, 0, 0};
    p[component] = 1;
    return p;
  }
  case Location::Face: {
    Parity p{1, 1, 1};
    p[component] = 0;
    return p;
  }
  }
  throw std::invalid_argument("unknown location");
}

FieldArray::FieldArray(Location loc, std::vector<Component> comps)
    : location_(loc), comps_(std::move(comps)) {}

double FieldArray::max_abs() const {
  double m = 0.0;
  for (const auto &c : comps_)
    for (double v : c.data)
      m = std::max(m, std::abs(v));
  return m;
}

void FieldArray::require_finite(const char *what) const {
  for (std::size_t c = 0; c < comps_.size(); ++c) {
    const auto &comp = comps_[c];
    for (std::size_t n = 0; n < comp.data.size(); ++n) {
      if (std::isfinite(comp.data[n]))
        continue;
      const std::size_t k = n % comp.extents[2];
      const std::size_t j = (n / comp.extents[2]) % comp.extents[1];
      const std::size_t i = n / (comp.extents[2] * comp.extents[1]);
      throw std::runtime_error(fmt::format(
          "{}: non-finite value {} in component {} at site ({}, {}, {})", what,
          comp.data[n], c, i, j, k));
    }
  }
}

namespace {
void check_same_layout(const FieldArray &a, const FieldArray &b) {
  if (a.location() != b.location() || a.components() != b.components())
    throw LayoutError("field layout mismatch");
  for (int c = 0; c < a.components(); ++c)
    if (a[c].extents != b[c].extents)
      throw LayoutError("field shape mismatch");
}
} // namespace

FieldArray &FieldArray::operator+=(const FieldArray &o) { return axpy(1.0, o); }
FieldArray &FieldArray::operator-=(const FieldArray &o) { return axpy(-1.0, o); }

FieldArray &FieldArray::operator*=(double s) {
  for (auto &c : comps_)
    for (double &v : c.data)
      v *= s;
  return *this;
}

FieldArray &FieldArray::axpy(double s, const FieldArray &o) {
  check_same_layout(*this, o);
  for (std::size_t c = 0; c < comps_.size(); ++c) {
    auto &d = comps_[c].data;
    const auto &e = o.comps_[c].data;
    for (std::size_t n = 0; n < d.size(); ++n)
      d[n] += s * e[n];
  }
  return *this;
}

FieldArray operator+(FieldArray a, const FieldArray &b) { return a += b; }
FieldArray operator-(FieldArray a, const FieldArray &b) { return a -= b; }
FieldArray operator*(double s, FieldArray a) { return a *= s; }

Extents StaggeredGrid::extents(const Parity &p) const {
  Extents e{};
  for (int k = 0; k < 3; ++k)
    e[k] = static_cast<std::size_t>(n_[k] + 1 - p[k]);
  return e;
}

Vec3 default_margin(const FractalDims &dims) {
  return {0.05 * dims.l[0], 0.05 * dims.l[1], 0.05 * dims.l[2]};
}

StaggeredGrid build_grid(const std::array<int, 3> &n, const Vec3 &L,
                         const FractalDims &dims, const Vec3 &margin,
                         const AxisMeasure &measure) {
  dims.validate();
  StaggeredGrid g;
  for (int k = 0; k < 3; ++k) {
    if (n[k] < 4)
      throw DomainError(fmt::format("grid needs at least 4 cells per axis, n[{}] = {}",
                                    k, n[k]));
    if (!(margin[k] > 0.0))
      throw DomainError(fmt::format("margin[{}] = {} must be positive", k, margin[k]));
    if (!(L[k] > 0.0))
      throw DomainError(fmt::format("L[{}] = {} must be positive", k, L[k]));
    if (L[k] > dims.l[k] - margin[k])
      throw DomainError(fmt::format(
          "L[{}] = {} exceeds l - margin = {}: the measure coefficient is singular "
          "at x = l = {}, keep the grid at least the margin away from it",
          k, L[k], dims.l[k] - margin[k], dims.l[k]));
    g.n_[k] = n[k];
    g.L_[k] = L[k];
    g.h_[k] = L[k] / n[k];
    g.margin_[k] = margin[k];
    for (int p = 0; p < 2; ++p) {
      const std::size_t count = static_cast<std::size_t>(n[k] + 1 - p);
      auto &tab = g.coeff_[k][p];
      auto &inv = g.inv_coeff_[k][p];
      tab.resize(count);
      inv.resize(count);
      for (std::size_t m = 0; m < count; ++m) {
        tab[m] = measure.density(k, g.coordinate(k, p, m));
        if (!(tab[m] > 0.0) || !std::isfinite(tab[m]))
          throw DomainError(fmt::format("coefficient on axis {} at x = {} is {}", k,
                                        g.coordinate(k, p, m), tab[m]));
        inv[m] = 1.0 / tab[m];
      }
    }
  }
  g.dims_ = dims;
  return g;
}

StaggeredGrid build_grid(const std::array<int, 3> &n, const Vec3 &L,
                         const FractalDims &dims, const Vec3 &margin) {
  return build_grid(n, L, dims, margin, PowerLawMeasure(dims));
}

StaggeredGrid build_grid(const std::array<int, 3> &n, const Vec3 &L,
                         const FractalDims &dims) {
  return build_grid(n, L, dims, default_margin(dims));
}

Component make_component(const StaggeredGrid &g, const Parity &p) {
  Component c;
  c.parity = p;
  c.extents = g.extents(p);
  c.data.assign(c.extents[0] * c.extents[1] * c.extents[2], 0.0);
  return c;
}

FieldArray allocate_field(const StaggeredGrid &g, Location loc, bool vector) {
  const bool vec = vector || loc == Location::Edge || loc == Location::Face;
  std::vector<Component> comps;
  for (int c = 0; c < (vec ? 3 : 1); ++c)
    comps.push_back(make_component(g, parity_of(loc, c)));
  return FieldArray(loc, std::move(comps));
}

double coefficient_at(const StaggeredGrid &g, int k, std::size_t s) {
  if (k < 0 || k > 2)
    throw std::out_of_range(fmt::format("axis {} out of range", k));
  if (s > static_cast<std::size_t>(2 * g.cells(k)))
    throw std::out_of_range(
        fmt::format("staggered index {} outside [0, {}] on axis {}", s,
                    2 * g.cells(k), k));
  return g.coeff(k, static_cast<int>(s % 2))[s / 2];
}

namespace {
template <class F> void for_each_site(const Component &c, F &&f) {
  for (std::size_t i = 0; i < c.extents[0]; ++i)
    for (std::size_t j = 0; j < c.extents[1]; ++j)
      for (std::size_t k = 0; k < c.extents[2]; ++k)
        f(i, j, k);
}
} // namespace

FieldArray sample(const StaggeredGrid &g, Location loc, const ScalarFn &f) {
  auto out = allocate_field(g, loc, false);
  if (loc == Location::Edge || loc == Location::Face)
    throw LayoutError("scalar sampling needs a node or center location");
  auto &c = out[0];
  for_each_site(c, [&](std::size_t i, std::size_t j, std::size_t k) {
    c(i, j, k) = f(g.position(c.parity, i, j, k));
  });
  return out;
}

FieldArray sample(const StaggeredGrid &g, Location loc, const VectorFn &f) {
  auto out = allocate_field(g, loc, true);
  for (int d = 0; d < 3; ++d) {
    auto &c = out[d];
    for_each_site(c, [&](std::size_t i, std::size_t j, std::size_t k) {
      c(i, j, k) = f(g.position(c.parity, i, j, k))[d];
    });
  }
  return out;
}

std::uint8_t snapshot_tag(const FieldArray &f) {
  switch (f.location()) {
  case Location::Node:
    return f.is_vector() ? 4 : 0;
  case Location::Edge:
    return 1;
  case Location::Face:
    return 2;
  case Location::Center:
    return f.is_vector() ? 5 : 3;
  }
  throw std::invalid_argument("unknown location");
}

namespace {

void put_u32(std::ostream &os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i)
    b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  os.write(b, 4);
}

void put_f64(std::ostream &os, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int i = 0; i < 8; ++i)
    b[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  os.write(b, 8);
}

void read_exact(std::istream &is, char *b, std::size_t n) {
  if (!is.read(b, static_cast<std::streamsize>(n)))
    throw std::runtime_error("truncated FEMF snapshot");
}

std::uint32_t get_u32(std::istream &is) {
  unsigned char b[4];
  read_exact(is, reinterpret_cast<char *>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream &is) {
  unsigned char b[8];
  read_exact(is, reinterpret_cast<char *>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

} // namespace

void write_snapshot(std::ostream &os, const StaggeredGrid &g, const FieldArray &f) {
  os.write("FEMF", 4);
  put_u32(os, kSnapshotVersion);
  for (int k = 0; k < 3; ++k)
    put_u32(os, static_cast<std::uint32_t>(g.cells(k)));
  const char tag = static_cast<char>(snapshot_tag(f));
  os.write(&tag, 1);
  for (int c = 0; c < f.components(); ++c)
    for (double v : f[c].data)
      put_f64(os, v);
  if (!os)
    throw std::runtime_error("failed writing FEMF snapshot");
}

FieldArray read_snapshot(std::istream &is, std::array<int, 3> &cells) {
  char magic[4];
  read_exact(is, magic, 4);
  if (std::string_view(magic, 4) != "FEMF")
    throw std::runtime_error("not a FEMF snapshot (bad magic)");
  const auto version = get_u32(is);
  if (version != kSnapshotVersion)
    throw std::runtime_error(fmt::format("unsupported FEMF version {}", version));
  for (int k = 0; k < 3; ++k)
    cells[k] = static_cast<int>(get_u32(is));
  char tag = 0;
  read_exact(is, &tag, 1);
  static constexpr Location kLoc[] = {Location::Node, Location::Edge,
                                      Location::Face, Location::Center,
                                      Location::Node, Location::Center};
  const auto t = static_cast<unsigned char>(tag);
  if (t > 5)
    throw std::runtime_error(fmt::format("unknown FEMF location tag {}", t));
  const Location loc = kLoc[t];
  const int ncomp = (t == 0 || t == 3) ? 1 : 3;
  std::vector<Component> comps;
  for (int c = 0; c < ncomp; ++c) {
    Component comp;
    comp.parity = parity_of(loc, c);
    for (int k = 0; k < 3; ++k)
      comp.extents[k] = static_cast<std::size_t>(cells[k] + 1 - comp.parity[k]);
    comp.data.resize(comp.extents[0] * comp.extents[1] * comp.extents[2]);
    for (double &v : comp.data)
      v = get_f64(is);
    comps.push_back(std::move(comp));
  }
  return FieldArray(loc, std::move(comps));
}

} // namespace femf
