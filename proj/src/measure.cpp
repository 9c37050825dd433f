#include "femf/measure.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <fmt/format.h>

namespace femf {

namespace {

void check_axis(int k) {
  if (k < 0 || k > 2)
    throw DomainError(fmt::format("axis index {} out of range [0,2]", k));
}

void check_resolution(int n) {
  if (n < 2)
    throw DomainError(fmt::format("quadrature resolution {} must be >= 2", n));
}

// Mapped coordinate measured from the singular face: l0 ((l - x)/l0)^alpha.
double distance_power(int k, double x, const FractalDims &d) {
  return d.l0[k] * std::pow((d.l[k] - x) / d.l0[k], d.alpha[k]);
}

// Inverse of xi(x) on axis k.
double unmap(int k, double xi, const FractalDims &d) {
  if (d.euclidean(k))
    return xi;
  const double total = distance_power(k, 0.0, d);
  const double rest = std::max(total - xi, 0.0);
  return d.l[k] - d.l0[k] * std::pow(rest / d.l0[k], 1.0 / d.alpha[k]);
}

void check_box(const Box &box, const FractalDims &dims, bool allow_singular) {
  for (int k = 0; k < 3; ++k) {
    if (!(box.lo[k] >= 0.0 && box.lo[k] <= box.hi[k] && box.hi[k] <= dims.l[k]))
      throw DomainError(fmt::format(
          "box [{}, {}] on axis {} is outside [0, l={}]", box.lo[k], box.hi[k], k,
          dims.l[k]));
    if (!allow_singular && !dims.euclidean(k) && box.hi[k] >= dims.l[k])
      throw DomainError(fmt::format(
          "box touches the singular face x{} = l{} = {} (alpha={})", k, k,
          dims.l[k], dims.alpha[k]));
  }
}

} // namespace

FractalDims FractalDims::isotropic(double a, double l, double l0) {
  return FractalDims{{a, a, a}, {l, l, l}, {l0, l0, l0}};
}

void FractalDims::validate() const {
  for (int k = 0; k < 3; ++k) {
    if (!(alpha[k] > 0.0 && alpha[k] <= 1.0))
      throw DomainError(
          fmt::format("alpha must lie in (0,1]: alpha[{}] = {}", k, alpha[k]));
    if (!(l[k] > 0.0) || !std::isfinite(l[k]))
      throw DomainError(fmt::format("l[{}] = {} must be positive", k, l[k]));
    if (!(l0[k] > 0.0) || !std::isfinite(l0[k]))
      throw DomainError(fmt::format("l0[{}] = {} must be positive", k, l0[k]));
  }
}

double FractalDims::surface_dimension(int k) const {
  check_axis(k);
  const auto t = tangential_axes(k);
  return alpha[t[0]] + alpha[t[1]];
}

PowerLawMeasure::PowerLawMeasure(const FractalDims &dims) : dims_(dims) {
  dims_.validate();
}

double PowerLawMeasure::density(int k, double x) const {
  return c1_coeff(k, x, dims_);
}

double PowerLawMeasure::length(int k, double a, double b) const {
  return fractal_length(k, a, b, dims_);
}

double c1_coeff(int k, double x, const FractalDims &dims) {
  check_axis(k);
  if (!(x >= 0.0 && x < dims.l[k]))
    throw DomainError(fmt::format(
        "c1 coefficient on axis {} requires 0 <= x < l = {}, got x = {}", k,
        dims.l[k], x));
  const double a = dims.alpha[k];
  if (a == 1.0)
    return 1.0;
  return a * std::pow((dims.l[k] - x) / dims.l0[k], a - 1.0);
}

double c2_coeff(int k, const Vec3 &x, const FractalDims &dims) {
  check_axis(k);
  const auto t = tangential_axes(k);
  return c1_coeff(t[0], x[t[0]], dims) * c1_coeff(t[1], x[t[1]], dims);
}

double c3_coeff(const Vec3 &x, const FractalDims &dims) {
  return c1_coeff(0, x[0], dims) * c1_coeff(1, x[1], dims) *
         c1_coeff(2, x[2], dims);
}

double fractal_length(int k, double a, double b, const FractalDims &dims) {
  check_axis(k);
  if (!(a >= 0.0 && a <= b && b <= dims.l[k]))
    throw DomainError(fmt::format(
        "interval [{}, {}] is not inside [0, l={}] on axis {}", a, b, dims.l[k], k));
  if (dims.euclidean(k))
    return b - a;
  return distance_power(k, a, dims) - distance_power(k, b, dims);
}

double SeparableFn::operator()(const Vec3 &x) const {
  double v = 1.0;
  for (int k = 0; k < 3; ++k)
    if (factor[k])
      v *= factor[k](x[k]);
  return v;
}

double integrate_volume(const ScalarFn &f, const Box &box,
                        const FractalDims &dims, int n) {
  dims.validate();
  check_resolution(n);
  check_box(box, dims, false);
  Vec3 h{};
  std::array<std::vector<double>, 3> nodes, weights;
  for (int k = 0; k < 3; ++k) {
    h[k] = (box.hi[k] - box.lo[k]) / n;
    for (int i = 0; i < n; ++i) {
      const double x = box.lo[k] + (i + 0.5) * h[k];
      nodes[k].push_back(x);
      weights[k].push_back(c1_coeff(k, x, dims) * h[k]);
    }
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double wij = weights[0][i] * weights[1][j];
      for (int m = 0; m < n; ++m)
        sum += f({nodes[0][i], nodes[1][j], nodes[2][m]}) * wij * weights[2][m];
    }
  return sum;
}

double integrate_volume(const SeparableFn &f, const Box &box,
                        const FractalDims &dims, int n) {
  dims.validate();
  check_resolution(n);
  check_box(box, dims, true);
  double product = 1.0;
  for (int k = 0; k < 3; ++k) {
    const double xa = mapped_coordinate(k, box.lo[k], dims);
    const double xb = mapped_coordinate(k, box.hi[k], dims);
    if (!f.factor[k]) {
      product *= xb - xa;
      continue;
    }
    const double dxi = (xb - xa) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      s += f.factor[k](unmap(k, xa + (i + 0.5) * dxi, dims));
    product *= s * dxi;
  }
  return product;
}

double integrate_surface(const ScalarFn &f, int k, const Rect &patch,
                         const FractalDims &dims, int n) {
  dims.validate();
  check_axis(k);
  check_resolution(n);
  const auto t = tangential_axes(k);
  Box box;
  box.lo[k] = box.hi[k] = patch.position;
  for (int a = 0; a < 2; ++a) {
    box.lo[t[a]] = patch.lo[a];
    box.hi[t[a]] = patch.hi[a];
  }
  if (!(patch.position >= 0.0 && patch.position <= dims.l[k]))
    throw DomainError(fmt::format("patch plane x{} = {} outside [0, {}]", k,
                                  patch.position, dims.l[k]));
  for (int a = 0; a < 2; ++a) {
    const int ax = t[a];
    if (!(box.lo[ax] >= 0.0 && box.lo[ax] <= box.hi[ax] && box.hi[ax] <= dims.l[ax]))
      throw DomainError(fmt::format("patch extent on axis {} is outside [0, {}]",
                                    ax, dims.l[ax]));
    if (!dims.euclidean(ax) && box.hi[ax] >= dims.l[ax])
      throw DomainError(
          fmt::format("patch touches the singular face x{} = {}", ax, dims.l[ax]));
  }
  std::array<std::vector<double>, 2> nodes, weights;
  for (int a = 0; a < 2; ++a) {
    const int ax = t[a];
    const double h = (box.hi[ax] - box.lo[ax]) / n;
    for (int i = 0; i < n; ++i) {
      const double x = box.lo[ax] + (i + 0.5) * h;
      nodes[a].push_back(x);
      weights[a].push_back(c1_coeff(ax, x, dims) * h);
    }
  }
  double sum = 0.0;
  Vec3 x{};
  x[k] = patch.position;
  for (int i = 0; i < n; ++i) {
    x[t[0]] = nodes[0][i];
    for (int j = 0; j < n; ++j) {
      x[t[1]] = nodes[1][j];
      sum += f(x) * weights[0][i] * weights[1][j];
    }
  }
  return sum;
}

double integrate_line(const std::function<double(double)> &g, int k, double a,
                      double b, const FractalDims &dims, int n) {
  check_axis(k);
  check_resolution(n);
  if (!(a >= 0.0 && a <= b && b <= dims.l[k]))
    throw DomainError(fmt::format("segment [{}, {}] outside [0, {}] on axis {}",
                                  a, b, dims.l[k], k));
  if (!dims.euclidean(k) && b >= dims.l[k])
    throw DomainError(
        fmt::format("segment touches the singular face x{} = {}", k, dims.l[k]));
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = a + (i + 0.5) * h;
    s += g(x) * c1_coeff(k, x, dims);
  }
  return s * h;
}

void ChargeDensityField::check_finite(const Box &box, int n) const {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) {
        Vec3 x{};
        const std::array<int, 3> idx{i, j, m};
        for (int k = 0; k < 3; ++k)
          x[k] = box.lo[k] + (idx[k] + 0.5) * (box.hi[k] - box.lo[k]) / n;
        if ((rho && !std::isfinite(rho(x))) || (eta && !std::isfinite(eta(x))))
          throw DomainError(fmt::format("non-finite charge density at ({}, {}, {})",
                                        x[0], x[1], x[2]));
      }
}

} // namespace femf
