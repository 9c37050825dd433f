#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>

namespace femf {

using Vec3 = std::array<double, 3>;
using ScalarFn = std::function<double(const Vec3 &)>;
using VectorFn = std::function<Vec3(const Vec3 &)>;

/// Raised when an argument lies outside the domain where the product measure
/// is defined (negative coordinates, the singular face x_k = l_k, bad alpha).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Per-axis parameters of an anisotropic fractal medium.
///
/// `alpha[k]` is the fractal dimension along axis k, `l[k]` the total extent
/// of the medium along that axis and `l0[k]` its characteristic length (for
/// porous media, the mean pore size).
struct FractalDims {
  Vec3 alpha{1.0, 1.0, 1.0};
  Vec3 l{1.0, 1.0, 1.0};
  Vec3 l0{1.0, 1.0, 1.0};

  static FractalDims isotropic(double a, double l = 1.0, double l0 = 1.0);

  /// Throws DomainError unless 0 < alpha_k <= 1, l_k > 0 and l0_k > 0.
  void validate() const;

  double total_dimension() const { return alpha[0] + alpha[1] + alpha[2]; }
  /// Dimension of a surface with normal along k.
  double surface_dimension(int k) const;
  bool euclidean(int k) const { return alpha[k] == 1.0; }
  bool euclidean() const { return euclidean(0) && euclidean(1) && euclidean(2); }
};

/// Density of the per-axis length measure, dl_k = c1(x_k) dx_k.
///
/// The power law below is the only built-in model; grids and integrators
/// accept any implementation whose coefficient depends on its own axis only.
class AxisMeasure {
public:
  virtual ~AxisMeasure() = default;
  virtual double density(int k, double x) const = 0;
  /// Exact integral of density over [a, b] along axis k.
  virtual double length(int k, double a, double b) const = 0;
};

class PowerLawMeasure final : public AxisMeasure {
public:
  explicit PowerLawMeasure(const FractalDims &dims);
  double density(int k, double x) const override;
  double length(int k, double a, double b) const override;
  const FractalDims &dims() const { return dims_; }

private:
  FractalDims dims_;
};

// Transformation coefficients of the power-law measure. Axis indices are
// zero-based throughout the library.

/// alpha_k ((l_k - x)/l0_k)^(alpha_k - 1); requires 0 <= x < l_k.
double c1_coeff(int k, double x, const FractalDims &dims);
/// Surface coefficient for the normal axis k: product of the other two c1.
double c2_coeff(int k, const Vec3 &x, const FractalDims &dims);
/// Volume coefficient c1 c1 c1.
double c3_coeff(const Vec3 &x, const FractalDims &dims);

/// Closed-form fractal length of [a, b] on axis k.
double fractal_length(int k, double a, double b, const FractalDims &dims);

/// Fractal arclength from the origin, xi(x) = fractal_length(k, 0, x).
inline double mapped_coordinate(int k, double x, const FractalDims &dims) {
  return fractal_length(k, 0.0, x, dims);
}

struct Box {
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{1.0, 1.0, 1.0};
};

/// Rectangle in the plane x_k = position; `lo`/`hi` refer to the two
/// tangential axes in increasing axis order.
struct Rect {
  double position = 0.0;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};
};

/// Integrand that factors as g0(x0) g1(x1) g2(x2). Empty factors mean 1.
struct SeparableFn {
  std::array<std::function<double(double)>, 3> factor;
  double operator()(const Vec3 &x) const;
};

/// Midpoint tensor-product quadrature of f c3 over `box`, n nodes per axis.
/// The box must stay off every singular face.
double integrate_volume(const ScalarFn &f, const Box &box,
                        const FractalDims &dims, int n);

/// Separable integrands are integrated axis by axis in the mapped
/// coordinate, which is exact for constant factors and allows boxes that
/// reach the singular face.
double integrate_volume(const SeparableFn &f, const Box &box,
                        const FractalDims &dims, int n);

/// Midpoint quadrature of f c2^(k) over a rectangle normal to axis k.
double integrate_surface(const ScalarFn &f, int k, const Rect &patch,
                         const FractalDims &dims, int n);

/// One-dimensional midpoint quadrature of g c1^(k) over [a, b].
double integrate_line(const std::function<double(double)> &g, int k, double a,
                      double b, const FractalDims &dims, int n);

/// Charge densities carried by the medium. The two symbols appear in
/// different places (total charge and conservation law) and are treated as
/// the same physical quantity by the solvers.
struct ChargeDensityField {
  ScalarFn rho;
  ScalarFn eta;
  /// Throws DomainError if either density is non-finite at a sample of a
  /// uniform n^3 lattice over `box`.
  void check_finite(const Box &box, int n) const;
};

/// Axes tangential to a plane with normal k, in increasing order.
constexpr std::array<int, 2> tangential_axes(int k) {
  return k == 0 ? std::array<int, 2>{1, 2}
                : (k == 1 ? std::array<int, 2>{0, 2} : std::array<int, 2>{0, 1});
}

} // namespace femf
