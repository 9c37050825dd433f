#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "femf/solvers.hpp"

namespace femf {

struct Measurement {
  std::string quantity;
  int n = 0;
  double absolute = 0.0;
  double relative = 0.0;
};

struct VerificationReport {
  std::string check;
  std::vector<Measurement> measurements;
  std::vector<int> resolutions;
  double observed_order = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  bool pass = false;
  std::string verdict;
  std::vector<std::string> notes;

  /// Aligned plain-text table, one measurement per line.
  std::string table() const;
  /// Flat key/value pairs (measurements as `<quantity>@<n>.abs` etc.).
  std::vector<std::pair<std::string, std::string>> records() const;
};

/// log(e_coarse / e_fine) / log(ratio).
double observed_order(double coarse, double fine, double ratio = 2.0);
std::vector<double> observed_orders(const std::vector<double> &errors, double ratio = 2.0);

using Jacobian = std::array<Vec3, 3>; // [i][j] = d f_i / d x_j

struct AnalyticField {
  VectorFn value;
  std::function<Jacobian(const Vec3 &)> jacobian;
};

struct TrialField {
  ScalarFn scalar;
  AnalyticField vector;
};

/// Seeded smooth fields: per component a constant, two sine waves with wave
/// numbers up to 3 and a bilinear term, all with O(1) coefficients.
std::vector<TrialField> trial_family(std::uint64_t seed, int count);

struct IdentityOptions {
  FractalDims dims;
  Vec3 L{0.8, 0.8, 0.8};
  int fields = 3;
  std::vector<int> resolutions{16, 32, 64};
  std::uint64_t seed = 1;
  double exact_tolerance = 1e-13;
  double order_band = 0.1;
};

/// div curl and curl grad on both lattice pairs (machine-precision class),
/// and the RMS gap between the staggered curl-curl and its expanded form
/// grad div - lap (second-order class).
VerificationReport check_identities(const IdentityOptions &opt);

/// Surface integral of n . curl_D f against the loop integral of f.dl
/// around a rectangle normal to axis k, with midpoint rules on both sides.
VerificationReport check_stokes(const AnalyticField &f, int k, const Rect &patch,
                                const FractalDims &dims, const std::vector<int> &resolutions,
                                double tolerance = 1e-3);

/// Flux through the six faces of `box` against the volume integral of the
/// fractal divergence.
VerificationReport check_green_gauss(const AnalyticField &f, const Box &box,
                                     const FractalDims &dims,
                                     const std::vector<int> &resolutions,
                                     double tolerance = 1e-3);

/// Residual of div_D J + d(eta)/dt at interior nodes of a Maxwell run, with
/// eta = eps0 div_D E and the rate from centered differences of
/// consecutive frames (cadence 1). Uses the source's closed-form
/// divergence when present, the discrete one otherwise.
VerificationReport check_charge_conservation(const Trajectory &tr, const SimConfig &cfg,
                                             double tolerance = 1e-2);

struct Potentials {
  VectorFn a;
  VectorFn a_rate;
  ScalarFn chi;
};

/// The fixed potentials used by the variational checks.
Potentials trial_potentials();

/// Faraday residual dB/dt + curl_D E and magnetic Gauss residual div_D B of
/// the fields built from the potentials, on `grid` and on the grid with
/// twice the cells. Verdict "consistent" when both vanish at second order.
VerificationReport check_variational_consistency(const Potentials &pot, const FractalDims &dims,
                                                 const StaggeredGrid &grid);

/// Faraday and Gauss RMS residuals on one grid.
std::pair<double, double> variational_residuals(const Potentials &pot, const StaggeredGrid &g);

struct VariationalSuiteOptions {
  FractalDims dims{{0.9, 0.6, 0.8}, {1, 1, 1}, {1, 1, 1}};
  int n = 16;
  Vec3 L{0.8, 0.8, 0.8};
  /// Reporting convention: anisotropy is declared when the Faraday residual
  /// exceeds this multiple of the isotropic baseline.
  double threshold = 10.0;
  std::vector<double> homotopy{0.0, 0.25, 0.5, 0.75, 1.0};
};

/// Isotropic baseline at alpha = min alpha_k (second-order vanishing),
/// anisotropic Faraday residual against threshold x baseline, and strict
/// growth along alpha(s) = (a + s (a0 - a), a, a) with a = min alpha_k.
VerificationReport check_variational_suite(const VariationalSuiteOptions &opt);

/// Generic convergence summary: pass when the final error is within
/// `tolerance` and the last observed order is at least `min_order` (or the
/// error is already below `floor`).
VerificationReport convergence_report(std::string check, std::string quantity,
                                      const std::vector<int> &resolutions,
                                      const std::vector<double> &errors, double tolerance,
                                      double min_order, double floor = 1e-10);

} // namespace femf
