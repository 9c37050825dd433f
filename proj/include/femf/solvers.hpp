#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "femf/calculus.hpp"

namespace femf {

enum class Units : std::uint8_t { SiNormalized, Gaussian };
enum class Boundary : std::uint8_t { Pec, Periodic };
using Boundaries = std::array<Boundary, 3>;

inline constexpr Boundaries kAllPec{Boundary::Pec, Boundary::Pec, Boundary::Pec};

/// Constitutive constants and tensors.
///
/// In SI-normalized mode c is derived from eps0 and mu0. Gaussian mode uses
/// c directly with D = E, H = B in vacuum. `sigma` is the conductivity of
/// the conductor equation; `kappa` is the tensor multiplying the second time
/// derivative of the dielectric equation.
struct Material {
  Units units = Units::SiNormalized;
  double eps0 = 1.0;
  double mu0 = 1.0;
  double c = 1.0;
  Eigen::Matrix3d sigma = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d kappa = Eigen::Matrix3d::Identity();

  static Material si(double eps0 = 1.0, double mu0 = 1.0);
  static Material gaussian(double c = 1.0);
  /// Throws DomainError on non-symmetric or indefinite tensors, non-positive
  /// constants, or c^2 eps0 mu0 != 1 in SI-normalized mode.
  void validate() const;
};

double min_eigenvalue(const Eigen::Matrix3d &m);

/// Prescribed sources and initial data. Any member may be left empty.
struct Source {
  /// Initial E on edges.
  VectorFn e0;
  /// Initial B is the primal curl of this edge potential, so it starts
  /// discretely divergence-free.
  VectorFn vector_potential0;
  /// Initial dE/dt for the dielectric equation.
  VectorFn e_rate0;
  /// Initial H for the conductor equation (collocated at centers).
  VectorFn h0;
  /// Current density J(x, t) = profile(t) current(x) on edges.
  VectorFn current;
  std::function<double(double)> profile;
  std::function<double(double)> profile_rate;
  /// Optional closed form of div_D current(x), used by the charge check.
  ScalarFn current_divergence;

  double amplitude(double t) const { return profile ? profile(t) : 1.0; }
  double amplitude_rate(double t) const { return profile_rate ? profile_rate(t) : 0.0; }
};

struct SimConfig {
  FractalDims dims;
  std::array<int, 3> n{16, 16, 16};
  Vec3 L{0.8, 0.8, 0.8};
  /// Non-positive entries select the default margin.
  Vec3 margin{0.0, 0.0, 0.0};
  Material material;
  Boundaries boundary = kAllPec;
  double cfl = 0.9;
  /// Explicit time step; 0 derives it from the CFL factor.
  double dt = 0.0;
  long steps = 100;
  /// Frame interval in steps; 0 records no frames.
  int cadence = 0;
  Source source;
  /// Scale the Poynting vector by c/4pi (Gaussian texts).
  bool gaussian_poynting = false;

  /// Throws DomainError on the first invalid field.
  void validate() const;
  StaggeredGrid build_grid() const;
};

struct FieldState {
  /// Maxwell: E at t, B at t - dt/2. Dielectric: E at t, `e_prev` at t - dt.
  /// Conductor: H collocated at centers in `h`. J holds the spatial shape of
  /// the current; the applied current is J scaled by the source profile.
  FieldArray E, B, J, e_prev, h;
  double t = 0.0;
  long step = 0;

  FieldArray displacement(const Material &m) const;
  FieldArray magnetic_intensity(const Material &m) const;
};

/// Snapshot of the primary field of a run (E for the wave solvers, H for
/// the conductor) after `step` steps.
struct Frame {
  long step = 0;
  double t = 0.0;
  FieldArray field;
};

/// Non-finite values during a run; carries the offending frame.
class SolverAbort : public std::runtime_error {
public:
  SolverAbort(const std::string &what, Frame frame)
      : std::runtime_error(what), frame(std::move(frame)) {}
  Frame frame;
};

/// One row per time level. Columns that do not apply to a run stay zero.
struct DiagnosticRow {
  long step = 0;
  double t = 0.0;
  double energy = 0.0;
  double surface = 0.0;
  double joule = 0.0;
  double rate = 0.0;
  double closure = 0.0;
  double div_b = 0.0;
  double div_e = 0.0;
  double norm = 0.0;
};

struct Trajectory {
  StaggeredGrid grid;
  double dt = 0.0;
  std::vector<Frame> frames;
  std::vector<DiagnosticRow> rows;
  FieldState final;
};

// Boundary helpers shared by the steppers.
Closures dual_closures(const Boundaries &b);
Closures neumann_closures(const Boundaries &b);
void zero_tangential(FieldArray &e, const Boundaries &b);
/// Copies index 0 onto the duplicate index n along periodic axes.
void sync_periodic(FieldArray &f, const Boundaries &b);

/// max over axes of (1/(c1 h))^2 summed over the three axes.
double stiffness(const StaggeredGrid &g);

/// Largest stable leapfrog step times the CFL factor.
double cfl_dt(const StaggeredGrid &g, const Material &m, double cfl = 0.9);
double conductor_dt_limit(const StaggeredGrid &g, const Material &m);
double dielectric_dt(const StaggeredGrid &g, const Material &m, double cfl = 0.9);

/// Resolved step: config dt if set, otherwise from the CFL factor.
double maxwell_dt(const SimConfig &cfg, const StaggeredGrid &g);

FieldState init_maxwell(const SimConfig &cfg, const StaggeredGrid &g, double dt);
/// B <- B - dt curl E.
void advance_b(FieldState &s, const StaggeredGrid &g, double dt);
/// E <- E + dt (c^2 curl B - J/eps0) with J at t + dt/2, then boundary
/// conditions; advances the clock.
void advance_e(FieldState &s, const StaggeredGrid &g, const SimConfig &cfg, double dt);
void step_maxwell(FieldState &s, const StaggeredGrid &g, const SimConfig &cfg, double dt);

FieldArray sample_current(const StaggeredGrid &g, const Source &src, double t);

/// Max |div_D B| over all centers.
double divergence_b(const FieldArray &b, const StaggeredGrid &g);
/// Max |div_D E| over interior nodes.
double divergence_e(const FieldArray &e, const StaggeredGrid &g);

Trajectory run_maxwell(const SimConfig &cfg);

/// dH/dt = c^2 sigma^-1 lap_D H on collocated centers.
Trajectory run_conductor(const SimConfig &cfg);

/// kappa^-1 (-c^2 curl curl E - 4 pi dJ/dt).
FieldArray dielectric_acceleration(const FieldArray &e, const FieldArray &j_rate,
                                   const StaggeredGrid &g, const Material &m,
                                   const Boundaries &b);
FieldState init_dielectric(const SimConfig &cfg, const StaggeredGrid &g, double dt);
void step_dielectric(FieldState &s, const StaggeredGrid &g, const SimConfig &cfg, double dt);
/// Swaps the two time levels so that steps of -dt retrace the run; `dt` is
/// the step used so far.
void reverse_dielectric(FieldState &s, double dt);
Trajectory run_dielectric(const SimConfig &cfg);

struct PotentialFields {
  FieldArray E, B, B_rate;
};

/// Fields from an edge vector potential A (with its time derivative) and a
/// node scalar potential chi, with each coefficient inside its derivative.
/// `B_rate` is the same curl applied to dA/dt.
PotentialFields potentials_to_fields(const FieldArray &a, const FieldArray &a_rate,
                                     const FieldArray &chi, const StaggeredGrid &g);

} // namespace femf
