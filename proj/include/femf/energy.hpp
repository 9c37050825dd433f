#pragma once

#include <vector>

#include "femf/solvers.hpp"

namespace femf {

/// Quadrature weights h^3 c3 at the sites of one component. Integer sites on
/// the boundary of a PEC axis get half weight; the duplicate index n of a
/// periodic axis gets zero.
Component quadrature_weights(const StaggeredGrid &g, const Parity &p,
                             const Boundaries &b);

/// Weighted inner product sum_c sum_sites w a_c b_c of two fields with the
/// same layout.
double weighted_dot(const FieldArray &a, const FieldArray &b, const StaggeredGrid &g,
                    const Boundaries &bc);

/// G = E x H on faces, component k on the k-faces. Inputs may sit on edges,
/// faces or centers; each factor is averaged onto the face sites first.
/// With `gaussian` the result carries the c/4pi prefactor.
FieldArray poynting(const FieldArray &e, const FieldArray &h, const StaggeredGrid &g,
                    bool gaussian = false, double c = 1.0);

/// Outward flux of a face field through the non-periodic boundary planes,
/// each face weighted by its surface coefficient.
double surface_flux(const FieldArray &g_face, const StaggeredGrid &g, const Boundaries &b);

/// Discrete field energy at an integer time level:
///   eps/2 |E^n|^2 + 1/(2 mu) <B^{n-1/2}, B^{n+1/2}>
/// (Gaussian mode: both coefficients are 1/(8 pi)).
double field_energy(const FieldArray &e, const FieldArray &b_before, const FieldArray &b_after,
                    const StaggeredGrid &g, const Material &m, const Boundaries &bc);

/// Integral of J . E against the volume measure.
double joule_power(const FieldArray &j, const FieldArray &e, const StaggeredGrid &g,
                   const Boundaries &bc);

/// Longest light-crossing time of the box measured in the mapped coordinate.
double crossing_time(const StaggeredGrid &g, double c);

struct EnergyBalance {
  std::vector<DiagnosticRow> rows;
  double max_closure = 0.0;
  double time_scale = 0.0;
};

/// Fills `rate` by centered differences of the energy column and `closure`
/// = |surface + joule + rate| * tau / W, with tau the crossing time and W the
/// largest energy in the run. End rows keep closure 0.
EnergyBalance energy_balance(std::vector<DiagnosticRow> rows, const StaggeredGrid &g,
                             double c);

struct ForceDensities {
  FieldArray electric;
  FieldArray magnetic;
};

/// f_E = rho E + (P . grad_D) E and f_M = k J x B + (M . grad_D) B at cell
/// centers, with k = 1/c in Gaussian units and 1 otherwise. Empty rho, P or
/// M count as zero. E and J on edges, B on faces, rho a center scalar, P and
/// M center vectors.
ForceDensities force_densities(const FieldArray &e, const FieldArray &b, const FieldArray &j,
                               const FieldArray &rho, const FieldArray &p,
                               const FieldArray &mag, const StaggeredGrid &g,
                               const Material &m);

} // namespace femf
