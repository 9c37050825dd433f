#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "femf/solvers.hpp"

namespace femf {

/// A solver configuration with an exact solution for its final field.
/// `error` returns the relative discrete L2 error of the final primary field
/// of a trajectory produced from `config` (or from a variant that changes
/// only the resolution or the step).
struct OracleScenario {
  std::string name;
  SimConfig config;
  std::function<double(const Trajectory &)> error;
  double tolerance = 0.0;
};

/// Relative L2 distance between component `c` of `f` and `exact`, over every
/// site of that component.
double relative_l2(const FieldArray &f, int c, const StaggeredGrid &g, const ScalarFn &exact);

/// Time step that divides `t_end` into whole steps no larger than
/// cfl x the stability limit `limit`. Returns the step count.
long whole_steps(double t_end, double limit, double cfl, double &dt);

// 1-D runs vary along axis 0 only; axes 1 and 2 are Euclidean, 4 cells wide
// and periodic.

/// Classical plane wave E_y = cos 2pi(x - ct), one period, all axes periodic.
OracleScenario plane_wave(int n);

/// Gaussian pulse F(xi(x) - ct) through the Maxwell stepper at alpha_1.
OracleScenario maxwell_pulse(int n, double alpha = 0.5);

/// Gaussian pulse F(xi(x) - vt), v = c/sqrt(kappa), through the dielectric
/// equation at alpha_1.
OracleScenario dielectric_pulse(int n, double alpha = 0.7, double kappa = 1.0);

/// Gaussian of width s in xi spreading as the heat kernel under the
/// conductor equation with c^2/sigma = 1.
OracleScenario heat_kernel(int n, double alpha = 0.7);

/// alpha = 1 sinusoid cos(m pi x / L) under the conductor equation; the
/// oracle is its exponential decay.
OracleScenario heat_mode(int n, int mode = 1);

/// PEC cavity at alpha = (0.9, 0.6, 0.8) driven by a localized current
/// pulse, run to t = 1 at CFL factor 0.4.
SimConfig driven_cavity(int n);

/// alpha = 1 PEC cavity in its (1,1,0) mode with J = 0, run for `periods`
/// periods. Period in `period`.
SimConfig lossless_cavity(int n, double periods, double &period);

/// J = (x_1, 0, 0) ramped on as 1 - exp(-(t/tau)^2) at alpha_1 = 0.6, with
/// the closed-form divergence 1/c1 attached; cadence 1.
SimConfig charge_ramp(int n);

/// Source-free run at alpha = (0.9, 0.6, 0.8), E = 0 and B the curl of a
/// seeded trial potential, scaled so that max abs B = 1 on the grid.
SimConfig constraint_run(int n, long steps, std::uint64_t seed);

} // namespace femf
