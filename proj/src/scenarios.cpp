#include "femf/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "femf/verification.hpp"

namespace femf {

namespace {

constexpr double kPi = std::numbers::pi;

// Axis 0 carries the medium; axes 1, 2 are Euclidean, periodic, 4 cells.
SimConfig line_config(int n, double alpha, Material m) {
  SimConfig cfg;
  cfg.dims.alpha = {alpha, 1.0, 1.0};
  cfg.dims.l = {1.0, 2.0, 2.0};
  cfg.dims.l0 = {1.0, 1.0, 1.0};
  cfg.n = {n, 4, 4};
  cfg.L = {0.8, 1.0, 1.0};
  cfg.material = m;
  cfg.boundary = {Boundary::Pec, Boundary::Periodic, Boundary::Periodic};
  return cfg;
}

double gaussian(double u, double w) { return std::exp(-(u / w) * (u / w)); }

} // namespace

double relative_l2(const FieldArray &f, int c, const StaggeredGrid &g, const ScalarFn &exact) {
  const Component &comp = f[c];
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < comp.extents[0]; ++i)
    for (std::size_t j = 0; j < comp.extents[1]; ++j)
      for (std::size_t k = 0; k < comp.extents[2]; ++k) {
        const double e = exact(g.position(comp.parity, i, j, k));
        const double d = comp(i, j, k) - e;
        num += d * d;
        den += e * e;
      }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

long whole_steps(double t_end, double limit, double cfl, double &dt) {
  const long steps = static_cast<long>(std::ceil(t_end / (cfl * limit)));
  dt = t_end / static_cast<double>(steps);
  return steps;
}

OracleScenario plane_wave(int n) {
  SimConfig cfg;
  cfg.dims.alpha = {1.0, 1.0, 1.0};
  cfg.dims.l = {2.0, 2.0, 2.0};
  cfg.n = {n, 4, 4};
  cfg.L = {1.0, 1.0, 1.0};
  cfg.material = Material::si();
  cfg.boundary = {Boundary::Periodic, Boundary::Periodic, Boundary::Periodic};
  cfg.source.e0 = [](const Vec3 &x) { return Vec3{0.0, std::cos(2.0 * kPi * x[0]), 0.0}; };
  cfg.source.vector_potential0 = [](const Vec3 &x) {
    return Vec3{0.0, std::sin(2.0 * kPi * x[0]) / (2.0 * kPi), 0.0};
  };
  const double period = 1.0 / cfg.material.c;
  cfg.steps = whole_steps(period, cfl_dt(cfg.build_grid(), cfg.material, 1.0), 0.9, cfg.dt);
  OracleScenario s{"plane_wave", cfg, {}, 1e-2};
  s.error = [](const Trajectory &tr) {
    const double t = tr.final.t;
    return relative_l2(tr.final.E, 1, tr.grid, [t](const Vec3 &x) {
      return std::cos(2.0 * kPi * (x[0] - t));
    });
  };
  return s;
}

OracleScenario maxwell_pulse(int n, double alpha) {
  constexpr double w = 0.045, xi0 = 0.18, t_end = 0.18;
  SimConfig cfg = line_config(n, alpha, Material::si());
  const FractalDims dims = cfg.dims;
  const double c = cfg.material.c;
  cfg.source.e0 = [dims](const Vec3 &x) {
    return Vec3{0.0, gaussian(mapped_coordinate(0, x[0], dims) - xi0, w), 0.0};
  };
  cfg.source.vector_potential0 = [dims, c](const Vec3 &x) {
    const double xi = mapped_coordinate(0, x[0], dims);
    return Vec3{0.0, 0.5 * w * std::sqrt(kPi) * std::erf((xi - xi0) / w) / c, 0.0};
  };
  cfg.steps = whole_steps(t_end, cfl_dt(cfg.build_grid(), cfg.material, 1.0), 0.9, cfg.dt);
  OracleScenario s{"maxwell_pulse", cfg, {}, 2e-2};
  s.error = [c](const Trajectory &tr) {
    const double t = tr.final.t;
    const FractalDims d = tr.grid.dims();
    return relative_l2(tr.final.E, 1, tr.grid, [&](const Vec3 &x) {
      return gaussian(mapped_coordinate(0, x[0], d) - xi0 - c * t, w);
    });
  };
  return s;
}

OracleScenario dielectric_pulse(int n, double alpha, double kappa) {
  constexpr double w = 0.045, xi0 = 0.18, t_end = 0.18;
  SimConfig cfg = line_config(n, alpha, Material::gaussian(1.0));
  cfg.material.kappa = kappa * Eigen::Matrix3d::Identity();
  const FractalDims dims = cfg.dims;
  const double v = cfg.material.c / std::sqrt(kappa);
  cfg.source.e0 = [dims](const Vec3 &x) {
    return Vec3{0.0, gaussian(mapped_coordinate(0, x[0], dims) - xi0, w), 0.0};
  };
  // dE/dt = -v F'(xi - vt)
  cfg.source.e_rate0 = [dims, v](const Vec3 &x) {
    const double u = mapped_coordinate(0, x[0], dims) - xi0;
    return Vec3{0.0, v * 2.0 * u / (w * w) * gaussian(u, w), 0.0};
  };
  cfg.steps =
      whole_steps(t_end, dielectric_dt(cfg.build_grid(), cfg.material, 1.0), 0.9, cfg.dt);
  OracleScenario s{"dielectric_pulse", cfg, {}, 2e-2};
  s.error = [v](const Trajectory &tr) {
    const double t = tr.final.t;
    const FractalDims d = tr.grid.dims();
    return relative_l2(tr.final.E, 1, tr.grid, [&](const Vec3 &x) {
      return gaussian(mapped_coordinate(0, x[0], d) - xi0 - v * t, w);
    });
  };
  return s;
}

OracleScenario heat_kernel(int n, double alpha) {
  constexpr double width = 0.04, xi0 = 0.34, t_end = 0.0024;
  SimConfig cfg = line_config(n, alpha, Material::gaussian(1.0));
  const FractalDims dims = cfg.dims;
  auto profile = [](double xi, double t) {
    const double var = width * width + 2.0 * t;
    return width / std::sqrt(var) * std::exp(-(xi - xi0) * (xi - xi0) / (2.0 * var));
  };
  cfg.source.h0 = [dims, profile](const Vec3 &x) {
    return Vec3{0.0, profile(mapped_coordinate(0, x[0], dims), 0.0), 0.0};
  };
  cfg.steps = whole_steps(t_end, conductor_dt_limit(cfg.build_grid(), cfg.material), 0.9, cfg.dt);
  OracleScenario s{"heat_kernel", cfg, {}, 2e-2};
  s.error = [profile](const Trajectory &tr) {
    const double t = tr.final.t;
    const FractalDims d = tr.grid.dims();
    return relative_l2(tr.final.h, 1, tr.grid, [&](const Vec3 &x) {
      return profile(mapped_coordinate(0, x[0], d), t);
    });
  };
  return s;
}

OracleScenario heat_mode(int n, int mode) {
  constexpr double t_end = 0.02;
  SimConfig cfg = line_config(n, 1.0, Material::gaussian(1.0));
  cfg.dims.l[0] = 2.0;
  cfg.L[0] = 1.0;
  const double k = mode * kPi / cfg.L[0];
  cfg.source.h0 = [k](const Vec3 &x) { return Vec3{0.0, std::cos(k * x[0]), 0.0}; };
  cfg.steps = whole_steps(t_end, conductor_dt_limit(cfg.build_grid(), cfg.material), 0.9, cfg.dt);
  OracleScenario s{"heat_mode", cfg, {}, 2e-2};
  const double rate = cfg.material.c * cfg.material.c * k * k / cfg.material.sigma(1, 1);
  s.error = [k, rate](const Trajectory &tr) {
    const double t = tr.final.t;
    return relative_l2(tr.final.h, 1, tr.grid, [&](const Vec3 &x) {
      return std::exp(-rate * t) * std::cos(k * x[0]);
    });
  };
  return s;
}

SimConfig driven_cavity(int n) {
  SimConfig cfg;
  cfg.dims.alpha = {0.9, 0.6, 0.8};
  cfg.n = {n, n, n};
  cfg.L = {0.8, 0.8, 0.8};
  cfg.material = Material::si();
  cfg.boundary = kAllPec;
  const Vec3 centre{0.4, 0.4, 0.4};
  cfg.source.current = [centre](const Vec3 &x) {
    double r2 = 0.0;
    for (int k = 0; k < 3; ++k)
      r2 += (x[k] - centre[k]) * (x[k] - centre[k]);
    return Vec3{0.0, 0.0, std::exp(-r2 / (0.2 * 0.2))};
  };
  constexpr double omega = 2.0 * kPi, t0 = 0.45, s = 0.15;
  cfg.source.profile = [](double t) {
    return std::sin(omega * t) * gaussian(t - t0, s);
  };
  cfg.source.profile_rate = [](double t) {
    const double u = t - t0;
    return (omega * std::cos(omega * t) - 2.0 * u / (s * s) * std::sin(omega * t)) *
           gaussian(u, s);
  };
  cfg.cfl = 0.4;
  cfg.steps = whole_steps(1.0, cfl_dt(cfg.build_grid(), cfg.material, 1.0), cfg.cfl, cfg.dt);
  return cfg;
}

SimConfig lossless_cavity(int n, double periods, double &period) {
  SimConfig cfg;
  cfg.dims.alpha = {1.0, 1.0, 1.0};
  cfg.dims.l = {2.0, 2.0, 2.0};
  cfg.n = {n, n, n};
  cfg.L = {1.0, 1.0, 1.0};
  cfg.material = Material::si();
  cfg.boundary = kAllPec;
  cfg.source.e0 = [](const Vec3 &x) {
    return Vec3{0.0, 0.0, std::sin(kPi * x[0]) * std::sin(kPi * x[1])};
  };
  const double omega = cfg.material.c * kPi * std::sqrt(2.0);
  period = 2.0 * kPi / omega;
  cfg.steps =
      whole_steps(periods * period, cfl_dt(cfg.build_grid(), cfg.material, 1.0), 0.9, cfg.dt);
  return cfg;
}

SimConfig charge_ramp(int n) {
  constexpr double tau = 0.1, t_end = 0.2;
  SimConfig cfg = line_config(n, 0.6, Material::si());
  const FractalDims dims = cfg.dims;
  cfg.source.current = [](const Vec3 &x) { return Vec3{x[0], 0.0, 0.0}; };
  cfg.source.current_divergence = [dims](const Vec3 &x) { return 1.0 / c1_coeff(0, x[0], dims); };
  cfg.source.profile = [](double t) { return 1.0 - std::exp(-(t / tau) * (t / tau)); };
  cfg.source.profile_rate = [](double t) {
    return 2.0 * t / (tau * tau) * std::exp(-(t / tau) * (t / tau));
  };
  cfg.cadence = 1;
  cfg.steps = whole_steps(t_end, cfl_dt(cfg.build_grid(), cfg.material, 1.0), 0.9, cfg.dt);
  return cfg;
}

SimConfig constraint_run(int n, long steps, std::uint64_t seed) {
  SimConfig cfg;
  cfg.dims.alpha = {0.9, 0.6, 0.8};
  cfg.n = {n, n, n};
  cfg.L = {0.8, 0.8, 0.8};
  cfg.material = Material::si();
  cfg.boundary = kAllPec;
  cfg.steps = steps;
  const VectorFn a = trial_family(seed, 1).front().vector.value;
  const StaggeredGrid g = cfg.build_grid();
  const double scale = 1.0 / curl_d(sample(g, Location::Edge, a), g).max_abs();
  cfg.source.vector_potential0 = [a, scale](const Vec3 &x) {
    Vec3 v = a(x);
    for (double &c : v)
      c *= scale;
    return v;
  };
  return cfg;
}

} // namespace femf
