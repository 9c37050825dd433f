#include "femf/solvers.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "femf/energy.hpp"

namespace femf {

namespace {

bool symmetric(const Eigen::Matrix3d &m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
}

FieldArray sample_or_zero(const StaggeredGrid &g, Location loc, const VectorFn &f) {
  return f ? sample(g, loc, f) : allocate_field(g, loc, true);
}

// out_i = sum_j m_ij in_j for edge fields, moving each in_j onto the sites of
// component i; off-diagonal terms therefore use four-point averages.
FieldArray apply_tensor(const Eigen::Matrix3d &m, const FieldArray &in, const StaggeredGrid &g,
                        const Boundaries &b) {
  FieldArray out = allocate_field(g, in.location(), true);
  Closures cl{};
  for (int k = 0; k < 3; ++k)
    cl[k] = b[k] == Boundary::Periodic ? Closure::Periodic : Closure::OneSided;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (m(i, j) == 0.0)
        continue;
      const Component moved = i == j ? in[j] : average_to(in[j], out[i].parity, g, cl);
      for (std::size_t n = 0; n < moved.data.size(); ++n)
        out[i].data[n] += m(i, j) * moved.data[n];
    }
  return out;
}

void check_finite(const FieldArray &f, const char *what, long step, double t) {
  try {
    f.require_finite(what);
  } catch (const std::runtime_error &e) {
    throw SolverAbort(fmt::format("step {} (t = {}): {}", step, t, e.what()), Frame{step, t, f});
  }
}

double weighted_norm(const FieldArray &f, const StaggeredGrid &g, const Boundaries &b) {
  return std::sqrt(weighted_dot(f, f, g, b));
}

} // namespace

Material Material::si(double eps0, double mu0) {
  Material m;
  m.units = Units::SiNormalized;
  m.eps0 = eps0;
  m.mu0 = mu0;
  m.c = 1.0 / std::sqrt(eps0 * mu0);
  return m;
}

Material Material::gaussian(double c) {
  Material m;
  m.units = Units::Gaussian;
  m.c = c;
  return m;
}

double min_eigenvalue(const Eigen::Matrix3d &m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void Material::validate() const {
  if (!(c > 0.0) || !std::isfinite(c))
    throw DomainError(fmt::format("light speed c = {} must be positive", c));
  if (units == Units::SiNormalized) {
    if (!(eps0 > 0.0) || !(mu0 > 0.0))
      throw DomainError(fmt::format("eps0 = {} and mu0 = {} must be positive", eps0, mu0));
    if (std::abs(c * c * eps0 * mu0 - 1.0) > 1e-12)
      throw DomainError(fmt::format("c^2 eps0 mu0 = {} but must equal 1", c * c * eps0 * mu0));
  }
  if (!symmetric(sigma))
    throw DomainError("conductivity tensor must be symmetric");
  if (min_eigenvalue(sigma) < -1e-14 * sigma.cwiseAbs().maxCoeff())
    throw DomainError("conductivity tensor must be positive semidefinite");
  if (!symmetric(kappa) || !(min_eigenvalue(kappa) > 0.0))
    throw DomainError("dielectric tensor must be symmetric positive definite");
}

void SimConfig::validate() const {
  dims.validate();
  material.validate();
  if (!(cfl > 0.0 && cfl <= 1.0))
    throw DomainError(fmt::format("CFL factor {} must lie in (0,1]", cfl));
  if (!(dt >= 0.0) || !std::isfinite(dt))
    throw DomainError(fmt::format("dt = {} must be non-negative", dt));
  if (steps < 0)
    throw DomainError(fmt::format("steps = {} must be non-negative", steps));
  if (cadence < 0)
    throw DomainError(fmt::format("cadence = {} must be non-negative", cadence));
  for (int k = 0; k < 3; ++k)
    if (boundary[k] == Boundary::Periodic && !dims.euclidean(k))
      throw DomainError(fmt::format(
          "periodic boundary on axis {} needs alpha = 1 there (alpha = {}): the measure "
          "coefficient is not periodic",
          k, dims.alpha[k]));
}

StaggeredGrid SimConfig::build_grid() const {
  Vec3 m = margin;
  const Vec3 def = default_margin(dims);
  for (int k = 0; k < 3; ++k)
    if (!(m[k] > 0.0))
      m[k] = def[k];
  return femf::build_grid(n, L, dims, m);
}

FieldArray FieldState::displacement(const Material &m) const {
  return m.units == Units::Gaussian ? E : m.eps0 * E;
}

FieldArray FieldState::magnetic_intensity(const Material &m) const {
  return m.units == Units::Gaussian ? B : (1.0 / m.mu0) * B;
}

Closures dual_closures(const Boundaries &b) {
  Closures c{};
  for (int k = 0; k < 3; ++k)
    c[k] = b[k] == Boundary::Periodic ? Closure::Periodic : Closure::None;
  return c;
}

Closures neumann_closures(const Boundaries &b) { return dual_closures(b); }

void zero_tangential(FieldArray &e, const Boundaries &b) {
  for (int c = 0; c < e.components(); ++c) {
    Component &comp = e[c];
    for (int k = 0; k < 3; ++k) {
      if (b[k] != Boundary::Pec || comp.parity[k] != 0)
        continue;
      const std::size_t last = comp.extents[k] - 1;
      for (std::size_t i = 0; i < comp.extents[0]; ++i)
        for (std::size_t j = 0; j < comp.extents[1]; ++j)
          for (std::size_t l = 0; l < comp.extents[2]; ++l) {
            const std::array<std::size_t, 3> m{i, j, l};
            if (m[k] == 0 || m[k] == last)
              comp(i, j, l) = 0.0;
          }
    }
  }
}

void sync_periodic(FieldArray &f, const Boundaries &b) {
  for (int c = 0; c < f.components(); ++c) {
    Component &comp = f[c];
    for (int k = 0; k < 3; ++k) {
      if (b[k] != Boundary::Periodic || comp.parity[k] != 0)
        continue;
      const std::size_t last = comp.extents[k] - 1;
      for (std::size_t i = 0; i < comp.extents[0]; ++i)
        for (std::size_t j = 0; j < comp.extents[1]; ++j)
          for (std::size_t l = 0; l < comp.extents[2]; ++l) {
            std::array<std::size_t, 3> m{i, j, l};
            if (m[k] != last)
              continue;
            m[k] = 0;
            comp(i, j, l) = comp(m[0], m[1], m[2]);
          }
    }
  }
}

double stiffness(const StaggeredGrid &g) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) {
    double worst = 0.0;
    for (int p = 0; p < 2; ++p)
      for (double ic : g.inv_coeff(k, p))
        worst = std::max(worst, ic / g.spacing(k));
    s += worst * worst;
  }
  return s;
}

double cfl_dt(const StaggeredGrid &g, const Material &m, double cfl) {
  return cfl / (std::sqrt(stiffness(g)) * m.c);
}

double conductor_dt_limit(const StaggeredGrid &g, const Material &m) {
  return min_eigenvalue(m.sigma) / (2.0 * m.c * m.c * stiffness(g));
}

double dielectric_dt(const StaggeredGrid &g, const Material &m, double cfl) {
  return cfl * std::sqrt(min_eigenvalue(m.kappa)) / (std::sqrt(stiffness(g)) * m.c);
}

double maxwell_dt(const SimConfig &cfg, const StaggeredGrid &g) {
  const double limit = cfl_dt(g, cfg.material, 1.0);
  if (cfg.dt > 0.0) {
    if (cfg.dt > limit)
      throw DomainError(
          fmt::format("dt = {} exceeds the stability limit {} of this grid", cfg.dt, limit));
    return cfg.dt;
  }
  return cfg.cfl * limit;
}

FieldArray sample_current(const StaggeredGrid &g, const Source &src, double t) {
  FieldArray j = sample_or_zero(g, Location::Edge, src.current);
  j *= src.amplitude(t);
  return j;
}

double divergence_b(const FieldArray &b, const StaggeredGrid &g) {
  return div_d(b, g).max_abs();
}

double divergence_e(const FieldArray &e, const StaggeredGrid &g) {
  const FieldArray d = div_d(e, g, {Closure::None, Closure::None, Closure::None});
  const Component &c = d[0];
  double m = 0.0;
  for (std::size_t i = 1; i + 1 < c.extents[0]; ++i)
    for (std::size_t j = 1; j + 1 < c.extents[1]; ++j)
      for (std::size_t k = 1; k + 1 < c.extents[2]; ++k)
        m = std::max(m, std::abs(c(i, j, k)));
  return m;
}

FieldState init_maxwell(const SimConfig &cfg, const StaggeredGrid &g, double dt) {
  FieldState s;
  s.E = sample_or_zero(g, Location::Edge, cfg.source.e0);
  zero_tangential(s.E, cfg.boundary);
  sync_periodic(s.E, cfg.boundary);
  s.B = cfg.source.vector_potential0
            ? curl_d(sample(g, Location::Edge, cfg.source.vector_potential0), g)
            : allocate_field(g, Location::Face);
  // B at -dt/2 from dB/dt = -curl E.
  s.B.axpy(0.5 * dt, curl_d(s.E, g));
  sync_periodic(s.B, cfg.boundary);
  s.J = sample_or_zero(g, Location::Edge, cfg.source.current);
  return s;
}

void advance_b(FieldState &s, const StaggeredGrid &g, double dt) {
  s.B.axpy(-dt, curl_d(s.E, g));
}

void advance_e(FieldState &s, const StaggeredGrid &g, const SimConfig &cfg, double dt) {
  const Material &m = cfg.material;
  s.E.axpy(dt * m.c * m.c, curl_d(s.B, g, dual_closures(cfg.boundary)));
  const double jt = cfg.source.amplitude(s.t + 0.5 * dt);
  if (cfg.source.current && jt != 0.0)
    s.E.axpy(-dt * jt / m.eps0, s.J);
  zero_tangential(s.E, cfg.boundary);
  sync_periodic(s.E, cfg.boundary);
  sync_periodic(s.B, cfg.boundary);
  s.t += dt;
  ++s.step;
}

void step_maxwell(FieldState &s, const StaggeredGrid &g, const SimConfig &cfg, double dt) {
  advance_b(s, g, dt);
  advance_e(s, g, cfg, dt);
}

Trajectory run_maxwell(const SimConfig &cfg) {
  cfg.validate();
  if (cfg.material.units != Units::SiNormalized)
    throw DomainError("the Maxwell stepper runs in SI-normalized units");
  Trajectory tr;
  tr.grid = cfg.build_grid();
  const StaggeredGrid &g = tr.grid;
  tr.dt = maxwell_dt(cfg, g);
  FieldState s = init_maxwell(cfg, g, tr.dt);
  const double inv_2mu = 0.5 / cfg.material.mu0;
  for (long n = 0; n < cfg.steps; ++n) {
    const FieldArray b_before = s.B;
    advance_b(s, g, tr.dt);
    check_finite(s.B, "B", s.step, s.t);

    DiagnosticRow row;
    row.step = s.step;
    row.t = s.t;
    row.energy = field_energy(s.E, b_before, s.B, g, cfg.material, cfg.boundary);
    FieldArray h = b_before + s.B;
    h *= inv_2mu;
    row.surface = surface_flux(poynting(s.E, h, g, cfg.gaussian_poynting, cfg.material.c), g,
                               cfg.boundary);
    if (cfg.source.current)
      row.joule = cfg.source.amplitude(s.t) * joule_power(s.J, s.E, g, cfg.boundary);
    row.div_b = divergence_b(s.B, g);
    row.div_e = divergence_e(s.E, g);
    row.norm = weighted_norm(s.E, g, cfg.boundary);
    tr.rows.push_back(row);

    advance_e(s, g, cfg, tr.dt);
    check_finite(s.E, "E", s.step, s.t);
    if (cfg.cadence > 0 && s.step % cfg.cadence == 0)
      tr.frames.push_back(Frame{s.step, s.t, s.E});
  }
  tr.final = std::move(s);
  return tr;
}

Trajectory run_conductor(const SimConfig &cfg) {
  cfg.validate();
  const Material &m = cfg.material;
  if (m.units != Units::Gaussian)
    throw DomainError("the conductor equation runs in Gaussian units");
  if (!(min_eigenvalue(m.sigma) > 0.0))
    throw DomainError("the conductor equation needs a positive definite conductivity");
  Trajectory tr;
  tr.grid = cfg.build_grid();
  const StaggeredGrid &g = tr.grid;
  const double limit = conductor_dt_limit(g, m);
  if (cfg.dt > limit)
    throw DomainError(fmt::format(
        "dt = {} exceeds the diffusive stability limit {} (min(sigma)/(2 c^2) / stiffness)",
        cfg.dt, limit));
  tr.dt = cfg.dt > 0.0 ? cfg.dt : cfg.cfl * limit;
  const Closures cl = neumann_closures(cfg.boundary);
  const Eigen::Matrix3d rate = m.c * m.c * m.sigma.inverse();

  FieldState s;
  s.h = sample_or_zero(g, Location::Center, cfg.source.h0);
  auto record = [&] {
    DiagnosticRow row;
    row.step = s.step;
    row.t = s.t;
    row.norm = weighted_norm(s.h, g, cfg.boundary);
    tr.rows.push_back(row);
  };
  record();
  for (long n = 0; n < cfg.steps; ++n) {
    const FieldArray lap = laplacian_d(s.h, g, cl);
    for (std::size_t q = 0; q < lap[0].data.size(); ++q) {
      const Eigen::Vector3d l(lap[0].data[q], lap[1].data[q], lap[2].data[q]);
      const Eigen::Vector3d d = rate * l;
      for (int c = 0; c < 3; ++c)
        s.h[c].data[q] += tr.dt * d[c];
    }
    s.t += tr.dt;
    ++s.step;
    check_finite(s.h, "H", s.step, s.t);
    record();
    if (cfg.cadence > 0 && s.step % cfg.cadence == 0)
      tr.frames.push_back(Frame{s.step, s.t, s.h});
  }
  tr.final = std::move(s);
  return tr;
}

FieldArray dielectric_acceleration(const FieldArray &e, const FieldArray &j_rate,
                                   const StaggeredGrid &g, const Material &m,
                                   const Boundaries &b) {
  FieldArray rhs = curl_d(curl_d(e, g), g, dual_closures(b));
  rhs *= -m.c * m.c;
  if (j_rate.components() > 0)
    rhs.axpy(-4.0 * std::numbers::pi, j_rate);
  if (m.kappa.isIdentity(0.0))
    return rhs;
  return apply_tensor(m.kappa.inverse(), rhs, g, b);
}

namespace {

FieldArray current_rate(const FieldState &s, const SimConfig &cfg, double t) {
  if (!cfg.source.current)
    return {};
  FieldArray jr = s.J;
  jr *= cfg.source.amplitude_rate(t);
  return jr;
}

double dielectric_step_size(const SimConfig &cfg, const StaggeredGrid &g) {
  const double limit = dielectric_dt(g, cfg.material, 1.0);
  if (cfg.dt > limit)
    throw DomainError(fmt::format(
        "dt = {} violates the CFL limit {} (sqrt(min kappa)/c / stiffness^1/2)", cfg.dt, limit));
  return cfg.dt > 0.0 ? cfg.dt : cfg.cfl * limit;
}

} // namespace

FieldState init_dielectric(const SimConfig &cfg, const StaggeredGrid &g, double dt) {
  FieldState s;
  s.E = sample_or_zero(g, Location::Edge, cfg.source.e0);
  zero_tangential(s.E, cfg.boundary);
  sync_periodic(s.E, cfg.boundary);
  s.J = sample_or_zero(g, Location::Edge, cfg.source.current);
  const FieldArray rate = sample_or_zero(g, Location::Edge, cfg.source.e_rate0);
  const FieldArray acc =
      dielectric_acceleration(s.E, current_rate(s, cfg, 0.0), g, cfg.material, cfg.boundary);
  s.e_prev = s.E;
  s.e_prev.axpy(-dt, rate);
  s.e_prev.axpy(0.5 * dt * dt, acc);
  zero_tangential(s.e_prev, cfg.boundary);
  sync_periodic(s.e_prev, cfg.boundary);
  return s;
}

void step_dielectric(FieldState &s, const StaggeredGrid &g, const SimConfig &cfg, double dt) {
  const FieldArray acc =
      dielectric_acceleration(s.E, current_rate(s, cfg, s.t), g, cfg.material, cfg.boundary);
  FieldArray next = 2.0 * s.E;
  next -= s.e_prev;
  next.axpy(dt * dt, acc);
  zero_tangential(next, cfg.boundary);
  sync_periodic(next, cfg.boundary);
  s.e_prev = std::move(s.E);
  s.E = std::move(next);
  s.t += dt;
  ++s.step;
}

void reverse_dielectric(FieldState &s, double dt) {
  std::swap(s.E, s.e_prev);
  s.t -= dt;
}

Trajectory run_dielectric(const SimConfig &cfg) {
  cfg.validate();
  if (cfg.material.units != Units::Gaussian)
    throw DomainError("the dielectric equation runs in Gaussian units");
  Trajectory tr;
  tr.grid = cfg.build_grid();
  const StaggeredGrid &g = tr.grid;
  tr.dt = dielectric_step_size(cfg, g);
  FieldState s = init_dielectric(cfg, g, tr.dt);
  auto record = [&] {
    DiagnosticRow row;
    row.step = s.step;
    row.t = s.t;
    row.norm = weighted_norm(s.E, g, cfg.boundary);
    row.div_e = divergence_e(s.E, g);
    tr.rows.push_back(row);
  };
  record();
  for (long n = 0; n < cfg.steps; ++n) {
    step_dielectric(s, g, cfg, tr.dt);
    check_finite(s.E, "E", s.step, s.t);
    record();
    if (cfg.cadence > 0 && s.step % cfg.cadence == 0)
      tr.frames.push_back(Frame{s.step, s.t, s.E});
  }
  tr.final = std::move(s);
  return tr;
}

PotentialFields potentials_to_fields(const FieldArray &a, const FieldArray &a_rate,
                                     const FieldArray &chi, const StaggeredGrid &g) {
  if (a.location() != Location::Edge || a_rate.location() != Location::Edge)
    throw LayoutError("potentials_to_fields: A and dA/dt must live on edges");
  if (chi.location() != Location::Node || chi.is_vector())
    throw LayoutError("potentials_to_fields: chi must be a node scalar");
  auto curl_inside = [&](const FieldArray &f) {
    std::vector<Component> comps;
    for (int k = 0; k < 3; ++k) {
      const int p = (k + 1) % 3;
      const int q = (k + 2) % 3;
      Component plus = fractal_diff(scaled_by_coefficient(f[q], p, g), p, g);
      const Component minus = fractal_diff(scaled_by_coefficient(f[p], q, g), q, g);
      for (std::size_t n = 0; n < plus.data.size(); ++n)
        plus.data[n] -= minus.data[n];
      comps.push_back(std::move(plus));
    }
    return FieldArray(Location::Face, std::move(comps));
  };
  PotentialFields out;
  std::vector<Component> e;
  for (int i = 0; i < 3; ++i) {
    Component gi = fractal_diff(scaled_by_coefficient(chi[0], i, g), i, g);
    for (std::size_t n = 0; n < gi.data.size(); ++n)
      gi.data[n] = -a_rate[i].data[n] - gi.data[n];
    e.push_back(std::move(gi));
  }
  out.E = FieldArray(Location::Edge, std::move(e));
  out.B = curl_inside(a);
  out.B_rate = curl_inside(a_rate);
  return out;
}

} // namespace femf
