#include "femf/energy.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace femf {

namespace {

void require_layout(const FieldArray &a, const FieldArray &b, const char *op) {
  if (a.location() != b.location() || a.components() != b.components())
    throw LayoutError(fmt::format("{}: operands have different layouts", op));
}

Vec3 cross(const Vec3 &a, const Vec3 &b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

} // namespace

Component quadrature_weights(const StaggeredGrid &g, const Parity &p, const Boundaries &b) {
  std::array<std::vector<double>, 3> axis;
  for (int k = 0; k < 3; ++k) {
    const auto c = g.coeff(k, p[k]);
    axis[k].assign(c.begin(), c.end());
    for (double &w : axis[k])
      w *= g.spacing(k);
    if (p[k] == 0) {
      const std::size_t last = axis[k].size() - 1;
      if (b[k] == Boundary::Periodic) {
        axis[k][last] = 0.0;
      } else {
        axis[k][0] *= 0.5;
        axis[k][last] *= 0.5;
      }
    }
  }
  Component w = make_component(g, p);
  for (std::size_t i = 0; i < w.extents[0]; ++i)
    for (std::size_t j = 0; j < w.extents[1]; ++j)
      for (std::size_t k = 0; k < w.extents[2]; ++k)
        w(i, j, k) = axis[0][i] * axis[1][j] * axis[2][k];
  return w;
}

double weighted_dot(const FieldArray &a, const FieldArray &b, const StaggeredGrid &g,
                    const Boundaries &bc) {
  require_layout(a, b, "weighted_dot");
  double sum = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    const Component w = quadrature_weights(g, a[c].parity, bc);
    for (std::size_t n = 0; n < w.data.size(); ++n)
      sum += w.data[n] * a[c].data[n] * b[c].data[n];
  }
  return sum;
}

FieldArray poynting(const FieldArray &e, const FieldArray &h, const StaggeredGrid &g,
                    bool gaussian, double c) {
  if (!e.is_vector() || !h.is_vector())
    throw LayoutError("poynting: E and H must be vector fields");
  FieldArray out = allocate_field(g, Location::Face);
  const double scale = gaussian ? c / (4.0 * std::numbers::pi) : 1.0;
  for (int k = 0; k < 3; ++k) {
    const int a = (k + 1) % 3;
    const int b = (k + 2) % 3;
    const Parity target = parity_of(Location::Face, k);
    const Component ea = average_to(e[a], target, g);
    const Component eb = average_to(e[b], target, g);
    const Component ha = average_to(h[a], target, g);
    const Component hb = average_to(h[b], target, g);
    auto &gk = out[k].data;
    for (std::size_t n = 0; n < gk.size(); ++n)
      gk[n] = scale * (ea.data[n] * hb.data[n] - eb.data[n] * ha.data[n]);
  }
  return out;
}

double surface_flux(const FieldArray &gf, const StaggeredGrid &g, const Boundaries &b) {
  if (gf.location() != Location::Face)
    throw LayoutError("surface_flux: expected a face field");
  double flux = 0.0;
  for (int k = 0; k < 3; ++k) {
    if (b[k] == Boundary::Periodic)
      continue;
    const auto t = tangential_axes(k);
    const Component &c = gf[k];
    const auto ca = g.coeff(t[0], 1);
    const auto cb = g.coeff(t[1], 1);
    const double dA = g.spacing(t[0]) * g.spacing(t[1]);
    const std::size_t last = static_cast<std::size_t>(g.cells(k));
    for (std::size_t u = 0; u < ca.size(); ++u)
      for (std::size_t v = 0; v < cb.size(); ++v) {
        std::array<std::size_t, 3> lo{}, hi{};
        lo[t[0]] = hi[t[0]] = u;
        lo[t[1]] = hi[t[1]] = v;
        lo[k] = 0;
        hi[k] = last;
        const double w = ca[u] * cb[v] * dA;
        flux += w * (c(hi[0], hi[1], hi[2]) - c(lo[0], lo[1], lo[2]));
      }
  }
  return flux;
}

double field_energy(const FieldArray &e, const FieldArray &b_before, const FieldArray &b_after,
                    const StaggeredGrid &g, const Material &m, const Boundaries &bc) {
  double ce = 0.5 * m.eps0;
  double cb = 0.5 / m.mu0;
  if (m.units == Units::Gaussian)
    ce = cb = 1.0 / (8.0 * std::numbers::pi);
  return ce * weighted_dot(e, e, g, bc) + cb * weighted_dot(b_before, b_after, g, bc);
}

double joule_power(const FieldArray &j, const FieldArray &e, const StaggeredGrid &g,
                   const Boundaries &bc) {
  return weighted_dot(j, e, g, bc);
}

double crossing_time(const StaggeredGrid &g, double c) {
  double tau = 0.0;
  for (int k = 0; k < 3; ++k)
    tau = std::max(tau, fractal_length(k, 0.0, g.extent()[k], g.dims()) / c);
  return tau;
}

EnergyBalance energy_balance(std::vector<DiagnosticRow> rows, const StaggeredGrid &g, double c) {
  if (rows.size() < 3)
    throw std::invalid_argument(
        fmt::format("energy_balance needs at least 3 time levels, got {}", rows.size()));
  EnergyBalance out;
  out.time_scale = crossing_time(g, c);
  double scale = 0.0;
  for (const auto &r : rows)
    scale = std::max(scale, std::abs(r.energy));
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    auto &r = rows[i];
    r.rate = (rows[i + 1].energy - rows[i - 1].energy) / (rows[i + 1].t - rows[i - 1].t);
    const double gap = std::abs(r.surface + r.joule + r.rate);
    r.closure = scale > 0.0 ? gap * out.time_scale / scale : gap;
    out.max_closure = std::max(out.max_closure, r.closure);
  }
  out.rows = std::move(rows);
  return out;
}

ForceDensities force_densities(const FieldArray &e, const FieldArray &b, const FieldArray &j,
                               const FieldArray &rho, const FieldArray &p,
                               const FieldArray &mag, const StaggeredGrid &g,
                               const Material &m) {
  const FieldArray ec = to_centers(e, g);
  const FieldArray bc = to_centers(b, g);
  ForceDensities f{allocate_field(g, Location::Center, true),
                   allocate_field(g, Location::Center, true)};
  if (rho.components() > 0) {
    if (rho.location() != Location::Center || rho.is_vector())
      throw LayoutError("force_densities: rho must be a center scalar");
    for (int c = 0; c < 3; ++c)
      for (std::size_t n = 0; n < ec[c].data.size(); ++n)
        f.electric[c].data[n] = rho[0].data[n] * ec[c].data[n];
  }
  if (p.components() > 0)
    f.electric += directional_d(p, ec, g);
  if (j.components() > 0) {
    const FieldArray jc = to_centers(j, g);
    const double k = m.units == Units::Gaussian ? 1.0 / m.c : 1.0;
    for (std::size_t n = 0; n < jc[0].data.size(); ++n) {
      const Vec3 jxb = cross({jc[0].data[n], jc[1].data[n], jc[2].data[n]},
                             {bc[0].data[n], bc[1].data[n], bc[2].data[n]});
      for (int c = 0; c < 3; ++c)
        f.magnetic[c].data[n] = k * jxb[c];
    }
  }
  if (mag.components() > 0)
    f.magnetic += directional_d(mag, bc, g);
  return f;
}

} // namespace femf
