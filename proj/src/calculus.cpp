#include "femf/calculus.hpp"

#include <fmt/format.h>

namespace femf {

namespace {

std::size_t axis_stride(const Extents &e, int axis) {
  return axis == 0 ? e[1] * e[2] : (axis == 1 ? e[2] : 1);
}

// Applies `kernel(line, stride, m)` for every site of the output component,
// where `line` points at the input sample with index 0 along `axis` and the
// same transverse coordinates, and m is the output index along `axis`.
template <class Kernel>
Component map_axis(const Component &in, int axis, int out_parity,
                   const StaggeredGrid &g, Kernel &&kernel) {
  Parity p = in.parity;
  p[axis] = out_parity;
  Component out = make_component(g, p);
  const std::size_t stride = axis_stride(in.extents, axis);
  std::array<std::size_t, 3> c{};
  for (c[0] = 0; c[0] < out.extents[0]; ++c[0])
    for (c[1] = 0; c[1] < out.extents[1]; ++c[1])
      for (c[2] = 0; c[2] < out.extents[2]; ++c[2]) {
        auto base = c;
        base[axis] = 0;
        const double *line = in.data.data() + in.index(base[0], base[1], base[2]);
        out(c[0], c[1], c[2]) = kernel(line, stride, c[axis]);
      }
  return out;
}

void require(bool ok, const char *op, Location got) {
  static constexpr const char *kNames[] = {"node", "edge", "face", "center"};
  if (!ok)
    throw LayoutError(fmt::format("{}: unsupported input location '{}'", op,
                                  kNames[static_cast<int>(got)]));
}

Component subtract(Component a, const Component &b) {
  for (std::size_t n = 0; n < a.data.size(); ++n)
    a.data[n] -= b.data[n];
  return a;
}

Component add(Component a, const Component &b) {
  for (std::size_t n = 0; n < a.data.size(); ++n)
    a.data[n] += b.data[n];
  return a;
}

} // namespace

Component fractal_diff(const Component &in, int axis, const StaggeredGrid &g,
                       Closure closure) {
  const int n = g.cells(axis);
  const double inv_h = 1.0 / g.spacing(axis);
  const int out_parity = 1 - in.parity[axis];
  const auto inv_c = g.inv_coeff(axis, out_parity);
  if (in.parity[axis] == 0) {
    // Integer samples to half sites: always interior.
    return map_axis(in, axis, out_parity, g,
                    [&](const double *v, std::size_t s, std::size_t m) {
                      return (v[(m + 1) * s] - v[m * s]) * inv_h * inv_c[m];
                    });
  }
  const auto last = static_cast<std::size_t>(n);
  return map_axis(in, axis, out_parity, g,
                  [&](const double *v, std::size_t s, std::size_t m) {
                    double d = 0.0;
                    if (m > 0 && m < last) {
                      d = v[m * s] - v[(m - 1) * s];
                    } else if (closure == Closure::OneSided) {
                      // Exact for quadratics through the three nearest half sites.
                      d = m == 0 ? 2.0 * (v[s] - v[0]) - (v[2 * s] - v[s])
                                 : 2.0 * (v[(last - 1) * s] - v[(last - 2) * s]) -
                                       (v[(last - 2) * s] - v[(last - 3) * s]);
                    } else if (closure == Closure::Periodic) {
                      d = v[0] - v[(last - 1) * s];
                    } else {
                      return 0.0;
                    }
                    return d * inv_h * inv_c[m];
                  });
}

Component scaled_by_coefficient(Component in, int axis, const StaggeredGrid &g) {
  const auto c = g.coeff(axis, in.parity[axis]);
  for (std::size_t i = 0; i < in.extents[0]; ++i)
    for (std::size_t j = 0; j < in.extents[1]; ++j)
      for (std::size_t k = 0; k < in.extents[2]; ++k) {
        const std::array<std::size_t, 3> idx{i, j, k};
        in(i, j, k) *= c[idx[axis]];
      }
  return in;
}

Component average_to(const Component &in, const Parity &target,
                     const StaggeredGrid &g, const Closures &closures) {
  Component cur = in;
  for (int axis = 0; axis < 3; ++axis) {
    if (cur.parity[axis] == target[axis])
      continue;
    const auto last = static_cast<std::size_t>(g.cells(axis));
    const Closure cl = closures[axis];
    if (cur.parity[axis] == 0) {
      cur = map_axis(cur, axis, 1, g,
                     [](const double *v, std::size_t s, std::size_t m) {
                       return 0.5 * (v[m * s] + v[(m + 1) * s]);
                     });
    } else {
      cur = map_axis(cur, axis, 0, g,
                     [&](const double *v, std::size_t s, std::size_t m) {
                       if (m > 0 && m < last)
                         return 0.5 * (v[(m - 1) * s] + v[m * s]);
                       if (cl == Closure::Periodic)
                         return 0.5 * (v[0] + v[(last - 1) * s]);
                       if (cl == Closure::None)
                         return 0.0;
                       return m == 0 ? 1.5 * v[0] - 0.5 * v[s]
                                     : 1.5 * v[(last - 1) * s] - 0.5 * v[(last - 2) * s];
                     });
    }
  }
  return cur;
}

FieldArray grad_d(const FieldArray &phi, const StaggeredGrid &g,
                  const Closures &closures) {
  require(!phi.is_vector() &&
              (phi.location() == Location::Node || phi.location() == Location::Center),
          "grad_d", phi.location());
  std::vector<Component> comps;
  for (int k = 0; k < 3; ++k)
    comps.push_back(fractal_diff(phi[0], k, g, closures[k]));
  const Location out =
      phi.location() == Location::Node ? Location::Edge : Location::Face;
  return FieldArray(out, std::move(comps));
}

FieldArray div_d(const FieldArray &f, const StaggeredGrid &g,
                 const Closures &closures) {
  require(f.location() == Location::Face || f.location() == Location::Edge, "div_d",
          f.location());
  Component acc = fractal_diff(f[0], 0, g, closures[0]);
  for (int k = 1; k < 3; ++k)
    acc = add(std::move(acc), fractal_diff(f[k], k, g, closures[k]));
  const Location out =
      f.location() == Location::Face ? Location::Center : Location::Node;
  std::vector<Component> comps;
  comps.push_back(std::move(acc));
  return FieldArray(out, std::move(comps));
}

FieldArray curl_d(const FieldArray &f, const StaggeredGrid &g,
                  const Closures &closures) {
  require(f.location() == Location::Edge || f.location() == Location::Face, "curl_d",
          f.location());
  std::vector<Component> comps;
  for (int k = 0; k < 3; ++k) {
    const int a = (k + 1) % 3;
    const int b = (k + 2) % 3;
    comps.push_back(subtract(fractal_diff(f[b], a, g, closures[a]),
                             fractal_diff(f[a], b, g, closures[b])));
  }
  const Location out =
      f.location() == Location::Edge ? Location::Face : Location::Edge;
  return FieldArray(out, std::move(comps));
}

FieldArray laplacian_d(const FieldArray &phi, const StaggeredGrid &g,
                       const Closures &closures) {
  std::vector<Component> comps;
  for (int c = 0; c < phi.components(); ++c) {
    Component acc;
    for (int k = 0; k < 3; ++k) {
      Component term =
          fractal_diff(fractal_diff(phi[c], k, g, closures[k]), k, g, closures[k]);
      acc = k == 0 ? std::move(term) : add(std::move(acc), term);
    }
    comps.push_back(std::move(acc));
  }
  return FieldArray(phi.location(), std::move(comps));
}

FieldArray curl_curl_d(const FieldArray &f, const StaggeredGrid &g,
                       const Closures &closures) {
  return curl_d(curl_d(f, g, closures), g, closures);
}

FieldArray curl_curl_expanded(const FieldArray &f, const StaggeredGrid &g) {
  require(f.location() == Location::Node && f.is_vector(), "curl_curl_expanded",
          f.location());
  FieldArray out = allocate_field(g, Location::Node, true);
  const auto &ext = f[0].extents;
  std::array<std::size_t, 3> stride{};
  for (int a = 0; a < 3; ++a)
    stride[a] = axis_stride(ext, a);
  std::array<std::span<const double>, 3> c_node, c_half;
  for (int a = 0; a < 3; ++a) {
    c_node[a] = g.coeff(a, 0);
    c_half[a] = g.coeff(a, 1);
  }
  std::array<std::size_t, 3> m{};
  for (m[0] = 1; m[0] + 1 < ext[0]; ++m[0])
    for (m[1] = 1; m[1] + 1 < ext[1]; ++m[1])
      for (m[2] = 1; m[2] + 1 < ext[2]; ++m[2]) {
        const std::size_t at = f[0].index(m[0], m[1], m[2]);
        for (int p = 0; p < 3; ++p) {
          double sum = 0.0;
          for (int r = 0; r < 3; ++r) {
            // The r == p terms of the two sums are identical and cancel.
            if (r == p)
              continue;
            const double *fr = f[r].data.data() + at;
            const double *fp = f[p].data.data() + at;
            const std::size_t sr = stride[r], sp = stride[p];
            const double hr = g.spacing(r), hp = g.spacing(p);
            const double mixed =
                (fr[sr + sp] - fr[sr - sp] - fr[sp - sr] + fr[-sr - sp]) /
                (4.0 * hr * hp);
            const double cr = c_node[r][m[r]];
            const double cp = c_node[p][m[p]];
            const double first = mixed / (cr * cp);
            const double flux_hi = (fp[sr] - fp[0]) / (hr * c_half[r][m[r]]);
            const double flux_lo = (fp[0] - fp[-sr]) / (hr * c_half[r][m[r] - 1]);
            const double second = (flux_hi - flux_lo) / (hr * cr);
            sum += first - second;
          }
          out[p].data[at] = sum;
        }
      }
  return out;
}

FieldArray to_centers(const FieldArray &f, const StaggeredGrid &g) {
  require(f.is_vector(), "to_centers", f.location());
  std::vector<Component> comps;
  for (int c = 0; c < 3; ++c)
    comps.push_back(average_to(f[c], {1, 1, 1}, g));
  return FieldArray(Location::Center, std::move(comps));
}

FieldArray directional_d(const FieldArray &a, const FieldArray &v,
                         const StaggeredGrid &g) {
  require(a.location() == Location::Center && a.is_vector(), "directional_d",
          a.location());
  require(v.location() == Location::Center && v.is_vector(), "directional_d",
          v.location());
  FieldArray out = allocate_field(g, Location::Center, true);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      const auto inv_c = g.inv_coeff(k, 1);
      const double inv_2h = 0.5 / g.spacing(k);
      const auto last = static_cast<std::size_t>(g.cells(k) - 1);
      Component d = map_axis(v[i], k, 1, g,
                             [&](const double *x, std::size_t s, std::size_t m) {
                               double diff;
                               if (m == 0)
                                 diff = -3.0 * x[0] + 4.0 * x[s] - x[2 * s];
                               else if (m == last)
                                 diff = 3.0 * x[m * s] - 4.0 * x[(m - 1) * s] +
                                        x[(m - 2) * s];
                               else
                                 diff = x[(m + 1) * s] - x[(m - 1) * s];
                               return diff * inv_2h * inv_c[m];
                             });
      for (std::size_t n = 0; n < d.data.size(); ++n)
        out[i].data[n] += a[k].data[n] * d.data[n];
    }
  }
  return out;
}

} // namespace femf
