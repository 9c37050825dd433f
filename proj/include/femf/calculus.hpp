#pragma once

#include <array>
#include <cstdint>

#include "femf/grid.hpp"

namespace femf {

/// How a difference that lands on a boundary site is closed.
///
///  - OneSided: second-order one-sided stencil from interior samples (used by
///    the standalone operators).
///  - Periodic: wrap around; valid only on axes whose coefficient is constant.
///  - None: boundary rows are left at zero for the caller to fill.
enum class Closure : std::uint8_t { OneSided, Periodic, None };
using Closures = std::array<Closure, 3>;

inline constexpr Closures kOneSided{Closure::OneSided, Closure::OneSided,
                                    Closure::OneSided};

/// (1/c1) d/dx along `axis`; the output sits on the opposite parity along
/// that axis, with the coefficient sampled at the output (difference
/// midpoint) site.
Component fractal_diff(const Component &in, int axis, const StaggeredGrid &g,
                       Closure closure = Closure::OneSided);

/// Multiplies a component by c1 along `axis`, evaluated at its own sites.
Component scaled_by_coefficient(Component in, int axis, const StaggeredGrid &g);

/// Linear interpolation of a component onto the sites of parity `target`.
Component average_to(const Component &in, const Parity &target,
                     const StaggeredGrid &g, const Closures &closures = kOneSided);

// Fractal vector calculus on the staggered lattice. Gradients map node
// scalars to edges and center scalars to faces; divergence maps faces to
// centers and edges to nodes; curl maps edges to faces and faces to edges.

FieldArray grad_d(const FieldArray &phi, const StaggeredGrid &g,
                  const Closures &closures = kOneSided);
FieldArray div_d(const FieldArray &f, const StaggeredGrid &g,
                 const Closures &closures = kOneSided);
FieldArray curl_d(const FieldArray &f, const StaggeredGrid &g,
                  const Closures &closures = kOneSided);

/// Component-wise (1/c1)[(phi_,k)/c1]_,k summed over k. Each component stays
/// on its own lattice, so this applies to scalars and to any vector layout.
FieldArray laplacian_d(const FieldArray &phi, const StaggeredGrid &g,
                       const Closures &closures = kOneSided);

/// curl_d(curl_d(f)) for edge or face fields.
FieldArray curl_curl_d(const FieldArray &f, const StaggeredGrid &g,
                       const Closures &closures = kOneSided);

/// The expanded curl-curl, grad(div f) - lap f, written term by term with the
/// coefficient inside each inner derivative:
///
///   sum_r (1/c_r) d_r[(1/c_p) d_p f_r] - (1/c_r) d_r[(1/c_r) d_r f_p]
///
/// evaluated with centered differences on a collocated node vector field.
/// This is an independent discretisation of curl_curl_d; boundary nodes are
/// left at zero.
FieldArray curl_curl_expanded(const FieldArray &f_nodes, const StaggeredGrid &g);

/// Collocated vector at cell centers from any vector layout.
FieldArray to_centers(const FieldArray &f, const StaggeredGrid &g);

/// (a . grad_D) v for collocated center vectors a and v.
FieldArray directional_d(const FieldArray &a, const FieldArray &v,
                         const StaggeredGrid &g);

} // namespace femf
