#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "femf/calculus.hpp"

using namespace femf;

namespace {

const FractalDims kAniso{{0.9, 0.6, 0.8}, {1, 1, 1}, {1, 1, 1}};

double max_abs(const FieldArray &f) { return f.max_abs(); }

FieldArray random_field(const StaggeredGrid &g, Location loc, bool vec, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto f = allocate_field(g, loc, vec);
  for (int c = 0; c < f.components(); ++c)
    for (double &v : f[c].data)
      v = u(rng);
  return f;
}

// Max over interior sites (at least `skip` away from every boundary) of
// |f - value| for one component.
double interior_error(const Component &c, double value, std::size_t skip, int axis_only = -1) {
  double e = 0.0;
  for (std::size_t i = 0; i < c.extents[0]; ++i)
    for (std::size_t j = 0; j < c.extents[1]; ++j)
      for (std::size_t k = 0; k < c.extents[2]; ++k) {
        const std::array<std::size_t, 3> m{i, j, k};
        bool inside = true;
        for (int a = 0; a < 3; ++a)
          if ((axis_only < 0 || axis_only == a) && (m[a] < skip || m[a] + skip >= c.extents[a]))
            inside = false;
        if (inside)
          e = std::max(e, std::abs(c(i, j, k) - value));
      }
  return e;
}

double mapped(double x, double alpha) { return 1.0 - std::pow(1.0 - x, alpha); }

} // namespace

TEST_CASE("gradient") {
  const auto g1 = build_grid({8, 8, 8}, {0.8, 0.8, 0.8}, FractalDims{});
  const auto cst = sample(g1, Location::Center, ScalarFn([](const Vec3 &) { return 3.0; }));
  CHECK(max_abs(grad_d(cst, g1)) <= 1e-13);
  const auto lin = sample(g1, Location::Center, ScalarFn([](const Vec3 &x) { return x[0]; }));
  const auto gr = grad_d(lin, g1);
  CHECK(gr.location() == Location::Face);
  CHECK(interior_error(gr[0], 1.0, 0) <= 1e-13);
  CHECK(interior_error(gr[1], 0.0, 0) <= 1e-13);
  CHECK(interior_error(gr[2], 0.0, 0) <= 1e-13);
  CHECK(grad_d(sample(g1, Location::Node, ScalarFn([](const Vec3 &x) { return x[0]; })), g1).location() ==
        Location::Edge);
  CHECK_THROWS_AS(grad_d(allocate_field(g1, Location::Edge), g1), LayoutError);

  // phi = -(1 - x)^alpha has fractal derivative exactly 1
  const FractalDims d{{0.5, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    const auto g = build_grid({n, 4, 4}, {0.8, 0.8, 0.8}, d);
    const auto phi = sample(g, Location::Center,
                            ScalarFn([](const Vec3 &x) { return -std::sqrt(1.0 - x[0]); }));
    const double e = interior_error(grad_d(phi, g)[0], 1.0, 1, 0);
    if (prev > 0.0)
      CHECK(std::log2(prev / e) == doctest::Approx(2.0).epsilon(0.1));
    prev = e;
  }
}

TEST_CASE("divergence") {
  const auto g1 = build_grid({8, 8, 8}, {0.8, 0.8, 0.8}, FractalDims{});
  const auto cst = sample(g1, Location::Face, VectorFn([](const Vec3 &) { return Vec3{1, 2, 3}; }));
  CHECK(max_abs(div_d(cst, g1)) <= 1e-13);
  const auto lin = sample(g1, Location::Face, VectorFn([](const Vec3 &x) { return Vec3{x[0], 0, 0}; }));
  CHECK(interior_error(div_d(lin, g1)[0], 1.0, 0) <= 1e-13);
  const auto lin_e = sample(g1, Location::Edge, VectorFn([](const Vec3 &x) { return Vec3{x[0], 0, 0}; }));
  CHECK(interior_error(div_d(lin_e, g1)[0], 1.0, 0) <= 1e-13);

  const FractalDims d{{0.5, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    const auto g = build_grid({n, 4, 4}, {0.8, 0.8, 0.8}, d);
    const auto f = sample(g, Location::Face, VectorFn([](const Vec3 &x) {
                            return Vec3{-std::sqrt(1.0 - x[0]), 0, 0};
                          }));
    const double e = interior_error(div_d(f, g)[0], 1.0, 1, 0);
    if (prev > 0.0)
      CHECK(std::log2(prev / e) == doctest::Approx(2.0).epsilon(0.1));
    prev = e;
  }
}

TEST_CASE("curl") {
  const auto g1 = build_grid({8, 8, 8}, {0.8, 0.8, 0.8}, FractalDims{});
  const auto rot = sample(g1, Location::Edge, VectorFn([](const Vec3 &x) { return Vec3{-x[1], x[0], 0}; }));
  const auto c = curl_d(rot, g1);
  CHECK(c.location() == Location::Face);
  CHECK(interior_error(c[0], 0.0, 0) <= 1e-13);
  CHECK(interior_error(c[1], 0.0, 0) <= 1e-13);
  CHECK(interior_error(c[2], 2.0, 0) <= 1e-13);
  CHECK(curl_d(c, g1).location() == Location::Edge);
  CHECK_THROWS_AS(curl_d(allocate_field(g1, Location::Center, true), g1), LayoutError);

  // f = (0, sin x1, 0): third component is cos(x1)/c1(x1)
  const FractalDims d{{0.5, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  const auto g = build_grid({64, 4, 4}, {0.8, 0.8, 0.8}, d);
  const auto f = sample(g, Location::Edge, VectorFn([](const Vec3 &x) { return Vec3{0, std::sin(x[0]), 0}; }));
  const auto cf = curl_d(f, g);
  double e = 0.0;
  for (std::size_t i = 0; i < cf[2].extents[0]; ++i) {
    const double x = g.coordinate(0, 1, i);
    e = std::max(e, std::abs(cf[2](i, 1, 1) - std::cos(x) / c1_coeff(0, x, d)));
  }
  CHECK(e <= 1e-3);
}

TEST_CASE("exact identities") {
  const auto g = build_grid({16, 16, 16}, {0.8, 0.8, 0.8}, kAniso);
  // white noise: residual is pure roundoff of second differences, bounded by
  // a few ulps of |f| / (h c_min)^2
  double c_min = 1.0;
  for (int k = 0; k < 3; ++k)
    for (int p = 0; p < 2; ++p)
      for (double c : g.coeff(k, p))
        c_min = std::min(c_min, c);
  const double scale = 1.0 / std::pow(g.spacing(0) * c_min, 2);
  for (unsigned s = 0; s < 3; ++s) {
    CHECK(max_abs(div_d(curl_d(random_field(g, Location::Edge, true, s), g), g)) <= 8e-15 * scale);
    CHECK(max_abs(curl_d(grad_d(random_field(g, Location::Node, false, s), g), g)) <= 8e-15 * scale);
    CHECK(max_abs(div_d(curl_d(random_field(g, Location::Face, true, s), g), g)) <= 8e-15 * scale);
    CHECK(max_abs(curl_d(grad_d(random_field(g, Location::Center, false, s), g), g)) <= 8e-15 * scale);
  }
  const VectorFn f = [](const Vec3 &x) {
    return Vec3{std::sin(3 * x[0] + x[1]) * x[2], std::cos(2 * x[2] - x[0]) + x[1] * x[1],
                std::sin(3 * x[0] * x[1])};
  };
  const ScalarFn phi = [](const Vec3 &x) {
    return std::sin(3 * x[0]) * std::cos(2 * x[1] + x[2]) + x[0] * x[1];
  };
  CHECK(max_abs(div_d(curl_d(sample(g, Location::Edge, f), g), g)) <= 1e-13);
  CHECK(max_abs(div_d(curl_d(sample(g, Location::Face, f), g), g)) <= 1e-13);
  CHECK(max_abs(curl_d(grad_d(sample(g, Location::Node, phi), g), g)) <= 1e-13);
  CHECK(max_abs(curl_d(grad_d(sample(g, Location::Center, phi), g), g)) <= 1e-13);
}

TEST_CASE("linearity") {
  const auto g = build_grid({8, 9, 10}, {0.8, 0.8, 0.8}, kAniso);
  const auto f = random_field(g, Location::Edge, true, 1);
  const auto h = random_field(g, Location::Edge, true, 2);
  const auto lhs = curl_curl_d(0.3 * f + (-1.7) * h, g);
  auto rhs = 0.3 * curl_curl_d(f, g);
  rhs.axpy(-1.7, curl_curl_d(h, g));
  CHECK(max_abs(lhs - rhs) <= 1e-13 * max_abs(rhs));
}

TEST_CASE("classical reduction matches the plain Yee stencil") {
  const auto g = build_grid({6, 6, 6}, {0.6, 0.6, 0.6}, FractalDims{});
  const auto e = random_field(g, Location::Edge, true, 5);
  const auto b = curl_d(e, g);
  const double inv_h = 1.0 / g.spacing(0);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      for (std::size_t k = 0; k <= 6; ++k) {
        const double ref = (e[1](i + 1, j, k) - e[1](i, j, k)) * inv_h -
                           (e[0](i, j + 1, k) - e[0](i, j, k)) * inv_h;
        CHECK(b[2](i, j, k) == ref);
      }
}

TEST_CASE("laplacian") {
  const auto g1 = build_grid({16, 16, 16}, {0.8, 0.8, 0.8}, FractalDims{});
  const auto sq = sample(g1, Location::Center, ScalarFn([](const Vec3 &x) { return x[0] * x[0]; }));
  CHECK(interior_error(laplacian_d(sq, g1)[0], 2.0, 1) <= 1e-10);

  // F(xi) = xi^2 in the mapped coordinate has Laplacian 2
  const double alpha = 0.7;
  const FractalDims d{{alpha, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  double prev = 0.0;
  for (int n : {128, 256, 512}) {
    const auto g = build_grid({n, 4, 4}, {0.8, 0.8, 0.8}, d);
    const auto phi = sample(g, Location::Center, ScalarFn([&](const Vec3 &x) {
                              const double xi = mapped(x[0], alpha);
                              return xi * xi;
                            }));
    const double e = interior_error(laplacian_d(phi, g)[0], 2.0, 2, 0);
    if (prev > 0.0)
      CHECK(std::log2(prev / e) == doctest::Approx(2.0).epsilon(0.1));
    prev = e;
  }
}

TEST_CASE("curl curl") {
  const auto g1 = build_grid({16, 16, 16}, {0.8, 0.8, 0.8}, FractalDims{});
  const auto cst = sample(g1, Location::Edge, VectorFn([](const Vec3 &) { return Vec3{1, -1, 2}; }));
  CHECK(max_abs(curl_curl_d(cst, g1)) <= 1e-12);
  // classical: curl curl (0, x^2, 0) = (0, -2, 0)
  const auto f = sample(g1, Location::Edge, VectorFn([](const Vec3 &x) { return Vec3{0, x[0] * x[0], 0}; }));
  const auto cc = curl_curl_d(f, g1);
  CHECK(interior_error(cc[1], -2.0, 2) <= 1e-9);
  CHECK(interior_error(cc[0], 0.0, 2) <= 1e-9);

  // Yee curl-curl versus the expanded collocated form at alpha=(0.9,0.6,0.8)
  const VectorFn smooth = [](const Vec3 &x) {
    return Vec3{std::sin(2 * x[1] + 0.3 + x[0]) * std::cos(x[2]),
                std::cos(1.5 * x[0] + x[1]) * x[2] * x[2] + x[1] * x[1],
                std::sin(x[0] + x[1] + 0.7 * x[2]) + 0.5 * x[0] * x[1] * x[2]};
  };
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const auto g = build_grid({n, n, n}, {0.8, 0.8, 0.8}, kAniso);
    const auto yee = curl_curl_d(sample(g, Location::Edge, smooth), g);
    const auto col = curl_curl_expanded(sample(g, Location::Node, smooth), g);
    double sum = 0.0;
    std::size_t count = 0;
    for (int c = 0; c < 3; ++c) {
      Parity p{0, 0, 0};
      p[c] = 1;
      const auto at_edges = average_to(col[c], p, g, {Closure::None, Closure::None, Closure::None});
      const auto &y = yee[c];
      for (std::size_t i = 2; i + 2 < y.extents[0]; ++i)
        for (std::size_t j = 2; j + 2 < y.extents[1]; ++j)
          for (std::size_t k = 2; k + 2 < y.extents[2]; ++k) {
            const double r = y(i, j, k) - at_edges(i, j, k);
            sum += r * r;
            ++count;
          }
    }
    const double rms = std::sqrt(sum / static_cast<double>(count));
    if (prev > 0.0)
      CHECK(std::log2(prev / rms) == doctest::Approx(2.0).epsilon(0.05));
    prev = rms;
  }
  CHECK_THROWS_AS(curl_curl_expanded(sample(g1, Location::Edge, smooth), g1), LayoutError);
}

TEST_CASE("averaging and directional derivative") {
  const auto g = build_grid({8, 8, 8}, {0.8, 0.8, 0.8}, kAniso);
  const VectorFn lin = [](const Vec3 &x) { return Vec3{1 + x[0], 2 * x[1] - x[2], 0.5}; };
  const auto e = sample(g, Location::Edge, lin);
  const auto at = to_centers(e, g);
  const auto ref = sample(g, Location::Center, lin);
  CHECK(max_abs(at - ref) <= 1e-14);
  const auto fc = to_centers(sample(g, Location::Face, lin), g);
  CHECK(max_abs(fc - ref) <= 1e-14);

  // (a . grad) v with a = (1,0,0), v = (0,0,x0^2): fractal derivative 2 x0 / c1
  const auto g1 = build_grid({16, 16, 16}, {0.8, 0.8, 0.8}, FractalDims{});
  const auto a = sample(g1, Location::Center, VectorFn([](const Vec3 &) { return Vec3{1, 0, 0}; }));
  const auto v = sample(g1, Location::Center, VectorFn([](const Vec3 &x) { return Vec3{0, 0, x[0]}; }));
  const auto dv = directional_d(a, v, g1);
  CHECK(interior_error(dv[2], 1.0, 0) <= 1e-13);
  CHECK(max_abs(directional_d(a, ref, g1)) > 0.0);
  const auto uni = sample(g, Location::Center, VectorFn([](const Vec3 &) { return Vec3{1, 2, 3}; }));
  CHECK(max_abs(directional_d(ref, uni, g)) <= 1e-13);
}
