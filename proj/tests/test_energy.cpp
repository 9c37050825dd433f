#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "femf/energy.hpp"
#include "femf/scenarios.hpp"
#include "femf/verification.hpp"

using namespace femf;

namespace {

constexpr double kPi = std::numbers::pi;

StaggeredGrid cube(int n, const Vec3 &alpha = {1, 1, 1}) {
  return build_grid({n, n, n}, {0.8, 0.8, 0.8}, FractalDims{alpha, {1, 1, 1}, {1, 1, 1}});
}

FieldArray uniform(const StaggeredGrid &g, Location loc, const Vec3 &v) {
  return sample(g, loc, VectorFn([v](const Vec3 &) { return v; }));
}

double max_diff(const FieldArray &a, const FieldArray &b) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c)
    for (std::size_t q = 0; q < a[c].data.size(); ++q)
      m = std::max(m, std::abs(a[c].data[q] - b[c].data[q]));
  return m;
}

} // namespace

TEST_CASE("poynting vector") {
  const StaggeredGrid g = cube(6, {0.9, 0.6, 0.8});
  SUBCASE("x cross y") {
    const FieldArray s = poynting(uniform(g, Location::Edge, {1, 0, 0}),
                                  uniform(g, Location::Face, {0, 1, 0}), g);
    CHECK(s.location() == Location::Face);
    CHECK(s.max_abs() == doctest::Approx(1.0));
    for (double v : s[2].data)
      CHECK(v == doctest::Approx(1.0));
    for (double v : s[0].data)
      CHECK(v == 0.0);
  }
  SUBCASE("parallel fields") {
    const FieldArray s = poynting(uniform(g, Location::Edge, {0.3, -1, 2}),
                                  uniform(g, Location::Face, {0.6, -2, 4}), g);
    CHECK(s.max_abs() <= 1e-15);
  }
  SUBCASE("antisymmetric and bilinear") {
    const auto t = trial_family(4, 3);
    const FieldArray e1 = sample(g, Location::Edge, t[0].vector.value);
    const FieldArray e2 = sample(g, Location::Edge, t[1].vector.value);
    const FieldArray h = sample(g, Location::Edge, t[2].vector.value);
    const FieldArray a = poynting(e1, h, g), b = poynting(h, e1, g);
    CHECK(max_diff(a, (-1.0) * b) <= 1e-13);
    const FieldArray lin = poynting(2.0 * e1 - 0.5 * e2, h, g);
    CHECK(max_diff(lin, 2.0 * a - 0.5 * poynting(e2, h, g)) <= 1e-13);
  }
  SUBCASE("gaussian prefactor") {
    const FieldArray s = poynting(uniform(g, Location::Edge, {1, 0, 0}),
                                  uniform(g, Location::Face, {0, 1, 0}), g, true, 3.0);
    CHECK(s[2].data[0] == doctest::Approx(3.0 / (4.0 * kPi)));
  }
}

TEST_CASE("plane wave carries half the peak flux on average") {
  const auto s = plane_wave(64);
  const StaggeredGrid g = s.config.build_grid();
  const double dt = maxwell_dt(s.config, g);
  FieldState st = init_maxwell(s.config, g, dt);
  const long steps = s.config.steps;
  double sum = 0.0;
  for (long i = 0; i < steps; ++i) {
    const FieldArray e = st.E, b_before = st.B;
    advance_b(st, g, dt);
    // The bracketing B levels average to H at the level of E before the step.
    const FieldArray h = 0.5 * (b_before + st.B);
    const FieldArray flux = poynting(e, h, g);
    advance_e(st, g, s.config, dt);
    double mean = 0.0;
    for (double v : flux[0].data)
      mean += v;
    sum += mean / static_cast<double>(flux[0].data.size());
  }
  CHECK(sum / static_cast<double>(steps) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("quadrature weights") {
  const StaggeredGrid g = cube(16, {0.7, 1.0, 0.5});
  const Component w = quadrature_weights(g, {0, 0, 0}, kAllPec);
  double total = 0.0;
  for (double v : w.data)
    total += v;
  double exact = 1.0;
  for (int k = 0; k < 3; ++k)
    exact *= fractal_length(k, 0.0, 0.8, g.dims());
  CHECK(total == doctest::Approx(exact).epsilon(5e-3));

  const Component c = quadrature_weights(g, {1, 1, 1}, kAllPec);
  double centers = 0.0;
  for (double v : c.data)
    centers += v;
  CHECK(centers == doctest::Approx(exact).epsilon(5e-3));
}

TEST_CASE("static fields have no energy flow") {
  SimConfig cfg;
  cfg.dims.alpha = {0.9, 0.6, 0.8};
  cfg.n = {8, 8, 8};
  cfg.material = Material::si();
  cfg.steps = 40;
  cfg.source.vector_potential0 = [](const Vec3 &x) { return Vec3{0, 0, x[1]}; };
  const Trajectory tr = run_maxwell(cfg);
  for (const auto &r : tr.rows) {
    CHECK(r.surface == 0.0);
    CHECK(r.joule == 0.0);
    CHECK(std::abs(r.rate) <= 1e-12 * r.energy);
    CHECK(r.energy == doctest::Approx(tr.rows.front().energy).epsilon(1e-13));
  }
}

TEST_CASE("lossless cavity") {
  double period = 0.0;
  const SimConfig cfg = lossless_cavity(12, 2.0, period);
  const Trajectory tr = run_maxwell(cfg);
  double lo = tr.rows.front().energy, hi = lo, surface = 0.0;
  for (const auto &r : tr.rows) {
    lo = std::min(lo, r.energy);
    hi = std::max(hi, r.energy);
    surface = std::max(surface, std::abs(r.surface));
  }
  CHECK((hi - lo) / hi <= 1e-3);
  CHECK(surface <= 1e-12);
}

TEST_CASE("driven cavity closes the balance") {
  const SimConfig cfg = driven_cavity(16);
  const Trajectory tr = run_maxwell(cfg);
  const EnergyBalance eb = energy_balance(tr.rows, tr.grid, cfg.material.c);
  CHECK(eb.max_closure <= 5e-2);
  CHECK(eb.max_closure > 0.0);
}

TEST_CASE("energy balance bookkeeping") {
  const StaggeredGrid g = cube(8);
  CHECK_THROWS_AS(energy_balance(std::vector<DiagnosticRow>(2), g, 1.0), std::invalid_argument);
  std::vector<DiagnosticRow> rows(5);
  for (int i = 0; i < 5; ++i) {
    rows[i].step = i;
    rows[i].t = 0.1 * i;
    rows[i].energy = 1.0 + 0.1 * i * i;
    rows[i].joule = -0.2 * rows[i].t;
  }
  const EnergyBalance b = energy_balance(rows, g, 1.0);
  CHECK(b.time_scale == doctest::Approx(crossing_time(g, 1.0)));
  CHECK(b.rows[2].rate == doctest::Approx(4.0));
  CHECK(b.rows[2].closure == doctest::Approx(std::abs(4.0 - 0.04) * b.time_scale / 2.6));
  CHECK(b.rows.front().closure == 0.0);
  CHECK(b.rows.back().closure == 0.0);
}

TEST_CASE("force densities") {
  const StaggeredGrid g = cube(8);
  const Material si = Material::si();
  const FieldArray none;
  SUBCASE("all zero") {
    const FieldArray e = allocate_field(g, Location::Edge), b = allocate_field(g, Location::Face);
    const auto f = force_densities(e, b, e, none, none, none, g, si);
    CHECK(f.electric.max_abs() == 0.0);
    CHECK(f.magnetic.max_abs() == 0.0);
  }
  SUBCASE("uniform E with charge") {
    const StaggeredGrid ga = cube(8, {0.9, 0.6, 0.8});
    const FieldArray e = uniform(ga, Location::Edge, {1, -2, 0.5});
    const FieldArray rho = sample(ga, Location::Center, ScalarFn([](const Vec3 &x) { return 1 + x[0]; }));
    const FieldArray p = uniform(ga, Location::Center, {0.3, 0.2, 0.1});
    const auto f = force_densities(e, allocate_field(ga, Location::Face), allocate_field(ga, Location::Edge),
                                   rho, p, none, ga, si);
    for (std::size_t q = 0; q < rho[0].data.size(); ++q) {
      CHECK(f.electric[0].data[q] == doctest::Approx(rho[0].data[q]));
      CHECK(f.electric[1].data[q] == doctest::Approx(-2 * rho[0].data[q]));
    }
  }
  SUBCASE("magnetization in a gradient") {
    const FieldArray b = sample(g, Location::Face, VectorFn([](const Vec3 &x) { return Vec3{0, 0, x[0]}; }));
    const FieldArray m = uniform(g, Location::Center, {1, 0, 0});
    const FieldArray zero = allocate_field(g, Location::Edge);
    const auto f = force_densities(zero, b, zero, none, none, m, g, si);
    for (double v : f.magnetic[2].data)
      CHECK(v == doctest::Approx(1.0));
    for (int c = 0; c < 2; ++c)
      for (double v : f.magnetic[c].data)
        CHECK(std::abs(v) <= 1e-12);
  }
  SUBCASE("Lorentz term carries 1/c in Gaussian units") {
    const FieldArray j = uniform(g, Location::Edge, {1, 0, 0});
    const FieldArray b = uniform(g, Location::Face, {0, 1, 0});
    const FieldArray zero = allocate_field(g, Location::Edge);
    const auto fs = force_densities(zero, b, j, none, none, none, g, si);
    const auto fg = force_densities(zero, b, j, none, none, none, g, Material::gaussian(4.0));
    CHECK(fs.magnetic[2].data[0] == doctest::Approx(1.0));
    CHECK(fg.magnetic[2].data[0] == doctest::Approx(0.25));
  }
}

TEST_CASE("crossing time") {
  const StaggeredGrid g = build_grid({8, 8, 8}, {0.8, 0.4, 0.2}, FractalDims{});
  CHECK(crossing_time(g, 2.0) == doctest::Approx(0.4));
}
