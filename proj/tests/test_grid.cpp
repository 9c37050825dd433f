#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "femf/grid.hpp"

using namespace femf;

TEST_CASE("euclidean tables are one") {
  const auto g = build_grid({8, 8, 8}, {0.8, 0.8, 0.8}, FractalDims{});
  for (int k = 0; k < 3; ++k)
    for (int p = 0; p < 2; ++p)
      for (double c : g.coeff(k, p))
        CHECK(c == 1.0);
}

TEST_CASE("fractal table values") {
  const FractalDims d{{0.5, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  const auto g = build_grid({8, 8, 8}, {0.8, 0.8, 0.8}, d);
  CHECK(coefficient_at(g, 0, 0) == doctest::Approx(0.5));
  CHECK(coefficient_at(g, 0, 1) == c1_coeff(0, 0.05, d));
  CHECK(g.coordinate(0, 1, 0) == doctest::Approx(0.05));
  CHECK(g.coeff(0, 0).size() == 9);
  CHECK(g.coeff(0, 1).size() == 8);
  CHECK_THROWS_AS(coefficient_at(g, 0, 17), std::out_of_range);
  CHECK_THROWS_AS(coefficient_at(g, 3, 0), std::out_of_range);

  const FractalDims an{{0.9, 0.6, 0.8}, {1, 1, 1}, {1, 1, 1}};
  const auto ga = build_grid({16, 12, 10}, {0.8, 0.7, 0.9}, an);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const int k = static_cast<int>(rng() % 3);
    const std::size_t s = rng() % static_cast<std::size_t>(2 * ga.cells(k) + 1);
    const double x = 0.5 * static_cast<double>(s) * ga.spacing(k);
    CHECK(coefficient_at(ga, k, s) == c1_coeff(k, x, an));
  }
}

TEST_CASE("grid validation") {
  const FractalDims d{{0.5, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  CHECK_THROWS_AS(build_grid({8, 8, 8}, {1.0, 0.8, 0.8}, d), DomainError);
  CHECK_THROWS_AS(build_grid({3, 8, 8}, {0.8, 0.8, 0.8}, d), DomainError);
  CHECK_THROWS_AS(build_grid({0, 8, 8}, {0.8, 0.8, 0.8}, d), DomainError);
  CHECK_THROWS_AS(build_grid({8, 8, 8}, {0.8, 0.8, 0.8}, d, {0.0, 0.05, 0.05}), DomainError);
  CHECK_NOTHROW(build_grid({8, 8, 8}, {0.95, 0.8, 0.8}, d));
  try {
    build_grid({8, 8, 8}, {0.99, 0.8, 0.8}, d);
  } catch (const DomainError &e) {
    CHECK(std::string(e.what()).find("singular") != std::string::npos);
  }
}

TEST_CASE("yee shapes") {
  const auto g = build_grid({4, 4, 4}, {0.8, 0.8, 0.8}, FractalDims{});
  const auto e = allocate_field(g, Location::Edge);
  CHECK(e.components() == 3);
  CHECK(e[0].extents == Extents{4, 5, 5});
  const auto c = allocate_field(g, Location::Center);
  CHECK(c.components() == 1);
  CHECK(c[0].extents == Extents{4, 4, 4});
  const auto f = allocate_field(g, Location::Face);
  CHECK(f[2].extents == Extents{4, 4, 5});
  CHECK(f.max_abs() == 0.0);
  CHECK(allocate_field(g, Location::Node, true).components() == 3);
}

TEST_CASE("tables depend on their own axis only") {
  const FractalDims an{{0.9, 0.6, 0.8}, {1, 1, 1}, {1, 1, 1}};
  const auto g = build_grid({6, 7, 8}, {0.8, 0.8, 0.8}, an);
  const auto c3 = sample(g, Location::Center, ScalarFn([&](const Vec3 &x) { return c3_coeff(x, an); }));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 7; ++j)
      for (std::size_t k = 0; k < 8; ++k)
        CHECK(c3[0](i, j, k) ==
              doctest::Approx(g.coeff(0, 1)[i] * g.coeff(1, 1)[j] * g.coeff(2, 1)[k]).epsilon(1e-15));
}

TEST_CASE("field arithmetic") {
  const auto g = build_grid({4, 4, 4}, {0.8, 0.8, 0.8}, FractalDims{});
  auto a = sample(g, Location::Edge, VectorFn([](const Vec3 &x) { return Vec3{x[0], 1.0, -x[2]}; }));
  auto b = a;
  b *= 2.0;
  const auto d = b - a;
  for (int c = 0; c < 3; ++c)
    CHECK(d[c].data == a[c].data);
  CHECK_THROWS_AS(a += allocate_field(g, Location::Face), LayoutError);
  a[1](0, 0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(a.require_finite("E"), std::runtime_error);
  CHECK_THROWS_AS(sample(g, Location::Edge, ScalarFn([](const Vec3 &) { return 1.0; })), LayoutError);
}

TEST_CASE("snapshot round trip") {
  const auto g = build_grid({4, 5, 6}, {0.8, 0.8, 0.8}, FractalDims{{0.7, 1, 1}});
  const auto f = sample(g, Location::Face, VectorFn([](const Vec3 &x) {
                          return Vec3{x[0] * 0.1, x[1] - 3.0, 1e-300 * x[2]};
                        }));
  std::stringstream ss;
  write_snapshot(ss, g, f);
  const std::string bytes = ss.str();
  CHECK(bytes.substr(0, 4) == "FEMF");
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 4);
  CHECK(bytes[12] == 5);
  CHECK(bytes[16] == 6);
  CHECK(bytes[20] == 2);
  std::size_t values = 0;
  for (int c = 0; c < 3; ++c)
    values += f[c].size();
  CHECK(bytes.size() == 21 + 8 * values);

  std::array<int, 3> cells{};
  const auto back = read_snapshot(ss, cells);
  CHECK(cells == std::array<int, 3>{4, 5, 6});
  CHECK(back.location() == Location::Face);
  for (int c = 0; c < 3; ++c)
    CHECK(back[c].data == f[c].data);

  std::stringstream bad("FEMX");
  CHECK_THROWS_AS(read_snapshot(bad, cells), std::runtime_error);
}
