#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "trajkit/error.hpp"
#include "trajkit/isolation_kernel.hpp"

using namespace trajkit;

namespace {

PointMatrix uniform_points(std::mt19937_64& rng, std::size_t n, std::size_t d = 2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n * d);
  for (auto& x : v) x = u(rng);
  return {d, std::move(v)};
}

std::vector<double> uniform_point(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  std::vector<double> x(d);
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST_CASE("fit parameter errors") {
  std::mt19937_64 rng(1);
  const auto pts = uniform_points(rng, 5);
  CHECK_THROWS_AS(PartitioningModel::fit(pts, {8, 10, 0}), ParameterError);
  CHECK_THROWS_AS(PartitioningModel::fit(pts, {0, 10, 0}), ParameterError);
  CHECK_THROWS_AS(PartitioningModel::fit(pts, {2, 0, 0}), ParameterError);
  CHECK_NOTHROW(PartitioningModel::fit(pts, {5, 10, 0}));
}

TEST_CASE("exhaustive sample is a permutation") {
  std::mt19937_64 rng(2);
  const auto pts = uniform_points(rng, 10);
  const auto m = PartitioningModel::fit(pts, {10, 1, 3});
  std::multiset<std::vector<double>> want, got;
  for (std::size_t i = 0; i < 10; ++i) {
    const auto r = pts.row(i);
    want.emplace(r.begin(), r.end());
    const auto a = m.anchor(0, i);
    got.emplace(a.begin(), a.end());
  }
  CHECK(want == got);
}

TEST_CASE("anchors are distinct per partitioning and deterministic") {
  std::mt19937_64 rng(3);
  const auto pts = uniform_points(rng, 1000);
  const auto a = PartitioningModel::fit(pts, {16, 100, 42});
  const auto b = PartitioningModel::fit(pts, {16, 100, 42});
  const auto c = PartitioningModel::fit(pts, {16, 100, 43});
  CHECK(a.feature_dim() == 1600);
  bool same = true, differs = false;
  for (std::size_t p = 0; p < 100; ++p) {
    std::set<std::vector<double>> seen;
    for (std::size_t j = 0; j < 16; ++j) {
      const auto x = a.anchor(p, j);
      seen.emplace(x.begin(), x.end());
      same = same && std::ranges::equal(x, b.anchor(p, j));
      differs = differs || !std::ranges::equal(x, c.anchor(p, j));
    }
    CHECK(seen.size() == 16);
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("a point equal to an anchor selects that anchor") {
  std::mt19937_64 rng(4);
  const auto pts = uniform_points(rng, 200);
  for (auto rule : {CellRule::voronoi, CellRule::hypersphere}) {
    const auto m = PartitioningModel::fit(pts, {16, 20, 5, rule});
    for (std::size_t p = 0; p < m.t(); ++p) {
      const auto a = m.anchor(p, 7);
      CHECK(m.assign(a)[p] == 7);
    }
  }
}

TEST_CASE("single cell degenerate case") {
  std::mt19937_64 rng(5);
  const auto pts = uniform_points(rng, 50);
  for (auto rule : {CellRule::voronoi, CellRule::hypersphere}) {
    const auto m = PartitioningModel::fit(pts, {1, 30, 1, rule});
    for (int i = 0; i < 20; ++i) {
      const auto x = uniform_point(rng, 2);
      const auto y = uniform_point(rng, 2);
      for (auto c : m.assign(x)) CHECK(c == 0);
      CHECK(point_kernel(m, x, y) == 1.0);
      CHECK(dot(embed_point(m, x).values(), embed_point(m, y).values()) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("assignment matches a brute-force anchor scan") {
  std::mt19937_64 rng(6);
  for (std::size_t d : {1u, 2u, 3u, 10u}) {
    const auto pts = uniform_points(rng, 300, d);
    for (auto rule : {CellRule::voronoi, CellRule::hypersphere}) {
      for (std::size_t psi : {1u, 2u, 4u, 64u}) {
        const auto m = PartitioningModel::fit(pts, {psi, 3 + psi % 5, rng(), rule});
        for (int i = 0; i < 40; ++i) {
          const auto x = uniform_point(rng, d);
          const auto got = m.assign(x);
          const auto want = oracle::cells(m, x);
          REQUIRE(got.size() == want.size());
          for (std::size_t p = 0; p < got.size(); ++p) CHECK(got[p] == want[p]);
        }
      }
    }
  }
}

TEST_CASE("hypersphere radius is the distance to the nearest fellow anchor") {
  std::mt19937_64 rng(7);
  const auto m = PartitioningModel::fit(uniform_points(rng, 100), {8, 5, 0, CellRule::hypersphere});
  for (std::size_t p = 0; p < m.t(); ++p) {
    for (std::size_t j = 0; j < m.psi(); ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < m.psi(); ++k) {
        if (k != j) best = std::min(best, squared_euclidean(m.anchor(p, j), m.anchor(p, k)));
      }
      CHECK(m.squared_radius(p, j) == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("point embedding structure") {
  std::mt19937_64 rng(8);
  const auto pts = uniform_points(rng, 500);
  const auto v = PartitioningModel::fit(pts, {4, 3, 9});
  const auto x = uniform_point(rng, 2);
  const auto e = embed_point(v, x);
  CHECK(e.size() == 12);
  std::size_t nz = 0;
  const auto cells = oracle::cells(v, x);
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t j = 0; j < 4; ++j) {
      const bool on = e[p * 4 + j] != 0.0;
      nz += on;
      CHECK(on == (static_cast<int>(j) == cells[p]));
      if (on) CHECK(e[p * 4 + j] == 1.0 / std::sqrt(3.0));
    }
  }
  CHECK(nz == 3);

  const auto big = PartitioningModel::fit(pts, {16, 100, 9});
  for (int i = 0; i < 20; ++i) {
    const auto y = embed_point(big, uniform_point(rng, 2));
    CHECK(std::count_if(y.values().begin(), y.values().end(), [](double a) { return a != 0.0; }) == 100);
    CHECK(dot(y.values(), y.values()) == doctest::Approx(1.0).epsilon(1e-12));
  }

  const auto h = PartitioningModel::fit(pts, {16, 100, 9, CellRule::hypersphere});
  for (int i = 0; i < 20; ++i) {
    const auto y = embed_point(h, uniform_point(rng, 2));
    CHECK(std::count_if(y.values().begin(), y.values().end(), [](double a) { return a != 0.0; }) <= 100);
  }
}

TEST_CASE("point kernel properties") {
  std::mt19937_64 rng(9);
  const auto pts = uniform_points(rng, 400);
  for (auto rule : {CellRule::voronoi, CellRule::hypersphere}) {
    const auto m = PartitioningModel::fit(pts, {8, 50, 11, rule});
    for (int i = 0; i < 50; ++i) {
      const auto x = uniform_point(rng, 2);
      const auto y = uniform_point(rng, 2);
      const double k = point_kernel(m, x, y);
      CHECK(k == point_kernel(m, y, x));
      CHECK(k >= 0.0);
      CHECK(k <= 1.0);
      CHECK(std::abs(k * 50 - std::round(k * 50)) < 1e-12);
      CHECK(k == oracle::point_kernel(m, x, y));
      CHECK(k == doctest::Approx(dot(embed_point(m, x).values(), embed_point(m, y).values())).epsilon(1e-12));
      if (rule == CellRule::voronoi) CHECK(point_kernel(m, x, x) == 1.0);
    }
  }
}

TEST_CASE("sparse regions give higher similarity than dense ones") {
  double dense = 0.0, sparse = 0.0;
  for (std::uint64_t s = 0; s < 30; ++s) {
    std::mt19937_64 rng(100 + s);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> d, sp;
    for (int i = 0; i < 500; ++i) {
      d.push_back(0.5 + 0.05 * u(rng));
      d.push_back(0.5 + 0.05 * u(rng));
      sp.push_back(0.5 + 0.5 * u(rng));
      sp.push_back(0.5 + 0.5 * u(rng));
    }
    const double x[2] = {0.5, 0.5}, y[2] = {0.52, 0.5};
    dense += point_kernel(PartitioningModel::fit(PointMatrix(2, d), {16, 100, s}), x, y);
    sparse += point_kernel(PartitioningModel::fit(PointMatrix(2, sp), {16, 100, s}), x, y);
  }
  CHECK(sparse / 30 > dense / 30 + 0.02);
}

TEST_CASE("dimension mismatch") {
  std::mt19937_64 rng(10);
  const auto m = PartitioningModel::fit(uniform_points(rng, 20), {4, 2, 0});
  const double x[3] = {0, 0, 0};
  CHECK_THROWS_AS(m.assign(x), ValidationError);
}

TEST_CASE("rebuilding from anchors reproduces assignments") {
  std::mt19937_64 rng(11);
  const auto m = PartitioningModel::fit(uniform_points(rng, 100), {8, 10, 4, CellRule::hypersphere});
  const auto r = PartitioningModel::from_anchors(m.params(), m.pool(), m.anchor_index());
  for (int i = 0; i < 50; ++i) {
    const auto x = uniform_point(rng, 2);
    CHECK(m.assign(x) == r.assign(x));
  }
}

TEST_CASE("duplicate data points are tolerated") {
  PointMatrix pts(2, std::vector<double>(40, 0.25));
  const auto m = PartitioningModel::fit(pts, {8, 5, 0});
  const double x[2] = {0.25, 0.25};
  for (auto c : m.assign(x)) CHECK(c == 0);
}

TEST_CASE("tie_break_nearest") {
  const double a[] = {2.0, 1.0, 1.0};
  const double b[] = {0.0};
  CHECK(tie_break_nearest(a) == 1);
  CHECK(tie_break_nearest(b) == 0);
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> v(0, 5);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> d(10);
    for (auto& x : d) x = v(rng);
    std::size_t want = 0;
    for (std::size_t k = 1; k < d.size(); ++k) {
      if (d[k] < d[want]) want = k;
    }
    CHECK(tie_break_nearest(d) == want);
  }
}

TEST_CASE("cell rule names") {
  CHECK(cell_rule_from_string(to_string(CellRule::hypersphere)) == CellRule::hypersphere);
  CHECK(cell_rule_from_string(to_string(CellRule::voronoi)) == CellRule::voronoi);
  CHECK_THROWS(cell_rule_from_string("cube"));
}
