#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "trajkit/anomaly.hpp"
#include "trajkit/error.hpp"
#include "trajkit/eval.hpp"
#include "trajkit/synthgen.hpp"

using namespace trajkit;

namespace {

DistanceMatrix table(const std::vector<std::vector<double>>& d) {
  DistanceMatrix m;
  for (std::size_t i = 0; i < d.size(); ++i) {
    m.ids.push_back(std::to_string(i));
    m.values.insert(m.values.end(), d[i].begin(), d[i].end());
  }
  return m;
}

DetectConfig config_for(DetectorKind k) {
  DetectConfig c;
  c.detector = k;
  c.scheme = k == DetectorKind::gdk ? SchemeKind::nystrom : SchemeKind::isolation;
  return c;
}

}  // namespace

TEST_CASE("ranking order and ranks") {
  const auto a = AnomalyRanking::make({"a", "b", "c", "d"}, {0.5, 0.9, 0.5, 0.1}, Polarity::anomaly);
  CHECK(a.order == std::vector<std::size_t>{1, 0, 2, 3});
  CHECK(a.ranks() == std::vector<std::size_t>{2, 1, 3, 4});
  const auto s = AnomalyRanking::make({"a", "b", "c", "d"}, {0.5, 0.9, 0.5, 0.1}, Polarity::similarity);
  CHECK(s.order == std::vector<std::size_t>{3, 0, 2, 1});
  CHECK(polarity_from_string(to_string(Polarity::similarity)) == Polarity::similarity);
  CHECK(detector_from_string(to_string(DetectorKind::lof)) == DetectorKind::lof);
}

TEST_CASE("pow2_floor and resolve") {
  CHECK(pow2_floor(1) == 1);
  CHECK(pow2_floor(2) == 2);
  CHECK(pow2_floor(1023) == 512);
  CHECK(pow2_floor(1024) == 1024);
  const auto r = DetectConfig{}.resolve(103, 6180);
  CHECK(*r.psi2 == 32);
  CHECK(*r.t2 == 100);
  CHECK(*r.components == 100);
  CHECK(*r.components2 == 100);
  CHECK(*r.sigma2 == 0.125);
  CHECK(*r.k == 10);
  const auto small = DetectConfig{}.resolve(3, 7);
  CHECK(*small.psi2 == 2);
  CHECK(*small.components == 7);
  CHECK(*small.components2 == 3);
  CHECK(*small.k == 2);
  DetectConfig fixed;
  fixed.psi2 = 4;
  CHECK(*fixed.resolve(103, 6180).psi2 == 4);
}

TEST_CASE("lof of a regular simplex is one") {
  const std::size_t n = 7;
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (double s : lof_scores(table(d), n - 1).scores) CHECK(std::abs(s - 1.0) < 1e-9);
}

TEST_CASE("lof matches the textbook definition") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::vector<double>> p(12, std::vector<double>(2));
    for (auto& q : p) q = {u(rng), u(rng)};
    if (rep % 4 == 0) p[5] = p[2];
    std::vector<std::vector<double>> d(12, std::vector<double>(12));
    for (std::size_t i = 0; i < 12; ++i) {
      for (std::size_t j = 0; j < 12; ++j) d[i][j] = oracle::dist(p[i], p[j]);
    }
    for (std::size_t k : {1u, 3u, 5u}) {
      const auto got = lof_scores(table(d), k).scores;
      const auto want = oracle::lof(d, k, kLofDensityCap);
      for (std::size_t i = 0; i < 12; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }
  }
  std::vector<std::vector<double>> tie = {{0, 1, 1, 2}, {1, 0, 2, 1}, {1, 2, 0, 1}, {2, 1, 1, 0}};
  const auto got = lof_scores(table(tie), 1).scores;
  const auto want = oracle::lof(tie, 1, kLofDensityCap);
  for (std::size_t i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("lof singleton and parameter errors") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 0.01);
  std::vector<std::vector<double>> p(15, std::vector<double>(2));
  for (auto& q : p) q = {g(rng), g(rng)};
  p[9] = {3.0, 3.0};
  std::vector<std::vector<double>> d(15, std::vector<double>(15));
  for (std::size_t i = 0; i < 15; ++i) {
    for (std::size_t j = 0; j < 15; ++j) d[i][j] = oracle::dist(p[i], p[j]);
  }
  const auto r = lof_scores(table(d), 4);
  CHECK(r.order.front() == 9);
  CHECK_THROWS_AS(lof_scores(table(d), 0), ParameterError);
  CHECK_THROWS_AS(lof_scores(table(d), 15), ParameterError);
}

TEST_CASE("idk point scores") {
  PointMatrix one(2, {0.4, 0.6});
  const FeatureModel m1 = PartitioningModel::fit(one, {1, 10, 0});
  CHECK(idk_point_scores(m1, one)[0] == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(100);
  for (auto& x : v) x = u(rng);
  const PointMatrix pts(2, v);
  const auto pm = PartitioningModel::fit(pts, {8, 50, 1});
  const auto scores = idk_point_scores(FeatureModel(pm), pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) s += oracle::point_kernel(pm, pts.row(i), pts.row(j));
    CHECK(std::abs(scores[i] - s / 50.0) < 1e-12);
  }

  const FeatureModel big = PartitioningModel::fit(pts, {32, 100, 1, CellRule::hypersphere});
  const PointMatrix far(2, {10.0, 10.0});
  CHECK(idk_point_scores(big, pts, far)[0] < 1e-12);
}

TEST_CASE("separable singleton is ranked first by every detector") {
  for (auto k : {DetectorKind::idk2, DetectorKind::gdk, DetectorKind::lof}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto ds = normalize(gen_separable_singleton(20, seed));
      auto c = config_for(k);
      c.seed = seed;
      const auto r = detect(ds, c);
      CHECK(ds.trajectories[r.order.front()].id() == "19");
      CHECK(roc_auc(r, *ds.labels) == 1.0);
    }
  }
}

TEST_CASE("more separation never lowers the singleton's rank") {
  std::size_t last = 0;
  for (double sep : {0.0, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0}) {
    const auto ds = gen_separable_singleton(20, 4, sep);
    const auto r = detect(ds, config_for(DetectorKind::idk2));
    const std::size_t rank = r.ranks().back();
    if (last) CHECK(rank <= last);
    last = rank;
  }
  CHECK(last == 1);
}

TEST_CASE("dense-sparse set: idk2 isolates the three straight lines") {
  const auto ds = normalize(gen_dense_sparse(7));
  const auto r = detect(ds, config_for(DetectorKind::idk2));
  std::set<std::size_t> top(r.order.begin(), r.order.begin() + 3);
  CHECK(top == std::set<std::size_t>{40, 51, 52});
  const auto g = detect(ds, config_for(DetectorKind::gdk));
  std::set<std::size_t> gtop(g.order.begin(), g.order.begin() + 3);
  CHECK(gtop != std::set<std::size_t>{40, 51, 52});
  CHECK(roc_auc(g, *ds.labels) < roc_auc(r, *ds.labels));
}

TEST_CASE("detector model scores unseen trajectories consistently") {
  const auto ds = normalize(gen_cross_style(60, 2, 0.05));
  for (auto k : {DetectorKind::idk2, DetectorKind::gdk}) {
    const auto m = DetectorModel::fit(ds, config_for(k));
    for (std::size_t i = 0; i < ds.size(); i += 7) {
      CHECK(m.score(ds.trajectories[i]) == doctest::Approx(m.ranking().scores[i]).epsilon(1e-9));
    }
  }
  const auto lof = DetectorModel::fit(ds, config_for(DetectorKind::lof));
  const Trajectory far("far", 2, {0.95, 0.05, 0.96, 0.05, 0.97, 0.06});
  const double f = lof.score(far);
  CHECK(std::isfinite(f));
  CHECK(f > 0.0);
}

TEST_CASE("detector parameter errors") {
  auto ds = gen_separable_singleton(5, 0);
  auto c = config_for(DetectorKind::idk2);
  c.psi = 4096;
  CHECK_THROWS_AS(detect(ds, c), ParameterError);
  c = config_for(DetectorKind::idk2);
  c.psi2 = 8;
  CHECK_THROWS_AS(detect(ds, c), ParameterError);
  ds.trajectories.resize(1);
  ds.labels->erase("1");
  ds.labels->erase("2");
  ds.labels->erase("3");
  ds.labels->erase("4");
  CHECK_THROWS_AS(detect(ds, config_for(DetectorKind::idk2)), ParameterError);
}

TEST_CASE("grid search") {
  const auto sep = normalize(gen_separable_singleton(12, 1));
  SearchGrid one{{8}, {0.125}, {4}, {0.125}, {3}};
  const auto r = auto_search(sep, config_for(DetectorKind::idk2), one);
  CHECK(r.table.size() == 1);
  CHECK(r.best.psi == 8);
  CHECK(*r.best.psi2 == 4);
  CHECK(r.best_auc == 1.0);

  LabeledDataset unlabeled = sep;
  unlabeled.labels.reset();
  CHECK_THROWS_AS(auto_search(unlabeled, config_for(DetectorKind::idk2)), ConfigError);

  const auto grid = default_grid(103, 6180);
  CHECK(grid.psi.size() == 10);
  CHECK(grid.psi2.back() == 64);
  CHECK(grid.sigma.size() == 16);

  const auto ds = normalize(gen_dense_sparse(3));
  const SearchGrid small{{8, 16, 64}, {0.03125, 0.125, 0.5}, {8, 32}, {0.03125, 0.125, 0.5}, {5}};
  const double idk = auto_search(ds, config_for(DetectorKind::idk2), small).best_auc;
  const double gdk = auto_search(ds, config_for(DetectorKind::gdk), small).best_auc;
  CHECK(idk > gdk);
}
