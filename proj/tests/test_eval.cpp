#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "trajkit/error.hpp"
#include "trajkit/eval.hpp"

using namespace trajkit;

namespace {

std::map<std::string, Label> labels_of(const std::vector<int>& anomalous) {
  std::map<std::string, Label> m;
  for (std::size_t i = 0; i < anomalous.size(); ++i) m[std::to_string(i)] = anomalous[i] ? Label::anomalous : Label::normal;
  return m;
}

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(std::to_string(i));
  return v;
}

}  // namespace

TEST_CASE("roc auc extremes and errors") {
  const std::vector<int> a = {1, 1, 0, 0, 0};
  const auto l = labels_of(a);
  CHECK(roc_auc(AnomalyRanking::make(ids(5), {9, 8, 1, 2, 3}, Polarity::anomaly), l) == 1.0);
  CHECK(roc_auc(AnomalyRanking::make(ids(5), {9, 8, 1, 2, 3}, Polarity::similarity), l) == 0.0);
  CHECK(roc_auc(AnomalyRanking::make(ids(5), {1, 1, 1, 1, 1}, Polarity::anomaly), l) == 0.5);
  CHECK_THROWS_AS(roc_auc(AnomalyRanking::make(ids(5), {1, 2, 3, 4, 5}, Polarity::anomaly), labels_of({0, 0, 0, 0, 0})),
                  MetricError);
  std::map<std::string, Label> partial = {{"0", Label::anomalous}};
  CHECK(roc_auc(AnomalyRanking::make(ids(3), {5, 1, 2}, Polarity::anomaly), partial) == 1.0);
}

TEST_CASE("roc auc matches pair counting") {
  CHECK(roc_auc(AnomalyRanking::make(ids(10), {1, 2, 2, 3, 4, 4, 5, 6, 7, 8}, Polarity::anomaly),
                labels_of({0, 1, 0, 0, 1, 0, 1, 0, 0, 0})) ==
        doctest::Approx(oracle::auc_pairs({1, 2, 2, 3, 4, 4, 5, 6, 7, 8}, {0, 1, 0, 0, 1, 0, 1, 0, 0, 0}, true)));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> score(0, 6);
  std::bernoulli_distribution coin(0.3);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> s(15);
    std::vector<int> a(15);
    for (auto& v : s) v = score(rng);
    for (auto& v : a) v = coin(rng);
    a[0] = 1;
    a[1] = 0;
    for (auto pol : {Polarity::anomaly, Polarity::similarity}) {
      const double got = roc_auc(AnomalyRanking::make(ids(15), s, pol), labels_of(a));
      CHECK(got == doctest::Approx(oracle::auc_pairs(s, a, pol == Polarity::anomaly)).epsilon(1e-12));
    }
  }
}

TEST_CASE("jaccard of spans") {
  const std::vector<SubTrajectorySpan> d = {{"q", 2, 5}}, t = {{"q", 4, 9}};
  CHECK(jaccard_spans(d, t, 10) == doctest::Approx(0.25));
  CHECK(jaccard_spans(d, d, 10) == 1.0);
  CHECK(jaccard_spans({}, {}, 10) == 1.0);
  CHECK(jaccard_spans({{"q", 1, 2}}, {{"q", 5, 6}}, 10) == 0.0);
  CHECK(jaccard_spans({{"q", 1, 3}, {"q", 6, 7}}, {{"q", 2, 7}}, 10) == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("scaleup bench") {
  BenchMethod constant{"const", [](const LabeledDataset&) { return PhaseTiming{1.0, 2.0}; }};
  auto gen = [](std::size_t n) {
    LabeledDataset ds;
    for (std::size_t i = 0; i < n; ++i) ds.trajectories.emplace_back(std::to_string(i), 1, std::vector<double>{0});
    return ds;
  };
  const auto one = scaleup_bench(gen, {10}, {constant}, 1);
  REQUIRE(one.rows.size() == 1);
  CHECK(one.rows[0].n == 10);
  const auto r = scaleup_bench(gen, {10, 100}, {constant});
  CHECK(r.rows.size() == 2);
  CHECK(r.ratios.at("const").first == doctest::Approx(1.0));
  CHECK(r.ratios.at("const").second == doctest::Approx(1.0));

  std::size_t seen = 0;
  BenchMethod count{"count", [&](const LabeledDataset& ds) {
                      seen += ds.size();
                      return PhaseTiming{static_cast<double>(ds.size()), 0.0};
                    }};
  const auto c = scaleup_bench(gen, {10, 40}, {count}, 3);
  CHECK(seen == 150);
  CHECK(c.ratios.at("count").first == doctest::Approx(4.0));
  CHECK(time_seconds([] {}) >= 0.0);
}
