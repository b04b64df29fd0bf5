#include "trajkit/eval.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "trajkit/error.hpp"

namespace trajkit {

double roc_auc(const AnomalyRanking& ranking, const std::map<std::string, Label>& labels) {
  const std::size_t n = ranking.size();
  // Orient so that larger means more anomalous.
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = ranking.polarity == Polarity::anomaly ? ranking.scores[i] : -ranking.scores[i];
  }
  std::vector<bool> positive(n);
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto it = labels.find(ranking.ids[i]);
    positive[i] = it != labels.end() && it->second == Label::anomalous;
    n_pos += positive[i];
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw MetricError("ROC-AUC needs at least one anomalous and one normal item");

  // Rank-sum with average ranks over ties.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return s[a] < s[b]; });
  double pos_rank_sum = 0.0;
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo;
    while (hi < n && s[idx[hi]] == s[idx[lo]]) ++hi;
    const double avg_rank = 0.5 * static_cast<double>(lo + 1 + hi);
    for (std::size_t k = lo; k < hi; ++k) {
      if (positive[idx[k]]) pos_rank_sum += avg_rank;
    }
    lo = hi;
  }
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double jaccard_spans(const std::vector<SubTrajectorySpan>& detected, const std::vector<SubTrajectorySpan>& truth,
                     std::size_t trajectory_length) {
  std::vector<char> a(trajectory_length + 1, 0);
  std::vector<char> b(trajectory_length + 1, 0);
  auto mark = [&](const std::vector<SubTrajectorySpan>& spans, std::vector<char>& m) {
    for (const auto& s : spans) {
      if (s.a < 1 || s.b < s.a || s.b > trajectory_length) throw ValidationError("span outside trajectory");
      for (std::size_t i = s.a; i <= s.b; ++i) m[i] = 1;
    }
  };
  mark(detected, a);
  mark(truth, b);
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 1; i <= trajectory_length; ++i) {
    inter += a[i] && b[i];
    uni += a[i] || b[i];
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double time_seconds(const std::function<void()>& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

namespace {

double fastest(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

}  // namespace

EvalReport scaleup_bench(const std::function<LabeledDataset(std::size_t)>& generator,
                         const std::vector<std::size_t>& sizes, const std::vector<BenchMethod>& methods,
                         std::size_t repeats) {
  if (!std::is_sorted(sizes.begin(), sizes.end())) throw ConfigError("benchmark sizes must be ascending");
  if (repeats == 0) throw ConfigError("repeats must be >= 1");
  EvalReport report;
  report.metric = "runtime_seconds";
  for (std::size_t n : sizes) {
    const LabeledDataset data = generator(n);
    for (const auto& method : methods) {
      std::vector<double> prep;
      std::vector<double> det;
      for (std::size_t r = 0; r < repeats; ++r) {
        const PhaseTiming t = method.run(data);
        prep.push_back(t.prep);
        det.push_back(t.detect);
      }
      report.rows.push_back({method.name, n, fastest(prep), fastest(det)});
    }
  }
  if (!sizes.empty()) {
    for (const auto& method : methods) {
      const BenchRow* first = nullptr;
      const BenchRow* last = nullptr;
      for (const auto& row : report.rows) {
        if (row.method != method.name) continue;
        if (!first) first = &row;
        last = &row;
      }
      auto ratio = [](double hi, double lo) { return lo > 0.0 ? hi / lo : 0.0; };
      report.ratios[method.name] = {ratio(last->prep, first->prep), ratio(last->detect, first->detect)};
    }
  }
  return report;
}

}  // namespace trajkit
