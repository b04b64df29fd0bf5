#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "trajkit/anomaly.hpp"
#include "trajkit/dataset.hpp"

namespace trajkit {

// Probability that a random anomaly is ranked as more anomalous than a random
// normal item under the ranking's polarity; ties count 1/2. Ids missing from
// `labels` count as normal. Throws MetricError unless both classes are present.
double roc_auc(const AnomalyRanking& ranking, const std::map<std::string, Label>& labels);

// Intersection over union of the point indices covered by two span sets on a
// trajectory of the given length; 1 when both are empty.
double jaccard_spans(const std::vector<SubTrajectorySpan>& detected, const std::vector<SubTrajectorySpan>& truth,
                     std::size_t trajectory_length);

// Wall-clock seconds for the two phases of one benchmark run.
struct PhaseTiming {
  double prep = 0.0;
  double detect = 0.0;
};

// A method under benchmark: runs both phases on a dataset and reports their times.
struct BenchMethod {
  std::string name;
  std::function<PhaseTiming(const LabeledDataset&)> run;
};

struct BenchRow {
  std::string method;
  std::size_t n = 0;
  double prep = 0.0;
  double detect = 0.0;
};

struct EvalReport {
  std::string metric;
  double value = 0.0;
  std::vector<BenchRow> rows;
  // Last size over first size, per method: (prep ratio, detect ratio).
  std::map<std::string, std::pair<double, double>> ratios;
};

// For each size and method: generate, run `repeats` times, keep the fastest
// time of each phase, which is the least disturbed by other load. Sizes must
// be ascending.
EvalReport scaleup_bench(const std::function<LabeledDataset(std::size_t)>& generator,
                         const std::vector<std::size_t>& sizes, const std::vector<BenchMethod>& methods,
                         std::size_t repeats = 3);

// Times f() with a monotonic clock, in seconds.
double time_seconds(const std::function<void()>& f);

}  // namespace trajkit
