#include "trajkit/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "trajkit/anomaly.hpp"
#include "trajkit/distances.hpp"
#include "trajkit/error.hpp"
#include "trajkit/eval.hpp"
#include "trajkit/io.hpp"
#include "trajkit/parallel.hpp"
#include "trajkit/patterns.hpp"
#include "trajkit/serialization.hpp"
#include "trajkit/subtraj.hpp"
#include "trajkit/synthgen.hpp"

namespace trajkit {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::uint64_t default_seed() {
  const char* v = std::getenv(kSeedEnv);
  if (!v || !*v) return 0;
  try {
    std::size_t used = 0;
    const auto s = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument("trailing");
    return s;
  } catch (const std::exception&) {
    throw ConfigError(std::string(kSeedEnv) + " is not an unsigned integer: '" + v + "'");
  }
}

SchemeKind scheme_from_string(const std::string& s) {
  if (s == "ik" || s == "isolation") return SchemeKind::isolation;
  if (s == "gk" || s == "nystrom" || s == "gaussian") return SchemeKind::nystrom;
  throw ConfigError("unknown scheme '" + s + "' (expected ik or gk)");
}

const char* scheme_name(SchemeKind k) { return k == SchemeKind::isolation ? "ik" : "gk"; }

// Writes through `out` when path is empty or "-", otherwise to the file.
void with_output(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(out);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  fn(f);
  f.flush();
  if (!f) throw IoError("write failed for " + path);
}

std::string header_line(const std::string& command, const ordered_json& config) {
  return "# trajkit " + command + " " + config.dump() + "\n";
}

// Common options shared by every subcommand.
struct Common {
  std::string config;
  std::size_t workers = 0;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON file whose keys mirror the flags; flags on the command line win");
  app->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
  app->add_option("--seed", c.seed, std::string("Random seed (default from ") + kSeedEnv + ")");
}

struct DataOptions {
  std::string input;
  std::string format;
  std::string labels;
  std::string clusters;
  std::string id_column = "id";
  std::string time_column = "t";
  std::vector<std::string> coord_columns = {"x", "y"};
  bool normalize = true;
  bool include_time = false;
};

void add_data_options(CLI::App* app, DataOptions& d, bool input_required = true) {
  auto* in = app->add_option("-i,--input", d.input, "Trajectory file (CSV or JSON)");
  if (input_required) in->required();
  app->add_option("--format", d.format, "csv or json (default: from the extension)");
  app->add_option("--labels", d.labels, "Label file (id,label)");
  app->add_option("--clusters", d.clusters, "Cluster file (id,cluster)");
  app->add_option("--id-column", d.id_column, "CSV id column");
  app->add_option("--time-column", d.time_column, "CSV time column");
  app->add_option("--coord-columns", d.coord_columns, "CSV coordinate columns")->delimiter(',');
  app->add_flag("--normalize,!--no-normalize", d.normalize, "Min-max scale every dimension to [0, 1]");
  app->add_flag("--include-time", d.include_time, "Use time as an extra coordinate");
}

ordered_json describe(const DataOptions& d) {
  ordered_json j;
  j["input"] = d.input;
  j["labels"] = d.labels;
  j["clusters"] = d.clusters;
  j["normalize"] = d.normalize;
  j["include_time"] = d.include_time;
  return j;
}

FileFormat parse_format(const std::string& format, const std::string& path) {
  if (format.empty()) return format_from_path(path);
  if (format == "csv") return FileFormat::csv;
  if (format == "json") return FileFormat::json;
  throw ConfigError("unknown format '" + format + "' (expected csv or json)");
}

IngestOptions ingest_options(const DataOptions& d) {
  IngestOptions o;
  o.id_column = d.id_column;
  o.time_column = d.time_column;
  o.coord_columns = d.coord_columns;
  return o;
}

// The raw dataset with side files attached, before normalization.
LabeledDataset load_raw(const DataOptions& d) {
  LabeledDataset ds = load_dataset(d.input, parse_format(d.format, d.input), ingest_options(d));
  if (!d.labels.empty()) ds.labels = load_labels(d.labels);
  if (!d.clusters.empty()) ds.clusters = load_clusters(d.clusters);
  ds.validate();
  return ds;
}

LabeledDataset prepare(const LabeledDataset& raw, const DataOptions& d) {
  if (d.normalize || d.include_time) {
    LabeledDataset n = normalize(raw, d.include_time);
    if (!d.normalize) return denormalize(n);
    return n;
  }
  return raw;
}

// ---------------------------------------------------------------- gen

struct GenCommand {
  Common common;
  std::string kind = "dense-sparse-103";
  std::size_t n = 0;
  double anomaly_fraction = 0.02;
  double separation = 1.0;
  std::string out;
  std::string format;

  void add(CLI::App* app) {
    add_common(app, common);
    app->add_option("--kind", kind, "dense-sparse-103, translated-triple, separable-singleton or cross-style");
    app->add_option("--n", n, "Trajectory count for kinds that take one");
    app->add_option("--anomaly-fraction", anomaly_fraction, "Off-corridor fraction (cross-style)");
    app->add_option("--separation", separation, "Singleton distance (separable-singleton)");
    app->add_option("-o,--out", out, "Output trajectory file")->required();
    app->add_option("--format", format, "csv or json (default: from the extension)");
  }

  int run(std::ostream& sout) const {
    const GeneratorKind k = generator_from_string(kind);
    LabeledDataset ds;
    switch (k) {
      case GeneratorKind::dense_sparse: ds = gen_dense_sparse(common.seed); break;
      case GeneratorKind::separable_singleton: ds = gen_separable_singleton(n ? n : 20, common.seed, separation); break;
      case GeneratorKind::cross_style: ds = gen_cross_style(n ? n : 190, common.seed, anomaly_fraction); break;
      case GeneratorKind::translated_triple: ds = generate({k, common.seed, n}); break;
    }
    const FileFormat f = parse_format(format, out);
    ordered_json cfg;
    cfg["kind"] = to_string(k);
    cfg["seed"] = common.seed;
    cfg["n"] = ds.size();
    if (k == GeneratorKind::cross_style) cfg["anomaly_fraction"] = anomaly_fraction;
    if (k == GeneratorKind::separable_singleton) cfg["separation"] = separation;
    with_output(out, sout, [&](std::ostream& o) {
      if (f == FileFormat::csv) {
        o << header_line("gen", cfg);
        write_csv(o, ds);
      } else {
        write_json(o, ds);
      }
    });
    std::filesystem::path stem(out);
    stem.replace_extension();
    if (ds.labels) {
      with_output(stem.string() + ".labels.csv", sout, [&](std::ostream& o) { write_labels(o, ds); });
    }
    if (ds.clusters) {
      with_output(stem.string() + ".clusters.csv", sout, [&](std::ostream& o) { write_clusters(o, ds); });
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------- feature-map options

struct MapOptions {
  std::string scheme = "ik";
  std::size_t psi = 16;
  std::size_t t = 100;
  std::string rule = "voronoi";
  std::optional<std::size_t> components;
  double sigma = 0.125;

  void add(CLI::App* app, const std::string& default_rule = "voronoi") {
    rule = default_rule;
    app->add_option("--scheme", scheme, "ik (isolation) or gk (Gaussian via Nystrom)");
    app->add_option("--psi", psi, "Anchors per partitioning");
    app->add_option("--t", t, "Number of partitionings");
    app->add_option("--rule", rule, "Cell rule: voronoi or hypersphere");
    app->add_option("--components", components, "Nystrom landmarks (default min(100, N))");
    app->add_option("--sigma", sigma, "Gaussian bandwidth");
  }
};

// ---------------------------------------------------------------- embed

struct EmbedCommand {
  Common common;
  DataOptions data;
  MapOptions map;
  std::string out;
  std::string binary;
  std::string save_model_path;
  std::string load_model_path;

  void add(CLI::App* app) {
    add_common(app, common);
    add_data_options(app, data);
    map.add(app);
    app->add_option("-o,--out", out, "Embedding CSV (default: standard output)");
    app->add_option("--binary", binary, "Also write the embeddings in binary form");
    app->add_option("--save-model", save_model_path, "Write the fitted feature map");
    app->add_option("--load-model", load_model_path, "Use a stored feature map instead of fitting");
  }

  int run(std::ostream& sout) const {
    const LabeledDataset ds = prepare(load_raw(data), data);
    std::optional<FeatureModel> model;
    ordered_json cfg = describe(data);
    if (load_model_path.empty()) {
      DetectConfig c;
      c.scheme = scheme_from_string(map.scheme);
      c.psi = map.psi;
      c.t = map.t;
      c.rule = cell_rule_from_string(map.rule);
      c.components = map.components;
      c.sigma = map.sigma;
      c.seed = common.seed;
      c = c.resolve(ds.size(), ds.total_points());
      model = fit_feature_model(concat_points(ds), c);
      cfg["scheme"] = scheme_name(c.scheme);
      if (c.scheme == SchemeKind::isolation) {
        cfg["psi"] = c.psi;
        cfg["t"] = c.t;
        cfg["rule"] = to_string(c.rule);
      } else {
        cfg["components"] = *c.components;
        cfg["sigma"] = c.sigma;
      }
      cfg["seed"] = c.seed;
    } else {
      model = load_model(load_model_path);
      cfg["model"] = load_model_path;
      cfg["scheme"] = scheme_of(*model).describe();
    }
    if (input_dim(*model) != ds.dim()) throw ValidationError("model dimension does not match the data");
    const EmbeddedDataset e = embed_dataset(*model, ds);
    with_output(out, sout, [&](std::ostream& o) {
      o << header_line("embed", cfg);
      write_embeddings_csv(o, e);
    });
    if (!binary.empty()) with_output(binary, sout, [&](std::ostream& o) { write_embeddings_binary(o, e); });
    if (!save_model_path.empty()) save_model(save_model_path, *model);
    return kExitOk;
  }
};

// ---------------------------------------------------------------- detect

std::vector<std::pair<std::string, double>> read_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::pair<std::string, double>> out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_csv_line(line);
    if (f.size() < 2) throw FormatError("expected id,score", line_no);
    if (!header) {
      header = true;
      continue;
    }
    try {
      std::size_t used = 0;
      const double s = std::stod(f[1], &used);
      if (used != f[1].size()) throw std::invalid_argument("trailing");
      out.emplace_back(f[0], s);
    } catch (const std::exception&) {
      throw FormatError("bad score '" + f[1] + "'", line_no);
    }
  }
  if (!header) throw FormatError("missing header row", line_no);
  return out;
}

// Polarity recorded in a trajkit header line, if any.
std::optional<Polarity> recorded_polarity(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# trajkit ", 0) != 0) {
      if (!line.empty() && line[0] == '#') continue;
      break;
    }
    const auto brace = line.find('{');
    if (brace == std::string::npos) continue;
    const json j = json::parse(line.substr(brace), nullptr, false);
    if (j.is_object() && j.contains("polarity") && j["polarity"].is_string()) {
      return polarity_from_string(j["polarity"].get<std::string>());
    }
  }
  return std::nullopt;
}

void write_ranking(std::ostream& o, const AnomalyRanking& r) {
  const auto ranks = r.ranks();
  o << "id,score,rank\n";
  for (std::size_t i = 0; i < r.size(); ++i) o << r.ids[i] << ',' << format_double(r.scores[i]) << ',' << ranks[i] << '\n';
}

ordered_json describe(const DetectConfig& c) {
  ordered_json j;
  j["scheme"] = scheme_name(c.scheme);
  j["detector"] = to_string(c.detector);
  if (c.scheme == SchemeKind::isolation) {
    j["psi"] = c.psi;
    j["t"] = c.t;
    j["rule"] = to_string(c.rule);
  } else {
    j["components"] = c.components.value_or(0);
    j["sigma"] = c.sigma;
  }
  switch (c.detector) {
    case DetectorKind::idk2:
      j["psi2"] = c.psi2.value_or(0);
      j["t2"] = c.t2.value_or(0);
      break;
    case DetectorKind::gdk:
      j["components2"] = c.components2.value_or(0);
      j["sigma2"] = c.sigma2.value_or(0.0);
      break;
    case DetectorKind::lof:
      j["k"] = c.k.value_or(0);
      break;
  }
  j["seed"] = c.seed;
  return j;
}

struct DetectCommand {
  Common common;
  DataOptions data;
  MapOptions map;
  std::string detector = "idk2";
  std::optional<std::size_t> psi2, t2, components2, k;
  std::optional<double> sigma2;
  std::string measure;
  bool search = false;
  std::string table;
  std::string scores;
  std::string polarity = "anomaly";
  std::string out;

  void add(CLI::App* app) {
    add_common(app, common);
    add_data_options(app, data, false);
    map.add(app, "hypersphere");
    app->add_option("--detector", detector, "idk2, gdk or lof");
    app->add_option("--psi2", psi2, "Level-2 anchors (idk2)");
    app->add_option("--t2", t2, "Level-2 partitionings (idk2)");
    app->add_option("--components2", components2, "Level-2 landmarks (gdk)");
    app->add_option("--sigma2", sigma2, "Level-2 bandwidth (gdk)");
    app->add_option("--k", k, "LOF neighbourhood size");
    app->add_option("--measure", measure, "LOF over a baseline distance instead of embeddings: dtw, hausdorff or frechet");
    app->add_flag("--search", search, "Grid-search the parameters against the labels");
    app->add_option("--table", table, "Write the search table as CSV");
    app->add_option("--scores", scores, "Rank an external score file (id,score) instead of detecting");
    app->add_option("--polarity", polarity, "Polarity of --scores: anomaly or similarity");
    app->add_option("-o,--out", out, "Ranking CSV (default: standard output)");
  }

  DetectConfig config() const {
    DetectConfig c;
    c.scheme = scheme_from_string(map.scheme);
    c.detector = detector_from_string(detector);
    c.psi = map.psi;
    c.t = map.t;
    c.rule = cell_rule_from_string(map.rule);
    c.components = map.components;
    c.sigma = map.sigma;
    c.psi2 = psi2;
    c.t2 = t2;
    c.components2 = components2;
    c.sigma2 = sigma2;
    c.k = k;
    c.seed = common.seed;
    return c;
  }

  int run(std::ostream& sout) const {
    AnomalyRanking ranking;
    ordered_json cfg;
    std::optional<std::map<std::string, Label>> labels;

    if (!scores.empty()) {
      std::vector<std::string> ids;
      std::vector<double> values;
      for (auto& [id, s] : read_scores(scores)) {
        ids.push_back(id);
        values.push_back(s);
      }
      ranking = AnomalyRanking::make(std::move(ids), std::move(values), polarity_from_string(polarity));
      cfg["scores"] = scores;
      if (!data.labels.empty()) labels = load_labels(data.labels);
    } else {
      if (data.input.empty()) throw ConfigError("--input is required unless --scores is given");
      const LabeledDataset ds = prepare(load_raw(data), data);
      labels = ds.labels;
      cfg = describe(data);
      if (!measure.empty()) {
        const Measure m = measure_from_string(measure);
        const DetectConfig c = config().resolve(ds.size(), ds.total_points());
        if (*c.k < 1 || *c.k >= ds.size()) throw ParameterError("LOF requires 1 <= k <= n - 1");
        ranking = lof_scores(pairwise_matrix(ds, m), *c.k);
        cfg["detector"] = "lof";
        cfg["measure"] = to_string(m);
        cfg["k"] = *c.k;
      } else if (search) {
        SearchResult r = auto_search(ds, config());
        ranking = std::move(r.ranking);
        cfg.update(describe(r.best));
        cfg["search"] = true;
        if (!table.empty()) {
          with_output(table, sout, [&](std::ostream& o) {
            o << "config,auc\n";
            for (const auto& e : r.table) o << '"' << describe(e.config).dump() << "\"," << format_double(e.auc) << '\n';
          });
        }
      } else {
        const DetectorModel model = DetectorModel::fit(ds, config());
        ranking = model.ranking();
        cfg.update(describe(model.config()));
      }
    }
    cfg["polarity"] = to_string(ranking.polarity);
    with_output(out, sout, [&](std::ostream& o) {
      o << header_line("detect", cfg);
      write_ranking(o, ranking);
    });
    if (labels) sout << "auc=" << format_double(roc_auc(ranking, *labels)) << '\n';
    return kExitOk;
  }
};

// ---------------------------------------------------------------- subtraj

struct SubtrajCommand {
  Common common;
  DataOptions data;
  std::string query;
  std::string query_input;
  std::size_t psi = 16;
  std::size_t t = 100;
  double tau = 0.0;
  std::size_t min_len = 3;
  std::string rule = "hypersphere";
  bool truth = false;
  double truth_radius = 0.05;
  std::string out;
  std::string points;

  void add(CLI::App* app) {
    add_common(app, common);
    add_data_options(app, data);
    app->add_option("--query", query, "Id of the query trajectory")->required();
    app->add_option("--query-input", query_input, "File holding the query (default: the input file)");
    app->add_option("--psi", psi, "Anchors per partitioning");
    app->add_option("--t", t, "Number of partitionings");
    app->add_option("--tau", tau, "Points with score <= tau are anomalous");
    app->add_option("--min-len", min_len, "Shortest reported sub-trajectory");
    app->add_option("--rule", rule, "Cell rule: voronoi or hypersphere");
    app->add_flag("--truth", truth, "Also label the query by neighbourhood search and report the Jaccard index");
    app->add_option("--truth-radius", truth_radius, "Neighbourhood radius for --truth (normalized units)");
    app->add_option("-o,--out", out, "Report JSON (default: standard output)");
    app->add_option("--points", points, "Per-point CSV: index,x,y,beta,anomalous");
  }

  int run(std::ostream& sout) const {
    LabeledDataset raw = load_raw(data);
    Trajectory raw_query;
    if (query_input.empty()) {
      raw_query = raw.find(query);
    } else {
      DataOptions q = data;
      q.input = query_input;
      q.labels.clear();
      q.clusters.clear();
      raw_query = load_raw(q).find(query);
      for (const auto& tr : raw.trajectories) {
        if (tr.id() == query) throw ValidationError("query id '" + query + "' also appears in the normal data");
      }
      raw.trajectories.push_back(raw_query);
      if (raw.labels) (*raw.labels)[query] = Label::anomalous;
      if (raw.clusters) raw.clusters.reset();
      raw.normalization.clear();
    }
    const LabeledDataset all = prepare(raw, data);
    LabeledDataset normal;
    for (const auto& tr : all.trajectories) {
      if (tr.id() == query) continue;
      if (all.labels) {
        auto it = all.labels->find(tr.id());
        if (it != all.labels->end() && it->second == Label::anomalous) continue;
      }
      normal.trajectories.push_back(tr);
    }
    const Trajectory& q = all.find(query);

    SubTrajParams p;
    p.psi = psi;
    p.t = t;
    p.tau = tau;
    p.min_len = min_len;
    p.seed = common.seed;
    p.rule = cell_rule_from_string(rule);
    const SubTrajReport report = detect_subtraj(normal, q, p);

    ordered_json cfg = describe(data);
    cfg["query"] = query;
    cfg["psi"] = psi;
    cfg["t"] = t;
    cfg["tau"] = tau;
    cfg["min_len"] = min_len;
    cfg["rule"] = rule;
    cfg["seed"] = common.seed;

    ordered_json j;
    j["config"] = cfg;
    j["query_id"] = report.query_id;
    auto spans_json = [](const std::vector<SubTrajectorySpan>& spans) {
      ordered_json a = ordered_json::array();
      for (const auto& s : spans) a.push_back({{"a", s.a}, {"b", s.b}});
      return a;
    };
    j["spans"] = spans_json(report.spans);
    j["beta"] = report.beta;
    if (truth) {
      const auto gt = ground_truth_labeler(normal, q, truth_radius, min_len);
      j["truth_radius"] = truth_radius;
      j["truth_spans"] = spans_json(gt);
      j["jaccard"] = jaccard_spans(report.spans, gt, q.size());
    }
    with_output(out, sout, [&](std::ostream& o) { o << j.dump() << '\n'; });

    if (!points.empty()) {
      std::vector<bool> flag(q.size(), false);
      for (const auto& s : report.spans) {
        for (std::size_t i = s.a; i <= s.b; ++i) flag[i - 1] = true;
      }
      with_output(points, sout, [&](std::ostream& o) {
        o << header_line("subtraj", cfg);
        o << "index,x,y,beta,anomalous\n";
        for (std::size_t i = 0; i < raw_query.size(); ++i) {
          const auto pt = raw_query.point(i);
          o << i + 1 << ',' << format_double(pt[0]) << ',' << format_double(pt.size() > 1 ? pt[1] : 0.0) << ','
            << format_double(report.beta[i]) << ',' << (flag[i] ? 1 : 0) << '\n';
        }
      });
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------- mine

struct MineCommand {
  Common common;
  DataOptions data;
  std::size_t psi = 16;
  std::size_t t = 100;
  double gamma = 0.06;
  std::size_t min_len = 3;
  std::string rule = "voronoi";
  bool theta = false;
  std::string out;

  void add(CLI::App* app) {
    add_common(app, common);
    add_data_options(app, data);
    app->add_option("--psi", psi, "Anchors per partitioning");
    app->add_option("--t", t, "Number of partitionings");
    app->add_option("--gamma", gamma, "Points with score > gamma are frequent");
    app->add_option("--min-len", min_len, "Shortest reported pattern (1 keeps all runs)");
    app->add_option("--rule", rule, "Cell rule: voronoi or hypersphere");
    app->add_flag("--theta", theta, "Include per-point scores of each representative");
    app->add_option("-o,--out", out, "Pattern JSON (default: standard output)");
  }

  int run(std::ostream& sout) const {
    const LabeledDataset ds = prepare(load_raw(data), data);
    MineParams p;
    p.psi = psi;
    p.t = t;
    p.gamma = gamma;
    p.min_len = min_len;
    p.seed = common.seed;
    p.rule = cell_rule_from_string(rule);
    const PatternSet set = mine_patterns(ds, p);

    ordered_json cfg = describe(data);
    cfg["psi"] = psi;
    cfg["t"] = t;
    cfg["gamma"] = gamma;
    cfg["min_len"] = min_len;
    cfg["rule"] = rule;
    cfg["seed"] = common.seed;

    ordered_json j;
    j["config"] = cfg;
    ordered_json clusters = ordered_json::array();
    std::optional<double> lo, hi;
    for (const auto& c : set.clusters) {
      ordered_json cj;
      cj["cluster"] = c.cluster;
      cj["representative_id"] = c.representative_id;
      ordered_json spans = ordered_json::array();
      ordered_json lengths = ordered_json::array();
      for (const auto& pt : c.patterns) {
        spans.push_back({{"a", pt.span.a}, {"b", pt.span.b}});
        lengths.push_back(pt.length);
        lo = lo ? std::min(*lo, pt.length) : pt.length;
        hi = hi ? std::max(*hi, pt.length) : pt.length;
      }
      cj["spans"] = spans;
      cj["lengths"] = lengths;
      if (theta) cj["theta"] = c.theta;
      clusters.push_back(cj);
    }
    j["clusters"] = clusters;
    ordered_json summary;
    summary["fp"] = set.count();
    summary["min_length"] = lo ? ordered_json(*lo) : ordered_json(nullptr);
    summary["max_length"] = hi ? ordered_json(*hi) : ordered_json(nullptr);
    j["summary"] = summary;
    with_output(out, sout, [&](std::ostream& o) { o << j.dump() << '\n'; });
    return kExitOk;
  }
};

// ---------------------------------------------------------------- eval

struct EvalCommand {
  Common common;
  std::string ranking;
  std::string labels;
  std::string polarity;
  std::string out;

  void add(CLI::App* app) {
    add_common(app, common);
    app->add_option("--ranking", ranking, "Ranking or score CSV (id,score[,rank])")->required();
    app->add_option("--labels", labels, "Label file (id,label)")->required();
    app->add_option("--polarity", polarity, "anomaly or similarity (default: from the file header, else anomaly)");
    app->add_option("-o,--out", out, "Result (default: standard output)");
  }

  int run(std::ostream& sout) const {
    Polarity pol = Polarity::anomaly;
    if (!polarity.empty()) {
      pol = polarity_from_string(polarity);
    } else if (auto rec = recorded_polarity(ranking)) {
      pol = *rec;
    }
    std::vector<std::string> ids;
    std::vector<double> values;
    for (auto& [id, s] : read_scores(ranking)) {
      ids.push_back(id);
      values.push_back(s);
    }
    const auto r = AnomalyRanking::make(std::move(ids), std::move(values), pol);
    const double auc = roc_auc(r, load_labels(labels));
    with_output(out, sout, [&](std::ostream& o) { o << "auc=" << format_double(auc) << '\n'; });
    return kExitOk;
  }
};

// ---------------------------------------------------------------- bench

struct BenchCommand {
  Common common;
  std::vector<std::size_t> sizes = {100, 1000};
  std::vector<std::string> methods = {"ik", "dtw"};
  std::size_t repeats = 3;
  MapOptions map;
  std::string out;

  void add(CLI::App* app) {
    add_common(app, common);
    map.add(app, "hypersphere");
    app->add_option("--sizes", sizes, "Trajectory counts, ascending")->delimiter(',');
    app->add_option("--methods", methods, "ik, gk, dtw, hausdorff, frechet")->delimiter(',');
    app->add_option("--repeats", repeats, "Runs per cell (fastest kept)");
    app->add_option("-o,--out", out, "Timing CSV (default: standard output)");
  }

  BenchMethod method(const std::string& name) const {
    if (name == "ik" || name == "gk") {
      DetectConfig base;
      base.scheme = scheme_from_string(name);
      base.detector = name == "ik" ? DetectorKind::idk2 : DetectorKind::gdk;
      base.psi = map.psi;
      base.t = map.t;
      base.rule = cell_rule_from_string(map.rule);
      base.components = map.components;
      base.sigma = map.sigma;
      base.seed = common.seed;
      return {name, [base](const LabeledDataset& ds) {
                const DetectConfig c = base.resolve(ds.size(), ds.total_points());
                PhaseTiming t;
                EmbeddedDataset e;
                t.prep = time_seconds([&] { e = embed_dataset(fit_feature_model(concat_points(ds), c), ds); });
                t.detect = time_seconds([&] {
                  const PointMatrix pi = e.as_points();
                  DetectConfig c2 = c;
                  c2.scheme = c.detector == DetectorKind::idk2 ? SchemeKind::isolation : SchemeKind::nystrom;
                  c2.psi = *c.psi2;
                  c2.t = *c.t2;
                  c2.components = *c.components2;
                  c2.sigma = *c.sigma2;
                  const FeatureModel level2 = fit_feature_model(pi, c2);
                  const auto s = idk_point_scores(level2, pi);
                  (void)s;
                });
                return t;
              }};
    }
    const Measure m = measure_from_string(name);
    return {name, [m](const LabeledDataset& ds) {
              PhaseTiming t;
              DistanceMatrix d;
              t.prep = time_seconds([&] { d = pairwise_matrix(ds, m); });
              t.detect = time_seconds([&] { (void)lof_scores(d, std::min<std::size_t>(10, ds.size() - 1)); });
              return t;
            }};
  }

  int run(std::ostream& sout) const {
    if (!std::is_sorted(sizes.begin(), sizes.end())) throw ConfigError("--sizes must be ascending");
    std::vector<BenchMethod> ms;
    for (const auto& name : methods) ms.push_back(method(name));
    const std::uint64_t seed = common.seed;
    const EvalReport report = scaleup_bench(
        [seed](std::size_t n) { return normalize(gen_cross_style(n, seed)); }, sizes, ms, repeats);
    with_output(out, sout, [&](std::ostream& o) {
      o << "method,n,prep,detect\n";
      for (const auto& r : report.rows) o << r.method << ',' << r.n << ',' << format_double(r.prep) << ',' << format_double(r.detect) << '\n';
    });
    for (const auto& [name, ratio] : report.ratios) {
      sout << "ratio " << name << " prep=" << format_double(ratio.first) << " detect=" << format_double(ratio.second) << '\n';
    }
    return kExitOk;
  }
};

// Adds the keys of a JSON config file as flags not already given on the command line.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config " + path + " must be a JSON object");

  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  std::vector<std::string> merged = args;
  for (const auto& [key, value] : j.items()) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (flag == "--config" || given(flag)) continue;
    if (key == "normalize" && value.is_boolean() && given("--no-normalize")) continue;
    std::string text;
    if (value.is_boolean()) {
      text = value.get<bool>() ? "true" : "false";
    } else if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_number()) {
      text = value.dump();
    } else if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) text += ',';
        text += value[i].is_string() ? value[i].get<std::string>() : value[i].dump();
      }
    } else {
      throw ConfigError("config key '" + key + "' has an unsupported value");
    }
    merged.push_back(flag + "=" + text);
  }
  return merged;
}

int run_impl(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"trajkit: trajectory mining with distributional kernels"};
  app.require_subcommand(1);

  GenCommand gen;
  EmbedCommand embed;
  DetectCommand det;
  SubtrajCommand sub;
  MineCommand mine;
  EvalCommand ev;
  BenchCommand bench;

  struct Entry {
    CLI::App* app;
    Common* common;
    std::function<int(std::ostream&)> run;
  };
  std::vector<Entry> entries;
  auto reg = [&](const char* name, const char* desc, auto& cmd) {
    CLI::App* s = app.add_subcommand(name, desc);
    cmd.add(s);
    entries.push_back({s, &cmd.common, [&cmd](std::ostream& o) { return cmd.run(o); }});
  };
  reg("gen", "Generate a synthetic dataset", gen);
  reg("embed", "Embed every trajectory as a kernel mean map", embed);
  reg("detect", "Rank trajectories by anomalousness", det);
  reg("subtraj", "Find anomalous sub-trajectories of a query", sub);
  reg("mine", "Mine frequent sub-trajectory patterns per cluster", mine);
  reg("eval", "ROC-AUC of a ranking against labels", ev);
  reg("bench", "Scaleup timings on cross-style data", bench);

  const std::uint64_t seed = default_seed();
  for (auto& e : entries) e.common->seed = seed;

  std::vector<std::string> args = merge_config(raw_args);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const auto& e : entries) {
      if (e.app->parsed()) target = e.app;
    }
    out << target->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const CLI::App* failing = &app;
    for (const auto& en : entries) {
      if (en.app->parsed()) failing = en.app;
    }
    err << failing->help();
    return kExitUsage;
  }

  for (auto& e : entries) {
    if (!e.app->parsed()) continue;
    set_workers(e.common->workers);
    return e.run(out);
  }
  return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_impl(args, out, err);
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace trajkit
