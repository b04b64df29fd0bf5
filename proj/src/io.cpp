#include "trajkit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "trajkit/error.hpp"

namespace trajkit {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& field, std::size_t line) {
  const std::string f = trim(field);
  double v = 0.0;
  const char* first = f.data();
  const char* last = f.data() + f.size();
  if (!f.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (f.empty() || ec != std::errc() || ptr != last) {
    throw FormatError("cannot parse number '" + f + "'", line);
  }
  return v;
}

long parse_int(const std::string& field, std::size_t line) {
  const std::string f = trim(field);
  long v = 0;
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
    throw FormatError("cannot parse integer '" + f + "'", line);
  }
  return v;
}

Label parse_label(const std::string& field, std::size_t line) {
  const long v = parse_int(field, line);
  if (v != 0 && v != 1) throw FormatError("label must be 0 or 1", line);
  return v ? Label::anomalous : Label::normal;
}

struct PendingPoint {
  std::vector<double> coords;
  double time = 0.0;
  std::size_t line = 0;
};

struct Pending {
  std::vector<PendingPoint> points;
};

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

FileFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".json" ? FileFormat::json : FileFormat::csv;
}

LabeledDataset read_csv(std::istream& in, const IngestOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (trim(line).empty() || line[0] == '#') continue;
    header = split_csv_line(line);
    break;
  }
  if (header.empty()) throw FormatError("missing header row", line_no);

  auto column = [&](const std::string& name) -> long {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<long>(it - header.begin());
  };
  const long id_col = column(options.id_column);
  if (id_col < 0) throw FormatError("header lacks id column '" + options.id_column + "'", line_no);
  const long time_col = options.time_column.empty() ? -1 : column(options.time_column);
  const long label_col = options.label_column.empty() ? -1 : column(options.label_column);
  const long cluster_col = options.cluster_column.empty() ? -1 : column(options.cluster_column);
  if (options.coord_columns.empty()) throw ConfigError("at least one coordinate column is required");
  std::vector<long> coord_cols;
  for (const auto& name : options.coord_columns) {
    const long c = column(name);
    if (c < 0) throw FormatError("header lacks coordinate column '" + name + "'", line_no);
    coord_cols.push_back(c);
  }

  std::vector<std::string> order;
  std::unordered_map<std::string, Pending> groups;
  std::map<std::string, Label> labels;
  std::map<std::string, int> clusters;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line[0] == '#') continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw FormatError("expected " + std::to_string(header.size()) + " fields, found " +
                            std::to_string(fields.size()),
                        line_no);
    }
    const std::string& id = fields[id_col];
    if (id.empty()) throw FormatError("empty trajectory id", line_no);
    PendingPoint p;
    p.line = line_no;
    for (long c : coord_cols) {
      const double v = parse_double(fields[c], line_no);
      if (!std::isfinite(v)) {
        throw ValidationError("line " + std::to_string(line_no) + ": non-finite coordinate");
      }
      p.coords.push_back(v);
    }
    if (time_col >= 0) {
      p.time = parse_double(fields[time_col], line_no);
      if (!std::isfinite(p.time)) {
        throw ValidationError("line " + std::to_string(line_no) + ": non-finite timestamp");
      }
    }
    auto [it, inserted] = groups.try_emplace(id);
    if (inserted) order.push_back(id);
    it->second.points.push_back(std::move(p));
    if (label_col >= 0) {
      const Label l = parse_label(fields[label_col], line_no);
      auto [lit, fresh] = labels.emplace(id, l);
      if (!fresh && lit->second != l) throw FormatError("conflicting labels for '" + id + "'", line_no);
    }
    if (cluster_col >= 0) {
      const int c = static_cast<int>(parse_int(fields[cluster_col], line_no));
      auto [cit, fresh] = clusters.emplace(id, c);
      if (!fresh && cit->second != c) throw FormatError("conflicting clusters for '" + id + "'", line_no);
    }
  }

  LabeledDataset ds;
  const std::size_t d = coord_cols.size();
  for (const auto& id : order) {
    auto& pts = groups[id].points;
    if (time_col >= 0) {
      std::stable_sort(pts.begin(), pts.end(),
                       [](const PendingPoint& a, const PendingPoint& b) { return a.time < b.time; });
    }
    std::vector<double> coords;
    std::vector<double> times;
    coords.reserve(pts.size() * d);
    for (const auto& p : pts) {
      coords.insert(coords.end(), p.coords.begin(), p.coords.end());
      if (time_col >= 0) times.push_back(p.time);
    }
    ds.trajectories.emplace_back(id, d, std::move(coords), std::move(times));
  }
  if (label_col >= 0) ds.labels = std::move(labels);
  if (cluster_col >= 0) ds.clusters = std::move(clusters);
  ds.validate();
  return ds;
}

void write_csv(std::ostream& out, const LabeledDataset& dataset, const IngestOptions& options) {
  const std::size_t d = dataset.dim();
  const bool timed = !dataset.empty() && dataset.trajectories.front().has_time();
  for (const auto& t : dataset.trajectories) {
    if (t.has_time() != timed) throw ValidationError("mixed timed and untimed trajectories");
  }
  std::vector<std::string> coord_names = options.coord_columns;
  for (std::size_t k = coord_names.size(); k < d; ++k) coord_names.push_back("x" + std::to_string(k));

  out << options.id_column;
  if (timed) out << ',' << options.time_column;
  for (std::size_t k = 0; k < d; ++k) out << ',' << coord_names[k];
  if (dataset.labels) out << ',' << options.label_column;
  if (dataset.clusters) out << ',' << options.cluster_column;
  out << '\n';
  for (const auto& t : dataset.trajectories) {
    std::string suffix;
    if (dataset.labels) {
      auto it = dataset.labels->find(t.id());
      suffix += it != dataset.labels->end() && it->second == Label::anomalous ? ",1" : ",0";
    }
    if (dataset.clusters) suffix += "," + std::to_string(dataset.clusters->at(t.id()));
    for (std::size_t i = 0; i < t.size(); ++i) {
      out << t.id();
      if (timed) out << ',' << format_double(t.time(i));
      for (double v : t.point(i)) out << ',' << format_double(v);
      out << suffix << '\n';
    }
  }
}

LabeledDataset read_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(e.what(), 0);
  }
  if (!doc.is_array()) throw FormatError("expected a top-level array of trajectories", 0);
  LabeledDataset ds;
  std::map<std::string, Label> labels;
  std::map<std::string, int> clusters;
  std::size_t index = 0;
  for (const auto& rec : doc) {
    ++index;
    const std::string where = "record " + std::to_string(index);
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("points") || !rec["points"].is_array()) {
      throw FormatError(where + ": expected {id, points}", 0);
    }
    const std::string id = rec["id"].is_string() ? rec["id"].get<std::string>() : rec["id"].dump();
    std::vector<Point> points;
    for (const auto& p : rec["points"]) {
      if (!p.is_array() || p.size() < 2) throw FormatError(where + ": point must be [t, x, ...]", 0);
      Point pt;
      if (!p[0].is_null()) {
        if (!p[0].is_number()) throw FormatError(where + ": timestamp must be a number or null", 0);
        pt.time = p[0].get<double>();
      }
      for (std::size_t k = 1; k < p.size(); ++k) {
        if (!p[k].is_number()) throw ValidationError(where + ": non-numeric or non-finite coordinate");
        pt.coords.push_back(p[k].get<double>());
      }
      points.push_back(std::move(pt));
    }
    Trajectory t = Trajectory::from_points(id, points);
    if (t.has_time()) {
      std::vector<std::size_t> idx(t.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return t.time(a) < t.time(b); });
      std::vector<double> coords;
      std::vector<double> times;
      for (auto i : idx) {
        auto pt = t.point(i);
        coords.insert(coords.end(), pt.begin(), pt.end());
        times.push_back(t.time(i));
      }
      t = Trajectory(id, t.dim(), std::move(coords), std::move(times));
    }
    if (rec.contains("label")) labels[id] = rec["label"].get<int>() ? Label::anomalous : Label::normal;
    if (rec.contains("cluster")) clusters[id] = rec["cluster"].get<int>();
    ds.trajectories.push_back(std::move(t));
  }
  if (!labels.empty()) ds.labels = std::move(labels);
  if (!clusters.empty()) ds.clusters = std::move(clusters);
  ds.validate();
  return ds;
}

void write_json(std::ostream& out, const LabeledDataset& dataset) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& t : dataset.trajectories) {
    nlohmann::json rec;
    rec["id"] = t.id();
    nlohmann::json pts = nlohmann::json::array();
    for (std::size_t i = 0; i < t.size(); ++i) {
      nlohmann::json p = nlohmann::json::array();
      p.push_back(t.has_time() ? nlohmann::json(t.time(i)) : nlohmann::json(nullptr));
      for (double v : t.point(i)) p.push_back(v);
      pts.push_back(std::move(p));
    }
    rec["points"] = std::move(pts);
    if (dataset.labels) {
      auto it = dataset.labels->find(t.id());
      rec["label"] = it != dataset.labels->end() && it->second == Label::anomalous ? 1 : 0;
    }
    if (dataset.clusters) rec["cluster"] = dataset.clusters->at(t.id());
    doc.push_back(std::move(rec));
  }
  out << doc.dump() << '\n';
}

LabeledDataset load_dataset(const std::filesystem::path& path, FileFormat format,
                            const IngestOptions& options) {
  auto in = open_in(path);
  return format == FileFormat::json ? read_json(in) : read_csv(in, options);
}

void save_dataset(const std::filesystem::path& path, const LabeledDataset& dataset, FileFormat format,
                  const IngestOptions& options) {
  auto out = open_out(path);
  if (format == FileFormat::json) {
    write_json(out, dataset);
  } else {
    write_csv(out, dataset, options);
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

namespace {

template <typename Value, typename Parse>
std::map<std::string, Value> read_two_column(std::istream& in, Parse parse) {
  std::map<std::string, Value> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line[0] == '#') continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw FormatError("expected 2 fields", line_no);
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    if (!out.emplace(fields[0], parse(fields[1], line_no)).second) {
      throw FormatError("duplicate id '" + fields[0] + "'", line_no);
    }
  }
  if (!header_seen) throw FormatError("missing header row", line_no);
  return out;
}

}  // namespace

std::map<std::string, Label> read_labels(std::istream& in) {
  return read_two_column<Label>(in, parse_label);
}

std::map<std::string, int> read_clusters(std::istream& in) {
  return read_two_column<int>(in, [](const std::string& f, std::size_t line) {
    return static_cast<int>(parse_int(f, line));
  });
}

std::map<std::string, Label> load_labels(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_labels(in);
}

std::map<std::string, int> load_clusters(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_clusters(in);
}

void write_labels(std::ostream& out, const LabeledDataset& dataset) {
  if (!dataset.labels) throw ValidationError("dataset has no labels");
  out << "id,label\n";
  for (const auto& t : dataset.trajectories) {
    auto it = dataset.labels->find(t.id());
    out << t.id() << ',' << (it != dataset.labels->end() && it->second == Label::anomalous ? 1 : 0) << '\n';
  }
}

void write_clusters(std::ostream& out, const LabeledDataset& dataset) {
  if (!dataset.clusters) throw ValidationError("dataset has no clusters");
  out << "id,cluster\n";
  for (const auto& t : dataset.trajectories) out << t.id() << ',' << dataset.clusters->at(t.id()) << '\n';
}

}  // namespace trajkit
