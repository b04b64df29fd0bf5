#include "trajkit/serialization.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "trajkit/error.hpp"
#include "trajkit/io.hpp"

namespace trajkit {

namespace {

using nlohmann::json;

json points_json(const PointMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

PointMatrix points_from_json(const json& rows, std::size_t dim) {
  std::vector<double> data;
  for (const auto& r : rows) {
    if (r.size() != dim) throw FormatError("point row has the wrong dimension", 0);
    for (const auto& v : r) data.push_back(v.get<double>());
  }
  return {dim, std::move(data)};
}

template <class T>
void put(std::ostream& out, T v) {
  static_assert(std::endian::native == std::endian::little);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw IoError("truncated embedding file");
  return v;
}

}  // namespace

void write_model(std::ostream& out, const FeatureModel& model) {
  json j;
  j["format"] = "trajkit-model";
  j["version"] = kModelFormatVersion;
  if (const auto* ik = std::get_if<PartitioningModel>(&model)) {
    j["scheme"] = "isolation";
    j["psi"] = ik->psi();
    j["t"] = ik->t();
    j["seed"] = ik->seed();
    j["dim"] = ik->dim();
    j["rule"] = to_string(ik->rule());
    j["pool"] = points_json(ik->pool());
    j["anchor_index"] = ik->anchor_index();
  } else {
    const auto& g = std::get<NystromModel>(model);
    j["scheme"] = "nystrom";
    j["components"] = g.components();
    j["sigma"] = g.sigma();
    j["seed"] = g.seed();
    j["dim"] = g.dim();
    j["rank"] = g.rank();
    j["landmarks"] = points_json(g.landmarks());
    j["whitening"] = g.whitening();
  }
  out << j.dump() << '\n';
}

FeatureModel read_model(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError(std::string("model is not valid JSON: ") + e.what(), 0);
  }
  try {
    if (j.value("format", "") != "trajkit-model") throw FormatError("not a trajkit model file", 0);
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) throw FormatError("unsupported model version " + std::to_string(version), 0);
    const auto dim = j.at("dim").get<std::size_t>();
    const auto scheme = j.at("scheme").get<std::string>();
    if (scheme == "isolation") {
      IsolationParams p;
      p.psi = j.at("psi").get<std::size_t>();
      p.t = j.at("t").get<std::size_t>();
      p.seed = j.at("seed").get<std::uint64_t>();
      p.rule = cell_rule_from_string(j.at("rule").get<std::string>());
      return PartitioningModel::from_anchors(p, points_from_json(j.at("pool"), dim),
                                             j.at("anchor_index").get<std::vector<std::uint32_t>>());
    }
    if (scheme == "nystrom") {
      NystromParams p;
      p.components = j.at("components").get<std::size_t>();
      p.sigma = j.at("sigma").get<double>();
      p.seed = j.at("seed").get<std::uint64_t>();
      return NystromModel::from_parts(p, points_from_json(j.at("landmarks"), dim),
                                      j.at("whitening").get<std::vector<double>>(), j.at("rank").get<std::size_t>());
    }
    throw FormatError("unknown scheme '" + scheme + "'", 0);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model: ") + e.what(), 0);
  }
}

void save_model(const std::filesystem::path& path, const FeatureModel& model) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_model(out, model);
  if (!out) throw IoError("write failed for " + path.string());
}

FeatureModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_model(in);
}

void write_embeddings_csv(std::ostream& out, const EmbeddedDataset& embedded) {
  out << "id";
  for (std::size_t k = 1; k <= embedded.dim(); ++k) out << ",v_" << k;
  out << '\n';
  for (std::size_t i = 0; i < embedded.size(); ++i) {
    out << embedded.ids[i];
    for (double v : embedded.embeddings[i].values()) out << ',' << format_double(v);
    out << '\n';
  }
}

EmbeddedDataset read_embeddings_csv(std::istream& in, const Scheme& scheme) {
  EmbeddedDataset e;
  e.scheme = scheme;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (!header) {
      if (fields.size() != scheme.dim() + 1) throw FormatError("embedding header does not match the scheme", line_no);
      header = true;
      continue;
    }
    if (fields.size() != scheme.dim() + 1) throw FormatError("wrong number of fields", line_no);
    std::vector<double> v(scheme.dim());
    for (std::size_t k = 0; k < v.size(); ++k) {
      try {
        std::size_t used = 0;
        v[k] = std::stod(fields[k + 1], &used);
        if (used != fields[k + 1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw FormatError("bad number '" + fields[k + 1] + "'", line_no);
      }
    }
    e.ids.push_back(fields[0]);
    e.embeddings.emplace_back(std::move(v), scheme);
  }
  if (!header) throw FormatError("missing header", line_no);
  return e;
}

void write_embeddings_binary(std::ostream& out, const EmbeddedDataset& embedded) {
  out.write("TKEM", 4);
  put<std::uint32_t>(out, 1);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(embedded.scheme.kind));
  put<std::uint64_t>(out, embedded.scheme.size);
  put<std::uint64_t>(out, embedded.scheme.t);
  put<double>(out, embedded.scheme.sigma);
  put<std::uint64_t>(out, embedded.size());
  for (std::size_t i = 0; i < embedded.size(); ++i) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(embedded.ids[i].size()));
    out.write(embedded.ids[i].data(), static_cast<std::streamsize>(embedded.ids[i].size()));
    for (double v : embedded.embeddings[i].values()) put<double>(out, v);
  }
}

EmbeddedDataset read_embeddings_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "TKEM", 4) != 0) throw IoError("not a trajkit embedding file");
  if (get<std::uint32_t>(in) != 1) throw IoError("unsupported embedding file version");
  EmbeddedDataset e;
  const auto kind = get<std::uint32_t>(in);
  if (kind > 1) throw IoError("unknown scheme in embedding file");
  e.scheme.kind = static_cast<SchemeKind>(kind);
  e.scheme.size = get<std::uint64_t>(in);
  e.scheme.t = get<std::uint64_t>(in);
  e.scheme.sigma = get<double>(in);
  const auto n = get<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::string id(get<std::uint32_t>(in), '\0');
    if (!in.read(id.data(), static_cast<std::streamsize>(id.size()))) throw IoError("truncated embedding file");
    std::vector<double> v(e.scheme.dim());
    for (auto& x : v) x = get<double>(in);
    e.ids.push_back(std::move(id));
    e.embeddings.emplace_back(std::move(v), e.scheme);
  }
  return e;
}

void write_distance_matrix(std::ostream& out, const DistanceMatrix& matrix) {
  out << "id";
  for (const auto& id : matrix.ids) out << ',' << id;
  out << '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out << matrix.ids[i];
    for (std::size_t j = 0; j < matrix.size(); ++j) out << ',' << format_double(matrix(i, j));
    out << '\n';
  }
}

}  // namespace trajkit
