#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "trajkit/dataset.hpp"

namespace trajkit {

enum class FileFormat { csv, json };

// Column mapping for CSV ingestion. A time column absent from the header means
// file order defines point order. Label and cluster columns are optional.
struct IngestOptions {
  std::string id_column = "id";
  std::string time_column = "t";
  std::vector<std::string> coord_columns = {"x", "y"};
  std::string label_column = "label";
  std::string cluster_column = "cluster";
};

// Picks the format from the extension (.json, otherwise csv).
FileFormat format_from_path(const std::filesystem::path& path);

LabeledDataset read_csv(std::istream& in, const IngestOptions& options = {});
LabeledDataset read_json(std::istream& in);
void write_csv(std::ostream& out, const LabeledDataset& dataset, const IngestOptions& options = {});
void write_json(std::ostream& out, const LabeledDataset& dataset);

LabeledDataset load_dataset(const std::filesystem::path& path, FileFormat format,
                            const IngestOptions& options = {});
void save_dataset(const std::filesystem::path& path, const LabeledDataset& dataset, FileFormat format,
                  const IngestOptions& options = {});

// Two-column side files: (id, label in {0,1}) and (id, cluster).
std::map<std::string, Label> read_labels(std::istream& in);
std::map<std::string, int> read_clusters(std::istream& in);
std::map<std::string, Label> load_labels(const std::filesystem::path& path);
std::map<std::string, int> load_clusters(const std::filesystem::path& path);
void write_labels(std::ostream& out, const LabeledDataset& dataset);
void write_clusters(std::ostream& out, const LabeledDataset& dataset);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// Splits one CSV record on commas (no quoting support; ids must not contain commas).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace trajkit
