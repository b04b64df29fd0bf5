#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "trajkit/distances.hpp"
#include "trajkit/embedding.hpp"

namespace trajkit {

inline constexpr int kModelFormatVersion = 1;

// Versioned JSON container for a fitted feature map. Doubles are written in
// shortest round-trip form, so a reloaded model embeds bit-identically.
void write_model(std::ostream& out, const FeatureModel& model);
FeatureModel read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const FeatureModel& model);
FeatureModel load_model(const std::filesystem::path& path);

// CSV with header id,v_1..v_D, one row per trajectory.
void write_embeddings_csv(std::ostream& out, const EmbeddedDataset& embedded);
EmbeddedDataset read_embeddings_csv(std::istream& in, const Scheme& scheme);

// Little-endian binary: magic "TKEM", u32 version, scheme (u32 kind, u64 size,
// u64 t, f64 sigma), u64 n, then per row u32 id length, id bytes, D f64 values.
void write_embeddings_binary(std::ostream& out, const EmbeddedDataset& embedded);
EmbeddedDataset read_embeddings_binary(std::istream& in);

// Square CSV: header row "id,<id_1>,...,<id_n>", then one row per id.
void write_distance_matrix(std::ostream& out, const DistanceMatrix& matrix);

}  // namespace trajkit
