#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "inexact/problems.hpp"

namespace inexact {

// Blob encoding: row-major IEEE-754 binary64, little-endian, no header.
std::string encode_matrix(const Matrix& m);
Matrix decode_matrix(std::string_view bytes, Eigen::Index rows, Eigen::Index cols);

// {"name", "seed", "params", "generator": {"name", "version", "rng"},
//  "blobs": [{"name", "file", "rows", "cols", "dtype", "order"}]}
nlohmann::json instance_manifest(const ProblemInstance& instance);

// Writes manifest.json and one <name>.bin per blob into `dir`.
void write_instance(const ProblemInstance& instance, const std::filesystem::path& dir);
Matrix read_blob(const std::filesystem::path& file, Eigen::Index rows, Eigen::Index cols);

// Manifest text followed by every blob, in manifest order.
std::string serialize_instance(const ProblemInstance& instance);

}  // namespace inexact
