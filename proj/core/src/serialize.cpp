#include "inexact/serialize.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "inexact/errors.hpp"
#include "inexact/rng.hpp"
#include "inexact/trace_io.hpp"

namespace inexact {

std::string encode_matrix(const Matrix& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.size()) * 8);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto bits = std::bit_cast<std::uint64_t>(m(i, j));
      for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
    }
  return out;
}

Matrix decode_matrix(std::string_view bytes, Eigen::Index rows, Eigen::Index cols) {
  require(rows >= 0 && cols >= 0 && bytes.size() == static_cast<std::size_t>(rows * cols) * 8,
          ErrorCode::kInvalidArgument, "blob size does not match its shape");
  Matrix m(rows, cols);
  std::size_t pos = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= std::uint64_t(static_cast<unsigned char>(bytes[pos++])) << (8 * b);
      m(i, j) = std::bit_cast<double>(bits);
    }
  return m;
}

nlohmann::json instance_manifest(const ProblemInstance& inst) {
  nlohmann::json j;
  j["name"] = inst.name;
  j["seed"] = inst.seed;
  j["params"] = nlohmann::json::object();
  for (const auto& [k, v] : inst.params) j["params"][k] = v;
  j["generator"] = {{"name", "inexact"}, {"version", Rng::kVersion}, {"rng", "mt19937_64/splitmix64-streams"}};
  j["blobs"] = nlohmann::json::array();
  for (const auto& [name, m] : inst.data)
    j["blobs"].push_back({{"name", name},
                          {"file", name + ".bin"},
                          {"rows", m.rows()},
                          {"cols", m.cols()},
                          {"dtype", "float64-le"},
                          {"order", "row-major"}});
  if (inst.reference.f_star) j["reference"]["f_star"] = *inst.reference.f_star;
  if (inst.reference.divergence_bound) j["reference"]["divergence_bound"] = *inst.reference.divergence_bound;
  return j;
}

void write_instance(const ProblemInstance& inst, const std::filesystem::path& dir) {
  write_text_file(dir / "manifest.json", instance_manifest(inst).dump(2) + "\n");
  for (const auto& [name, m] : inst.data) write_text_file(dir / (name + ".bin"), encode_matrix(m));
}

Matrix read_blob(const std::filesystem::path& file, Eigen::Index rows, Eigen::Index cols) {
  std::ifstream in(file, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kInvalidArgument, "cannot read " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_matrix(buf.str(), rows, cols);
}

std::string serialize_instance(const ProblemInstance& inst) {
  std::string out = instance_manifest(inst).dump();
  for (const auto& [name, m] : inst.data) out += encode_matrix(m);
  return out;
}

}  // namespace inexact
