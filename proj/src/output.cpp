#include "carpet/output.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "carpet/errors.hpp"

namespace carpet {

std::string format_number(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

std::string csv_columns(const std::vector<std::string>& header, const std::vector<Vector>& columns) {
  if (header.size() != columns.size()) throw Error(ErrorKind::Domain, "csv_columns: header/column count mismatch");
  const Index rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw Error(ErrorKind::Domain, "csv_columns: ragged columns");
  }
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out += ',';
    out += header[j];
  }
  out += '\n';
  for (Index i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out += ',';
      out += format_number(columns[j](i));
    }
    out += '\n';
  }
  return out;
}

std::string csv_spacetime(const Vector& nodes, const std::vector<double>& times, const std::vector<Vector>& rows) {
  if (times.size() != rows.size()) throw Error(ErrorKind::Domain, "csv_spacetime: time/row count mismatch");
  std::string out = "t";
  for (Index i = 0; i < nodes.size(); ++i) {
    out += ',';
    out += format_number(nodes(i));
  }
  out += '\n';
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != nodes.size()) throw Error(ErrorKind::Domain, "csv_spacetime: row length mismatch");
    out += format_number(times[k]);
    for (Index i = 0; i < rows[k].size(); ++i) {
      out += ',';
      out += format_number(rows[k](i));
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Domain, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::Domain, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Domain, "sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Mismatch, "missing file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace carpet
