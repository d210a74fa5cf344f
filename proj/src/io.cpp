#include "fuzzyspec/io.hpp"

#include <cstdio>
#include <fstream>

#include "fuzzyspec/errors.hpp"

namespace fuzzyspec {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table,
               const std::string& config_hash, std::uint64_t seed) {
  std::string out = "# schema=" + std::string(kSchemaVersion) +
                    " config_hash=" + config_hash +
                    " seed=" + std::to_string(seed) + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_real(row[c]);
    }
    out += '\n';
  }
  write_text(path, out);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw numerical_error("cannot open output file: " + path);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw numerical_error("short write: " + path);
}

}  // namespace fuzzyspec
