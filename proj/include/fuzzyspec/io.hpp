#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fuzzyspec {

inline constexpr const char* kSchemaVersion = "fuzzyspec/1";

/// Shortest round-trippable decimal: 17 significant digits.
std::string format_real(double v);

/// FNV-1a over the raw bytes, hex-encoded.
std::string fnv1a_hex(const std::string& bytes);

/// One CSV table; rows are written with format_real, '.' decimal, commas.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Writes `# schema=... config_hash=... seed=...` followed by header + rows.
void write_csv(const std::string& path, const CsvTable& table,
               const std::string& config_hash, std::uint64_t seed);

void write_text(const std::string& path, const std::string& text);

}  // namespace fuzzyspec
