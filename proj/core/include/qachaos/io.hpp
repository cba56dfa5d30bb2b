#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "qachaos/linalg.hpp"

namespace qachaos {

// Shortest round-trip decimal form.
std::string format_number(double value);

/// Header-first CSV file; numbers are written in shortest round-trip form so
/// identical inputs give byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

// "QAMX" magic, uint32 version 1, uint64 rows, uint64 cols, then complex
// doubles in column-major order, all little-endian.
void write_matrix_binary(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_binary(const std::filesystem::path& path);

}  // namespace qachaos
