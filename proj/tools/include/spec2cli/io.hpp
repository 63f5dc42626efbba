// SPDX-License-Identifier: Apache-2.0
//
// Matrix exchange (JSON) and tabular output (CSV). Formats: docs/formats.md.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spec2/galerkin.hpp"

namespace spec2::cli {

struct MatricesFile {
  std::string model;
  std::string label;
  GalerkinMatrices matrices;                // unshifted M, N, B
  std::optional<GalerkinMatrices> shifted;  // M, N(alpha), B(alpha)
};

inline constexpr int kMatricesVersion = 1;

std::string matrices_to_json(const MatricesFile& file);
MatricesFile matrices_from_json(const std::string& text);

void write_matrices(const std::filesystem::path& path, const MatricesFile& file);
MatricesFile read_matrices(const std::filesystem::path& path);

/// Shortest text that reads back to the same double.
std::string format_double(double x);

/// CSV with a leading "# schema=<name>/<version>" line. Empty cells stand for
/// values that do not apply.
class CsvTable {
 public:
  CsvTable(std::string schema, int version, std::vector<std::string> columns);

  void add_row(std::vector<std::string> cells);
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string schema_;
  int version_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

struct ParsedCsv {
  std::string schema;
  int version = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

ParsedCsv parse_csv(const std::string& text);
ParsedCsv read_csv(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace spec2::cli
