// SPDX-License-Identifier: Apache-2.0

#include "spec2cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spec2cli/config.hpp"

namespace spec2::cli {
namespace {

using nlohmann::json;

ComplexMatrix matrix_from_json(const json& j, std::size_t d, const std::string& name) {
  if (!j.is_array() || j.size() != d * d) {
    throw ConfigError("matrices: " + name + " needs " + std::to_string(d * d) + " [re, im] entries");
  }
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix x(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const json& e = j[static_cast<std::size_t>(i * n + k)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ConfigError("matrices: " + name + " entries must be [re, im] pairs");
      }
      x(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return x;
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

std::string matrices_to_json(const MatricesFile& file) {
  // Written by hand so that each matrix row sits on one line; still plain JSON.
  auto pair = [](Complex v) { return "[" + json(v.real()).dump() + ", " + json(v.imag()).dump() + "]"; };
  auto matrix = [&](const ComplexMatrix& x, const std::string& indent = "  ") {
    std::string out = "[";
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      out += "\n  " + indent;
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        out += pair(x(i, j));
        if (i + 1 < x.rows() || j + 1 < x.cols()) out += j + 1 < x.cols() ? ", " : ",";
      }
    }
    return out + "\n" + indent + "]";
  };
  const auto d = file.matrices.dim();
  std::ostringstream out;
  out << "{\n";
  out << "  \"format\": \"spec2-matrices\",\n";
  out << "  \"version\": " << kMatricesVersion << ",\n";
  out << "  \"model\": " << json(file.model).dump() << ",\n";
  out << "  \"label\": " << json(file.label).dump() << ",\n";
  out << "  \"dims\": [" << d << ", " << d << "],\n";
  out << "  \"M\": " << matrix(file.matrices.m) << ",\n";
  out << "  \"N\": " << matrix(file.matrices.n) << ",\n";
  out << "  \"B\": " << matrix(file.matrices.b);
  if (file.shifted) {
    out << ",\n  \"shifted\": {\n    \"alpha\": " << json(*file.shifted->alpha).dump() << ",\n";
    out << "    \"N\": " << matrix(file.shifted->n, "    ") << ",\n";
    out << "    \"B\": " << matrix(file.shifted->b, "    ") << "\n  }";
  }
  out << "\n}\n";
  return out.str();
}

MatricesFile matrices_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("matrices file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "spec2-matrices") throw ConfigError("not a spec2-matrices file");
  if (j.value("version", 0) != kMatricesVersion) throw ConfigError("unsupported spec2-matrices version");
  const json& dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 2 || dims[0] != dims[1] || !dims[0].is_number_unsigned()) {
    throw ConfigError("matrices: dims must be [d, d]");
  }
  const auto d = dims[0].get<std::size_t>();
  MatricesFile f;
  f.model = j.value("model", "");
  f.label = j.value("label", "");
  f.matrices.m = matrix_from_json(j.at("M"), d, "M");
  f.matrices.n = matrix_from_json(j.at("N"), d, "N");
  f.matrices.b = matrix_from_json(j.at("B"), d, "B");
  if (j.contains("shifted")) {
    const json& s = j["shifted"];
    GalerkinMatrices g;
    g.m = f.matrices.m;
    g.n = matrix_from_json(s.at("N"), d, "shifted.N");
    g.b = matrix_from_json(s.at("B"), d, "shifted.B");
    g.alpha = s.at("alpha").get<double>();
    f.shifted = g;
  }
  return f;
}

void write_matrices(const std::filesystem::path& path, const MatricesFile& file) {
  write_text(path, matrices_to_json(file));
}

MatricesFile read_matrices(const std::filesystem::path& path) { return matrices_from_json(read_text(path)); }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::string schema, int version, std::vector<std::string> columns)
    : schema_(std::move(schema)), version_(version), columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) throw std::logic_error("csv row width does not match the header");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  out << "# schema=" << schema_ << "/" << version_ << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i]);
    out << "\n";
  }
  return out.str();
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

std::size_t ParsedCsv::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw ConfigError("csv has no column '" + name + "'");
}

ParsedCsv parse_csv(const std::string& text) {
  ParsedCsv out;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# schema=", 0) == 0) {
      const std::string tag = line.substr(9);
      const auto slash = tag.rfind('/');
      if (slash == std::string::npos) throw ConfigError("csv schema line needs name/version");
      out.schema = tag.substr(0, slash);
      out.version = std::stoi(tag.substr(slash + 1));
      continue;
    }
    if (line[0] == '#') continue;
    if (!header) {
      out.columns = split_csv_line(line);
      header = true;
    } else {
      out.rows.push_back(split_csv_line(line));
    }
  }
  return out;
}

ParsedCsv read_csv(const std::filesystem::path& path) { return parse_csv(read_text(path)); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("failed writing " + path.string());
}

}  // namespace spec2::cli
