#include "fbn/mmio.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fbn {

namespace {

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::variant<SparseMatrix, Vector> load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");

  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) fail(path, 1, "empty file");
  ++lineno;

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") fail(path, lineno, "missing %%MatrixMarket banner");
  object = lowercase(object);
  format = lowercase(format);
  field = lowercase(field);
  symmetry = lowercase(symmetry);
  if (object != "matrix") fail(path, lineno, "unsupported object '" + object + "'");
  if (format != "coordinate" && format != "array")
    fail(path, lineno, "unsupported format '" + format + "'");
  if (field == "complex" || field == "pattern")
    fail(path, lineno, "unsupported field '" + field + "'");
  if (field != "real" && field != "integer" && field != "double")
    fail(path, lineno, "unsupported field '" + field + "'");
  bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general")
    fail(path, lineno, "unsupported symmetry '" + symmetry + "'");

  // skip comments and blank lines up to the size line
  auto next_content_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      std::size_t pos = out.find_first_not_of(" \t\r");
      if (pos == std::string::npos) continue;
      if (out[pos] == '%') continue;
      return true;
    }
    return false;
  };

  if (!next_content_line(line)) fail(path, lineno, "missing size line");
  std::istringstream size_line(line);

  if (format == "coordinate") {
    long rows = 0, cols = 0, entries = 0;
    if (!(size_line >> rows >> cols >> entries)) fail(path, lineno, "malformed size line");
    if (rows < 0 || cols < 0 || entries < 0) fail(path, lineno, "negative size");
    SparseMatrix m(static_cast<int>(rows), static_cast<int>(cols));
    for (long k = 0; k < entries; ++k) {
      if (!next_content_line(line)) fail(path, lineno, "unexpected end of file");
      std::istringstream entry(line);
      long i = 0, j = 0;
      double v = 0.0;
      if (!(entry >> i >> j >> v)) fail(path, lineno, "malformed entry");
      if (i < 1 || i > rows || j < 1 || j > cols) fail(path, lineno, "index out of range");
      m.add(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
      if (symmetric && i != j) m.add(static_cast<int>(j - 1), static_cast<int>(i - 1), v);
    }
    m.validate();
    return m;
  }

  // array format, column-major body
  long rows = 0, cols = 0;
  if (!(size_line >> rows >> cols)) fail(path, lineno, "malformed size line");
  if (rows < 0 || cols < 1) fail(path, lineno, "bad array size");
  if (symmetric) fail(path, lineno, "symmetric array format not supported");
  std::vector<double> body;
  body.reserve(static_cast<std::size_t>(rows * cols));
  for (long k = 0; k < rows * cols; ++k) {
    if (!next_content_line(line)) fail(path, lineno, "unexpected end of file");
    std::istringstream entry(line);
    double v = 0.0;
    if (!(entry >> v)) fail(path, lineno, "malformed entry");
    body.push_back(v);
  }
  if (cols == 1) return Vector(body);
  SparseMatrix m(static_cast<int>(rows), static_cast<int>(cols));
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i)
      m.add(static_cast<int>(i), static_cast<int>(j), body[static_cast<std::size_t>(j * rows + i)]);
  return m;
}

void save_matrix_market(const std::string& path, const SparseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows << " " << m.cols << " " << m.nnz() << "\n";
  out.precision(17);
  for (std::size_t k = 0; k < m.nnz(); ++k)
    out << m.row_idx[k] + 1 << " " << m.col_idx[k] + 1 << " " << m.values[k] << "\n";
  if (!out) throw std::runtime_error(path + ": write failed");
}

void save_matrix_market(const std::string& path, const Vector& v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  out.precision(17);
  for (double e : v) out << e << "\n";
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace fbn
