#include "mdc/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "mdc/error.hpp"

namespace mdc::io {

namespace {

[[noreturn]] void io_fail(const std::filesystem::path& path, const std::string& what) {
  fail(ErrorCode::io, path.string() + ": " + what);
}

double parse_double(std::string_view field, const std::filesystem::path& path,
                    int line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    io_fail(path, "bad real on line " + std::to_string(line) + ": '" +
                       std::string(field) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

MatrixXd read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) io_fail(path, "cannot open");
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  int dim = -1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    std::vector<double> row;
    size_t start = 0;
    while (true) {
      const size_t comma = view.find(',', start);
      const std::string_view field =
          trim(view.substr(start, comma == std::string_view::npos
                                      ? std::string_view::npos
                                      : comma - start));
      row.push_back(parse_double(field, path, lineno));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (dim < 0) dim = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != dim)
      io_fail(path, "row " + std::to_string(lineno) + " has " +
                        std::to_string(row.size()) + " fields, expected " +
                        std::to_string(dim));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) io_fail(path, "no data rows");
  MatrixXd pts(rows.size(), dim);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < dim; ++j) pts(static_cast<int>(i), j) = rows[i][j];
  return pts;
}

void write_points_csv(const std::filesystem::path& path, const MatrixXd& pts) {
  std::string out;
  out.reserve(static_cast<size_t>(pts.rows()) * pts.cols() * 12);
  for (int i = 0; i < pts.rows(); ++i) {
    for (int j = 0; j < pts.cols(); ++j) {
      if (j) out.push_back(',');
      out += format_double(pts(i, j));
    }
    out.push_back('\n');
  }
  atomic_write(path, out);
}

VectorXi read_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) io_fail(path, "cannot open");
  std::vector<int> vals;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    int v = 0;
    auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), v);
    if (ec != std::errc{} || ptr != view.data() + view.size())
      io_fail(path, "bad integer on line " + std::to_string(lineno));
    vals.push_back(v);
  }
  if (vals.empty()) io_fail(path, "no labels");
  VectorXi labels(vals.size());
  for (size_t i = 0; i < vals.size(); ++i)
    labels[static_cast<int>(i)] = vals[i];
  return labels;
}

void write_labels_csv(const std::filesystem::path& path, const VectorXi& labels) {
  std::string out;
  out.reserve(static_cast<size_t>(labels.size()) * 4);
  for (int i = 0; i < labels.size(); ++i) {
    out += std::to_string(labels[i]);
    out.push_back('\n');
  }
  atomic_write(path, out);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path dir = path.parent_path();
  if (dir.empty()) dir = ".";
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) io_fail(tmp, "cannot open for write");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) io_fail(tmp, "write failed");
  }
  fs::rename(tmp, path, ec);
  if (ec) io_fail(path, "rename failed: " + ec.message());
}

}  // namespace mdc::io
