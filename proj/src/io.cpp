#include "sparsejl/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sparsejl::io {

std::string format_double(double v) {
  // Shortest decimal form that parses back to the same bits.
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {

DataFormat detect(const std::string& path, DataFormat format) {
  if (format != DataFormat::Auto) return format;
  const size_t dotpos = path.rfind('.');
  if (dotpos != std::string::npos) {
    std::string ext = path.substr(dotpos + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == "csv") return DataFormat::DenseCsv;
  }
  return DataFormat::SparseText;
}

Dataset load_sparse_text(const std::string& path, bool one_based, uint32_t dim_hint) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open for reading: " + path);

  Dataset X;
  bool any_label = false;
  uint32_t max_idx_plus1 = 0;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    SparseVector v;
    std::string label;
    bool first = true;
    while (ls >> tok) {
      const size_t colon = tok.find(':');
      if (colon == std::string::npos) {
        if (!first)
          fail(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": stray token '" + tok + "'");
        label = tok;
        any_label = true;
        first = false;
        continue;
      }
      first = false;
      uint64_t idx = 0;
      double value = 0.0;
      try {
        idx = std::stoull(tok.substr(0, colon));
        value = std::stod(tok.substr(colon + 1));
      } catch (const std::exception&) {
        fail(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": malformed pair '" + tok + "'");
      }
      if (one_based) {
        if (idx == 0)
          fail(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": index 0 in one-based data");
        --idx;
      }
      if (dim_hint > 0 && idx >= dim_hint)
        fail(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": index " +
                                std::to_string(idx) + " out of range for dim " +
                                std::to_string(dim_hint));
      if (value != 0.0) v.push(static_cast<uint32_t>(idx), value);
      max_idx_plus1 = std::max<uint32_t>(max_idx_plus1, static_cast<uint32_t>(idx) + 1);
    }
    if (first) continue;  // blank line
    // Pairs may arrive unordered in foreign files.
    std::vector<size_t> order(v.nnz());
    for (size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v.idx[a] < v.idx[b]; });
    SparseVector sorted;
    for (size_t k : order) {
      if (!sorted.idx.empty() && sorted.idx.back() == v.idx[k])
        fail(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": duplicate index " +
                                std::to_string(v.idx[k]));
      sorted.push(v.idx[k], v.val[k]);
    }
    X.points.push_back(std::move(sorted));
    X.labels.push_back(label);
  }
  if (!any_label) X.labels.clear();
  if (X.labels.size() != X.points.size() && !X.labels.empty())
    X.labels.resize(X.points.size());

  X.dim = dim_hint > 0 ? dim_hint : std::max<uint32_t>(max_idx_plus1, 1);
  for (SparseVector& p : X.points) p.dim = X.dim;
  validate(X);
  return X;
}

Dataset load_dense_rows(const std::string& path, uint32_t dim_hint) {
  const DenseMatrix M = load_dense_csv(path);
  if (dim_hint > 0 && M.cols != dim_hint)
    fail(ErrorCode::Io, path + ": row width " + std::to_string(M.cols) +
                            " does not match expected dim " + std::to_string(dim_hint));
  Dataset X;
  X.dim = static_cast<uint32_t>(M.cols);
  for (size_t r = 0; r < M.rows; ++r) {
    SparseVector v;
    v.dim = X.dim;
    for (size_t c = 0; c < M.cols; ++c)
      if (M.at(r, c) != 0.0) v.push(static_cast<uint32_t>(c), M.at(r, c));
    X.add(std::move(v));
  }
  return X;
}

}  // namespace

Dataset load_dataset(const std::string& path, DataFormat format, bool one_based,
                     uint32_t dim_hint) {
  switch (detect(path, format)) {
    case DataFormat::DenseCsv:
      return load_dense_rows(path, dim_hint);
    default:
      return load_sparse_text(path, one_based, dim_hint);
  }
}

void save_dataset(const Dataset& X, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open for writing: " + path);

  bool need_labels = !X.labels.empty();
  for (const SparseVector& p : X.points)
    if (p.nnz() == 0) need_labels = true;  // the zero vector needs a label token

  for (size_t i = 0; i < X.points.size(); ++i) {
    if (need_labels) {
      if (i < X.labels.size() && !X.labels[i].empty())
        out << X.labels[i];
      else
        out << 'p' << i;
      if (X.points[i].nnz() > 0) out << ' ';
    }
    const SparseVector& p = X.points[i];
    for (size_t k = 0; k < p.nnz(); ++k) {
      if (k > 0) out << ' ';
      out << p.idx[k] << ':' << format_double(p.val[k]);
    }
    out << '\n';
  }
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

DenseMatrix load_dense_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open for reading: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": malformed number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::Io, path + ": empty CSV");

  DenseMatrix M(rows.size(), rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r)
    std::copy(rows[r].begin(), rows[r].end(), M.row(r));
  return M;
}

void save_dense_csv(const DenseMatrix& M, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open for writing: " + path);
  for (size_t r = 0; r < M.rows; ++r) {
    for (size_t c = 0; c < M.cols; ++c) {
      if (c > 0) out << ',';
      out << format_double(M.at(r, c));
    }
    out << '\n';
  }
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

}  // namespace sparsejl::io
