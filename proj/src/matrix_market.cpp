// SPDX-License-Identifier: Apache-2.0

#include "polycg/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>
#include <vector>

namespace polycg {

namespace {

struct HeaderInfo {
  bool symmetric = false;
};

[[noreturn]] void fail(const std::string& name, long line, const std::string& what) {
  throw ParseError(name + ":" + std::to_string(line) + ": " + what);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

HeaderInfo parse_header(const std::string& name, const std::string& line) {
  std::istringstream ss(line);
  std::string banner, object, format, field, symmetry;
  ss >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") fail(name, 1, "missing %%MatrixMarket banner");
  if (lower(object) != "matrix" || lower(format) != "coordinate") {
    fail(name, 1, "only 'matrix coordinate' files are supported");
  }
  if (lower(field) != "real") fail(name, 1, "only 'real' entries are supported");
  const std::string sym = lower(symmetry);
  if (sym == "symmetric") return {true};
  if (sym == "general") return {false};
  fail(name, 1, "unsupported symmetry '" + symmetry + "' (need symmetric or general)");
}

}  // namespace

CsrMatrix load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return load_matrix_market(in, path);
}

CsrMatrix load_matrix_market(std::istream& in, const std::string& name) {
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) fail(name, 1, "empty file");
  ++lineno;
  const HeaderInfo header = parse_header(name, line);

  Index rows = 0, cols = 0;
  long declared_nnz = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> declared_nnz)) fail(name, lineno, "malformed size line");
    break;
  }
  if (rows == 0 && cols == 0) fail(name, lineno, "missing size line");
  if (rows != cols) fail(name, lineno, "matrix must be square, got " + std::to_string(rows) +
                                            "x" + std::to_string(cols));
  const Index n = rows;

  struct Entry {
    Index i, j;
    double v;
    long line;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(declared_nnz));
  long seen = 0;
  double max_abs = 0.0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ss(line);
    Index i = 0, j = 0;
    double v = 0.0;
    if (!(ss >> i >> j >> v)) fail(name, lineno, "malformed entry line");
    if (i < 1 || i > n || j < 1 || j > n) {
      fail(name, lineno, "index (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") out of range for 1-based indices in [1, " + std::to_string(n) +
                             "]");
    }
    if (header.symmetric && j > i) {
      fail(name, lineno, "upper-triangle entry in a symmetric file");
    }
    entries.push_back({i - 1, j - 1, v, lineno});
    max_abs = std::max(max_abs, std::abs(v));
    ++seen;
  }
  if (seen != declared_nnz) {
    fail(name, lineno, "entry count " + std::to_string(seen) + " does not match declared " +
                           std::to_string(declared_nnz));
  }

  const double tol = 1e-12 * max_abs;
  std::vector<std::tuple<Index, Index, double>> triplets;
  triplets.reserve(entries.size() * 2);

  if (header.symmetric) {
    for (const auto& e : entries) {
      triplets.emplace_back(e.i, e.j, e.v);
      if (e.i != e.j) triplets.emplace_back(e.j, e.i, e.v);
    }
  } else {
    // General file with symmetric content: pair every off-diagonal entry
    // with its mirror, preferring the lower-triangle value for storage.
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      const Index la = std::max(a.i, a.j), sa = std::min(a.i, a.j);
      const Index lb = std::max(b.i, b.j), sb = std::min(b.i, b.j);
      return std::tie(la, sa, a.i) < std::tie(lb, sb, b.i);
    });
    std::size_t k = 0;
    while (k < entries.size()) {
      const Entry& e = entries[k];
      if (e.i == e.j) {
        triplets.emplace_back(e.i, e.j, e.v);
        ++k;
        continue;
      }
      const bool has_mirror = k + 1 < entries.size() &&
                              std::min(entries[k + 1].i, entries[k + 1].j) == std::min(e.i, e.j) &&
                              std::max(entries[k + 1].i, entries[k + 1].j) == std::max(e.i, e.j);
      if (!has_mirror) {
        if (std::abs(e.v) > tol) {
          fail(name, e.line, "entry (" + std::to_string(e.i + 1) + ", " +
                                 std::to_string(e.j + 1) + ") has no symmetric counterpart");
        }
        triplets.emplace_back(e.i, e.j, e.v);
        triplets.emplace_back(e.j, e.i, e.v);
        ++k;
        continue;
      }
      const Entry& f = entries[k + 1];
      if (std::abs(e.v - f.v) > tol) {
        fail(name, f.line, "asymmetric pair at (" + std::to_string(e.i + 1) + ", " +
                               std::to_string(e.j + 1) + "): " + std::to_string(e.v) + " vs " +
                               std::to_string(f.v));
      }
      const double v = e.i > e.j ? e.v : f.v;  // lower-triangle value wins
      triplets.emplace_back(e.i, e.j, v);
      triplets.emplace_back(e.j, e.i, v);
      k += 2;
    }
  }

  try {
    return CsrMatrix::from_triplets(n, std::move(triplets), 1e-12);
  } catch (const std::invalid_argument& e) {
    throw ParseError(name + ": " + e.what());
  }
}

void save_matrix_market(const CsrMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  save_matrix_market(m, out);
}

void save_matrix_market(const CsrMatrix& m, std::ostream& out) {
  const Index n = m.size();
  const auto& rp = m.row_ptr();
  const auto& ci = m.col_idx();
  const auto& va = m.values();

  Index nnz_lower = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index k = rp[i]; k < rp[i + 1]; ++k) {
      if (ci[k] <= i) ++nnz_lower;
    }
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << n << " " << n << " " << nnz_lower << "\n";
  char buf[64];
  for (Index i = 0; i < n; ++i) {
    for (Index k = rp[i]; k < rp[i + 1]; ++k) {
      if (ci[k] > i) continue;
      std::snprintf(buf, sizeof(buf), "%.16e", va[k]);
      out << (i + 1) << " " << (ci[k] + 1) << " " << buf << "\n";
    }
  }
}

}  // namespace polycg
