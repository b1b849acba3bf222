// SPDX-License-Identifier: Apache-2.0

#include "polycg/linop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

namespace polycg {

namespace {

std::atomic<int> g_apply_threads{1};

Index checked_pow(Index nx, int d) {
  Index n = 1;
  for (int i = 0; i < d; ++i) {
    if (nx != 0 && n > std::numeric_limits<Index>::max() / nx) {
      throw std::invalid_argument("fd_laplacian: nx^" + std::to_string(d) +
                                  " overflows the addressable size");
    }
    n *= nx;
  }
  return n;
}

}  // namespace

void set_apply_threads(int threads) {
  g_apply_threads.store(threads < 1 ? 1 : threads, std::memory_order_relaxed);
}

int apply_threads() { return g_apply_threads.load(std::memory_order_relaxed); }

LinearOperator::LinearOperator(Index n) : n_(n) {
  if (n < 0) throw std::invalid_argument("LinearOperator: negative dimension");
}

void LinearOperator::apply(const Vector& x, Vector& y) const {
  if (x.size() != n_) {
    throw std::invalid_argument("apply: vector length " + std::to_string(x.size()) +
                                " does not match operator dimension " + std::to_string(n_));
  }
  y.resize(n_);
  apply_impl(x, y);
  matvecs_.fetch_add(1, std::memory_order_relaxed);
}

Vector LinearOperator::apply(const Vector& x) const {
  Vector y(n_);
  apply(x, y);
  return y;
}

Vector LinearOperator::diagonal() const {
  Vector d(n_), e = Vector::Zero(n_), y(n_);
  for (Index i = 0; i < n_; ++i) {
    e[i] = 1.0;
    apply_impl(e, y);
    d[i] = y[i];
    e[i] = 0.0;
  }
  return d;
}

// ---------------------------------------------------------------------------
// CsrMatrix

CsrMatrix::CsrMatrix(Index n, std::vector<Index> row_ptr, std::vector<Index> col_idx,
                     std::vector<double> values, double sym_tol)
    : LinearOperator(n),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  validate(sym_tol);
}

CsrMatrix CsrMatrix::from_triplets(Index n,
                                   std::vector<std::tuple<Index, Index, double>> triplets,
                                   double sym_tol) {
  std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  for (std::size_t k = 1; k < triplets.size(); ++k) {
    if (std::get<0>(triplets[k]) == std::get<0>(triplets[k - 1]) &&
        std::get<1>(triplets[k]) == std::get<1>(triplets[k - 1])) {
      throw std::invalid_argument("from_triplets: duplicate entry at (" +
                                  std::to_string(std::get<0>(triplets[k])) + ", " +
                                  std::to_string(std::get<1>(triplets[k])) + ")");
    }
  }
  std::vector<Index> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> col_idx(triplets.size());
  std::vector<double> values(triplets.size());
  for (const auto& [i, j, v] : triplets) {
    if (i < 0 || i >= n || j < 0 || j >= n) {
      throw std::invalid_argument("from_triplets: index out of range");
    }
    ++row_ptr[static_cast<std::size_t>(i) + 1];
  }
  for (Index i = 0; i < n; ++i) row_ptr[i + 1] += row_ptr[i];
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    col_idx[k] = std::get<1>(triplets[k]);
    values[k] = std::get<2>(triplets[k]);
  }
  return CsrMatrix(n, std::move(row_ptr), std::move(col_idx), std::move(values), sym_tol);
}

void CsrMatrix::validate(double sym_tol) const {
  const Index n = size();
  if (row_ptr_.size() != static_cast<std::size_t>(n) + 1 || row_ptr_[0] != 0) {
    throw std::invalid_argument("CsrMatrix: row_ptr must have length n+1 and start at 0");
  }
  if (row_ptr_[n] != static_cast<Index>(values_.size()) || col_idx_.size() != values_.size()) {
    throw std::invalid_argument("CsrMatrix: row_ptr[n] must equal nnz");
  }
  double max_abs = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (row_ptr_[i + 1] < row_ptr_[i]) {
      throw std::invalid_argument("CsrMatrix: row_ptr not nondecreasing");
    }
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= n) {
        throw std::invalid_argument("CsrMatrix: column index out of range in row " +
                                    std::to_string(i));
      }
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1]) {
        throw std::invalid_argument("CsrMatrix: columns not strictly increasing in row " +
                                    std::to_string(i));
      }
      max_abs = std::max(max_abs, std::abs(values_[k]));
    }
  }
  // Symmetry: every entry must have a mirror within tolerance.
  const double tol = sym_tol * max_abs;
  auto entry = [&](Index i, Index j) -> const double* {
    auto first = col_idx_.begin() + row_ptr_[i];
    auto last = col_idx_.begin() + row_ptr_[i + 1];
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return nullptr;
    return &values_[static_cast<std::size_t>(it - col_idx_.begin())];
  };
  for (Index i = 0; i < n; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index j = col_idx_[k];
      if (j >= i) continue;
      const double* vt = entry(j, i);
      const double mirror = vt ? *vt : 0.0;
      if (!(std::abs(values_[k] - mirror) <= tol)) {
        throw std::invalid_argument("CsrMatrix: asymmetric entry at (" + std::to_string(i) +
                                    ", " + std::to_string(j) + "): " +
                                    std::to_string(values_[k]) + " vs " + std::to_string(mirror));
      }
    }
  }
  // Mirror check for upper entries whose lower counterpart is missing.
  for (Index i = 0; i < n; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index j = col_idx_[k];
      if (j <= i) continue;
      if (entry(j, i) == nullptr && !(std::abs(values_[k]) <= tol)) {
        throw std::invalid_argument("CsrMatrix: entry (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") has no symmetric counterpart");
      }
    }
  }
}

void CsrMatrix::apply_impl(const Vector& x, Vector& y) const {
  const Index n = size();
  const Index* rp = row_ptr_.data();
  const Index* ci = col_idx_.data();
  const double* va = values_.data();
  const double* xp = x.data();
  double* yp = y.data();
  const int threads = apply_threads();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
#endif
  for (Index i = 0; i < n; ++i) {
    double sum = 0.0;
    for (Index k = rp[i]; k < rp[i + 1]; ++k) sum += va[k] * xp[ci[k]];
    yp[i] = sum;
  }
}

Vector CsrMatrix::diagonal() const {
  Vector d = Vector::Zero(size());
  for (Index i = 0; i < size(); ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] == i) d[i] = values_[k];
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// StencilOperator

StencilOperator::StencilOperator(StencilKind kind, Index nx)
    : LinearOperator(checked_pow(nx, kind == StencilKind::lap2d ? 2 : 3)),
      kind_(kind),
      nx_(nx) {
  if (nx < 1) throw std::invalid_argument("StencilOperator: nx must be >= 1");
}

Vector StencilOperator::diagonal() const {
  return Vector::Constant(size(), kind_ == StencilKind::lap2d ? 4.0 : 6.0);
}

void StencilOperator::apply_impl(const Vector& x, Vector& y) const {
  const Index nx = nx_;
  const double* xp = x.data();
  double* yp = y.data();
  const int threads = apply_threads();
  if (kind_ == StencilKind::lap2d) {
    // Accumulation order matches the assembled CSR row (ascending column).
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
#endif
    for (Index j = 0; j < nx; ++j) {
      const Index row0 = j * nx;
      for (Index i = 0; i < nx; ++i) {
        const Index r = row0 + i;
        double sum = 0.0;
        if (j > 0) sum += -xp[r - nx];
        if (i > 0) sum += -xp[r - 1];
        sum += 4.0 * xp[r];
        if (i < nx - 1) sum += -xp[r + 1];
        if (j < nx - 1) sum += -xp[r + nx];
        yp[r] = sum;
      }
    }
  } else {
    const Index nxy = nx * nx;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
#endif
    for (Index k = 0; k < nx; ++k) {
      for (Index j = 0; j < nx; ++j) {
        const Index row0 = k * nxy + j * nx;
        for (Index i = 0; i < nx; ++i) {
          const Index r = row0 + i;
          double sum = 0.0;
          if (k > 0) sum += -xp[r - nxy];
          if (j > 0) sum += -xp[r - nx];
          if (i > 0) sum += -xp[r - 1];
          sum += 6.0 * xp[r];
          if (i < nx - 1) sum += -xp[r + 1];
          if (j < nx - 1) sum += -xp[r + nx];
          if (k < nx - 1) sum += -xp[r + nxy];
          yp[r] = sum;
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// ScaledOperator

ScaledOperator::ScaledOperator(const LinearOperator& inner, Vector inv_sqrt_diag)
    : LinearOperator(inner.size()), inner_(&inner), inv_sqrt_diag_(std::move(inv_sqrt_diag)) {
  if (inv_sqrt_diag_.size() != inner.size()) {
    throw std::invalid_argument("ScaledOperator: scaling vector length mismatch");
  }
}

void ScaledOperator::apply_impl(const Vector& x, Vector& y) const {
  Vector t = inv_sqrt_diag_.cwiseProduct(x);
  inner_->apply(t, y);
  y.array() *= inv_sqrt_diag_.array();
}

Vector ScaledOperator::diagonal() const {
  Vector d = inner_->diagonal();
  return d.array() * inv_sqrt_diag_.array() * inv_sqrt_diag_.array();
}

// ---------------------------------------------------------------------------
// DiagonalOperator

DiagonalOperator::DiagonalOperator(Vector diag)
    : LinearOperator(diag.size()), diag_(std::move(diag)) {}

DiagonalOperator DiagonalOperator::identity(Index n) {
  return DiagonalOperator(Vector::Ones(n));
}

void DiagonalOperator::apply_impl(const Vector& x, Vector& y) const {
  y = diag_.cwiseProduct(x);
}

// ---------------------------------------------------------------------------
// Generators and spectra

CsrMatrix assemble_laplacian(StencilKind kind, Index nx) {
  if (nx < 1) throw std::invalid_argument("assemble_laplacian: nx must be >= 1");
  const int dim = kind == StencilKind::lap2d ? 2 : 3;
  const Index n = checked_pow(nx, dim);
  const double diag = dim == 2 ? 4.0 : 6.0;
  const Index nxy = nx * nx;

  std::vector<Index> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(static_cast<std::size_t>(n) * (2 * dim + 1));
  values.reserve(static_cast<std::size_t>(n) * (2 * dim + 1));

  auto push = [&](Index col, double v) {
    col_idx.push_back(col);
    values.push_back(v);
  };

  for (Index r = 0; r < n; ++r) {
    const Index i = r % nx;
    const Index j = (r / nx) % nx;
    const Index k = dim == 3 ? r / nxy : 0;
    if (dim == 3 && k > 0) push(r - nxy, -1.0);
    if (j > 0) push(r - nx, -1.0);
    if (i > 0) push(r - 1, -1.0);
    push(r, diag);
    if (i < nx - 1) push(r + 1, -1.0);
    if (j < nx - 1) push(r + nx, -1.0);
    if (dim == 3 && k < nx - 1) push(r + nxy, -1.0);
    row_ptr[r + 1] = static_cast<Index>(col_idx.size());
  }
  return CsrMatrix(n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

std::unique_ptr<LinearOperator> fd_laplacian(StencilKind kind, Index nx, OperatorForm form) {
  if (form == OperatorForm::stencil) {
    return std::make_unique<StencilOperator>(kind, nx);
  }
  return std::make_unique<CsrMatrix>(assemble_laplacian(kind, nx));
}

std::pair<ScaledOperator, Vector> jacobi_scale(const LinearOperator& op) {
  Vector d = op.diagonal();
  Vector inv_sqrt(d.size());
  for (Index i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) {
      throw NumericalError("jacobi_scale: nonpositive diagonal entry at index " +
                           std::to_string(i) + " (" + std::to_string(d[i]) + ")");
    }
    inv_sqrt[i] = 1.0 / std::sqrt(d[i]);
  }
  return {ScaledOperator(op, inv_sqrt), inv_sqrt};
}

Vector analytic_spectrum(StencilKind kind, Index nx, bool scaled) {
  const int dim = kind == StencilKind::lap2d ? 2 : 3;
  const Index n = checked_pow(nx, dim);
  if (n > 10'000'000) {
    throw std::invalid_argument("analytic_spectrum: n = " + std::to_string(n) +
                                " exceeds the enumeration guard 1e7");
  }
  const double h = 1.0 / static_cast<double>(nx + 1);
  Vector s2(nx);
  for (Index i = 0; i < nx; ++i) {
    const double s = std::sin(static_cast<double>(i + 1) * std::numbers::pi * h / 2.0);
    s2[i] = s * s;
  }
  // Unscaled eigenvalue: 2 * sum of 2 sin^2 terms; scaled divides by 2d.
  const double factor = scaled ? 2.0 / static_cast<double>(2 * dim) : 2.0;
  Vector eig(n);
  Index idx = 0;
  if (dim == 2) {
    for (Index j = 0; j < nx; ++j)
      for (Index i = 0; i < nx; ++i) eig[idx++] = factor * 2.0 * (s2[i] + s2[j]);
  } else {
    for (Index k = 0; k < nx; ++k)
      for (Index j = 0; j < nx; ++j)
        for (Index i = 0; i < nx; ++i) eig[idx++] = factor * 2.0 * (s2[i] + s2[j] + s2[k]);
  }
  std::sort(eig.begin(), eig.end());
  return eig;
}

std::pair<double, double> analytic_extremes(StencilKind kind, Index nx, bool scaled) {
  const int dim = kind == StencilKind::lap2d ? 2 : 3;
  const double h = 1.0 / static_cast<double>(nx + 1);
  const double s = std::sin(std::numbers::pi * h / 2.0);
  const double c = std::cos(std::numbers::pi * h / 2.0);
  const double factor = (scaled ? 2.0 / static_cast<double>(2 * dim) : 2.0) * 2.0 *
                        static_cast<double>(dim);
  return {factor * s * s, factor * c * c};
}

Vector flat_spectrum_vector(StencilKind kind, Index nx) {
  const Index N = nx + 1;
  // 1D all-modes sum: s_j = sum_k sin(k j pi / N), closed form
  //   s_j = sin(j pi (N-1) / (2N)) sin(j pi / 2) / sin(j pi / (2N)),
  // zero for even j.
  Vector s(nx);
  for (Index j = 1; j <= nx; ++j) {
    if (j % 2 == 0) {
      s[j - 1] = 0.0;
      continue;
    }
    const double t = static_cast<double>(j) * std::numbers::pi / (2.0 * static_cast<double>(N));
    const double sign = (j % 4 == 1) ? 1.0 : -1.0;  // sin(j pi / 2)
    s[j - 1] = std::sin(static_cast<double>(nx) * t) * sign / std::sin(t);
  }
  if (kind == StencilKind::lap2d) {
    Vector v(nx * nx);
    for (Index j = 0; j < nx; ++j)
      for (Index i = 0; i < nx; ++i) v[j * nx + i] = s[j] * s[i];
    return v;
  }
  Vector v(nx * nx * nx);
  for (Index k = 0; k < nx; ++k)
    for (Index j = 0; j < nx; ++j)
      for (Index i = 0; i < nx; ++i) v[(k * nx + j) * nx + i] = s[k] * s[j] * s[i];
  return v;
}

}  // namespace polycg
