// SPDX-License-Identifier: Apache-2.0

#ifndef POLYCG_LINOP_HPP
#define POLYCG_LINOP_HPP

#include "polycg/types.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <tuple>
#include <utility>
#include <vector>

namespace polycg {

// Matrix-free contract for a symmetric positive definite operator:
// only the action v -> Av is available. Operators are immutable after
// construction and safe for concurrent read-only application; the
// matvec counter uses atomic increments so instrumentation never races.
class LinearOperator {
public:
  virtual ~LinearOperator() = default;

  Index size() const { return n_; }

  // y = A x. Throws std::invalid_argument on dimension mismatch.
  void apply(const Vector& x, Vector& y) const;
  Vector apply(const Vector& x) const;

  // Diagonal entries of the operator. Concrete operators override this
  // with an O(n) extraction; the fallback probes with unit vectors and
  // costs n applications.
  virtual Vector diagonal() const;

  std::uint64_t matvec_count() const { return matvecs_.load(std::memory_order_relaxed); }
  void reset_matvec_count() const { matvecs_.store(0, std::memory_order_relaxed); }

protected:
  explicit LinearOperator(Index n);

private:
  virtual void apply_impl(const Vector& x, Vector& y) const = 0;

  Index n_;
  mutable std::atomic<std::uint64_t> matvecs_{0};
};

// Thread count used by the row-parallel apply kernels (CSR and stencil).
// 1 (the default) runs serially; any value is bitwise deterministic since
// rows are written by exactly one thread.
void set_apply_threads(int threads);
int apply_threads();

// Compressed sparse row storage of a symmetric matrix, both triangles
// present. Construction validates the structural invariants (row_ptr
// nondecreasing, columns strictly increasing within a row) and symmetry:
// entries must match their mirror within sym_tol * max|a_ij|
// (sym_tol = 0 demands exact symmetry, the contract for generated data).
class CsrMatrix : public LinearOperator {
public:
  CsrMatrix(Index n, std::vector<Index> row_ptr, std::vector<Index> col_idx,
            std::vector<double> values, double sym_tol = 0.0);

  // Builds from unordered (row, col, value) triplets. Duplicate
  // coordinates are an error.
  static CsrMatrix from_triplets(Index n,
                                 std::vector<std::tuple<Index, Index, double>> triplets,
                                 double sym_tol = 0.0);

  Index nnz() const { return static_cast<Index>(values_.size()); }
  const std::vector<Index>& row_ptr() const { return row_ptr_; }
  const std::vector<Index>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  Vector diagonal() const override;

private:
  void apply_impl(const Vector& x, Vector& y) const override;
  void validate(double sym_tol) const;

  std::vector<Index> row_ptr_;
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

enum class StencilKind { lap2d, lap3d };

// Never-materialized finite-difference Laplacian on the unit square/cube
// with homogeneous Dirichlet boundary, unit-grid convention: diagonal 4
// (2D five-point) or 6 (3D seven-point), off-diagonals -1, n = nx^d.
// apply accumulates neighbor terms in ascending column order so that the
// result is bitwise identical to the assembled CsrMatrix form.
class StencilOperator : public LinearOperator {
public:
  StencilOperator(StencilKind kind, Index nx);

  StencilKind kind() const { return kind_; }
  Index nx() const { return nx_; }

  Vector diagonal() const override;

private:
  void apply_impl(const Vector& x, Vector& y) const override;

  StencilKind kind_;
  Index nx_;
};

// Symmetric diagonal (Jacobi) scaling D^{-1/2} A D^{-1/2}. Holds a
// non-owning pointer to the inner operator; the caller keeps it alive.
class ScaledOperator : public LinearOperator {
public:
  ScaledOperator(const LinearOperator& inner, Vector inv_sqrt_diag);

  const Vector& inv_sqrt_diag() const { return inv_sqrt_diag_; }
  const LinearOperator& inner() const { return *inner_; }

  Vector diagonal() const override;

private:
  void apply_impl(const Vector& x, Vector& y) const override;

  const LinearOperator* inner_;
  Vector inv_sqrt_diag_;
};

// Operator with the given diagonal and zero off-diagonal entries.
class DiagonalOperator : public LinearOperator {
public:
  explicit DiagonalOperator(Vector diag);
  static DiagonalOperator identity(Index n);

  Vector diagonal() const override { return diag_; }

private:
  void apply_impl(const Vector& x, Vector& y) const override;

  Vector diag_;
};

enum class OperatorForm { stencil, assembled };

// Assembled CSR form of the FD Laplacian; exists for testing and export.
CsrMatrix assemble_laplacian(StencilKind kind, Index nx);

// Factory matching the generator spec: stencil (default, any size that
// fits in an Index) or assembled form.
std::unique_ptr<LinearOperator> fd_laplacian(StencilKind kind, Index nx,
                                             OperatorForm form = OperatorForm::stencil);

// D^{-1/2} A D^{-1/2} together with D^{-1/2} for the back-transformation
// of solutions. Throws NumericalError naming the index of the first
// nonpositive diagonal entry.
std::pair<ScaledOperator, Vector> jacobi_scale(const LinearOperator& op);

// All n = nx^d eigenvalues of the FD Laplacian in increasing order,
// from the tensor-product closed form; the scaled variant returns the
// sin^2-sum form with values in (0, 2). Guarded to n <= 10^7.
Vector analytic_spectrum(StencilKind kind, Index nx, bool scaled);

// Extremal eigenvalues only; closed form, no enumeration guard.
std::pair<double, double> analytic_extremes(StencilKind kind, Index nx, bool scaled);

// Grid vector whose expansion in the Laplacian eigenbasis has unit
// coefficient on every mode (tensor power of the 1D all-modes sum).
// Useful as a worst-case exact solution exercising the full spectrum.
Vector flat_spectrum_vector(StencilKind kind, Index nx);

}  // namespace polycg

#endif  // POLYCG_LINOP_HPP
