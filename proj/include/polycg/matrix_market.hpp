// SPDX-License-Identifier: Apache-2.0

#ifndef POLYCG_MATRIX_MARKET_HPP
#define POLYCG_MATRIX_MARKET_HPP

#include "polycg/linop.hpp"

#include <iosfwd>
#include <string>

namespace polycg {

// Reads a MatrixMarket coordinate real file (symmetric, or general with
// symmetric content) with 1-based indices into symmetrized CSR storage,
// both triangles present. Asymmetry beyond 1e-12 * max|a_ij| is an error;
// parse errors report the offending line number.
CsrMatrix load_matrix_market(const std::string& path);
CsrMatrix load_matrix_market(std::istream& in, const std::string& name = "<stream>");

// Writes the lower triangle as `%%MatrixMarket matrix coordinate real
// symmetric` with 17-significant-digit entries, so that
// load(save(m)) == m exactly on the CSR arrays.
void save_matrix_market(const CsrMatrix& m, const std::string& path);
void save_matrix_market(const CsrMatrix& m, std::ostream& out);

}  // namespace polycg

#endif  // POLYCG_MATRIX_MARKET_HPP
