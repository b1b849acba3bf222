// SPDX-License-Identifier: Apache-2.0

#ifndef POLYCG_TYPES_HPP
#define POLYCG_TYPES_HPP

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace polycg {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Input data could not be parsed (MatrixMarket files, CLI specs).
// The message carries the offending line number where applicable.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A computation left the domain where the algorithms are defined
// (loss of positive definiteness, non-finite values, overflow guards).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace polycg

#endif  // POLYCG_TYPES_HPP
