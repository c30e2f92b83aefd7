#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace ranklab {

using Scalar = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Thrown for malformed input files (bad JSON, bad numbers, missing fields).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when well-formed input violates a data invariant (duplicate ids,
// negative grades, unknown references).
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ranklab
