#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace symaccel {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Filesystem-level failure (missing or unwritable file), as opposed to
// malformed content.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace symaccel
