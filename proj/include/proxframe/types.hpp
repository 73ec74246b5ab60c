#pragma once

#include <Eigen/Dense>

namespace proxframe {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace proxframe
