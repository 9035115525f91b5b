#pragma once

#include <Eigen/Dense>

namespace oemsim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace oemsim
