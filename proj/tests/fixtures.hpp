#pragma once

#include <string>

#include "dvs/io.hpp"

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(DVS_DATA_DIR) + "/" + name; }

inline dvs::DiscreteQP example1() { return dvs::io::parse_problem(dvs::io::read_file(path("example1.json"))); }
inline dvs::DiscreteQP example2() { return dvs::io::parse_problem(dvs::io::read_file(path("example2.json"))); }

/// Q = 2I, c = (4, 2), A = [1 1], b = 3, U = {1, 2} x {1, 2}.
inline dvs::DiscreteQP two_by_two() {
  dvs::Matrix Q = 2.0 * dvs::Matrix::Identity(2, 2);
  dvs::Vector c(2);
  c << 4, 2;
  dvs::Matrix A(1, 2);
  A << 1, 1;
  dvs::Vector b = dvs::Vector::Constant(1, 3.0);
  return dvs::DiscreteQP(Q, c, A, b, {{1, 2}, {1, 2}});
}

}  // namespace fixtures
