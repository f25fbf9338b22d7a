#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "tunebench/joint_table.hpp"
#include "tunebench/sampler.hpp"

namespace testing {

// The worked example table used throughout the tests, cells in (e1,e2,c) order.
inline tunebench::JointTable example_table() {
  return tunebench::JointTable({0.10, 0.05, 0.20, 0.15, 0.05, 0.10, 0.15, 0.20});
}

// Independent E1 and E2 with random base rates and conditionals.
inline tunebench::JointTable random_product_table(std::mt19937_64& engine) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::array<std::array<double, 2>, 2> cond{{{u(engine), u(engine)}, {u(engine), u(engine)}}};
  return tunebench::product_table(u(engine), u(engine), cond);
}

}  // namespace testing
