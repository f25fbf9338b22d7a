#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tunebench/joint_table.hpp"

namespace tunebench {

struct SamplerConfig {
  std::uint64_t seed = 0;
  std::size_t count = 109;
  // 0 selects std::thread::hardware_concurrency().
  unsigned threads = 1;
};

/// Draws one table uniformly from the 8-cell probability simplex: eight unit
/// exponentials normalized by their sum. Table `index` uses its own RNG
/// stream derived from (seed, index).
JointTable sample_table(std::uint64_t seed, std::size_t index);

/// `count` tables in index order. Output does not depend on `threads`.
/// Throws std::invalid_argument when count is 0.
std::vector<JointTable> sample_tables(const SamplerConfig& config);

}  // namespace tunebench
