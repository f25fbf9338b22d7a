#include "tunebench/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "tunebench/parallel.hpp"
#include "tunebench/random.hpp"

namespace tunebench {

JointTable sample_table(std::uint64_t seed, std::size_t index) {
  std::mt19937_64 engine(derive_seed(seed, {0x7461626c65ULL, index}));
  JointTable::Cells draws{};
  double sum = 0.0;
  for (double& d : draws) {
    d = -std::log(open_unit(engine));
    sum += d;
  }
  for (double& d : draws) d /= sum;
  return JointTable::normalized(draws, 1e-12);
}

std::vector<JointTable> sample_tables(const SamplerConfig& config) {
  if (config.count == 0) throw std::invalid_argument("sampler count must be at least 1");
  std::vector<JointTable> tables(config.count, JointTable::uniform());
  parallel_for(config.count, config.threads,
               [&](std::size_t i) { tables[i] = sample_table(config.seed, i); });
  return tables;
}

}  // namespace tunebench
