#pragma once

#include <cstdint>
#include <random>

#include "pedc/linalg.hpp"

namespace pedc {

// Deterministic draw source. mt19937_64 is fully specified by the
// standard and the rejection step below is exact, so a (seed, call
// sequence) pair reproduces bit-identically on any platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, bound), no modulo bias.
  std::uint64_t uniform_below(std::uint64_t bound);

  FieldElement field_element(std::uint64_t q);
  FieldVector field_vector(std::size_t len, std::uint64_t q);

 private:
  std::mt19937_64 gen_;
};

enum class StreamRole : std::uint64_t {
  kUser = 1,
  kCollector = 2,
  kSweep = 3,
};

// Keyed stream derivation: each party's stream depends only on
// (master, role, index), so adding parties never perturbs the draws of
// existing ones.
std::uint64_t derive_seed(std::uint64_t master, StreamRole role,
                          std::uint64_t index);

}  // namespace pedc
