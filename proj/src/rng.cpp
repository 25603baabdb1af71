#include "pedc/rng.hpp"

namespace pedc {

std::uint64_t SeededRng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw Error("uniform_below(0)");
  // Reject draws from the trailing partial block of [0, 2^64).
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  std::uint64_t draw;
  do {
    draw = gen_();
  } while (draw > limit);
  return draw % bound;
}

FieldElement SeededRng::field_element(std::uint64_t q) {
  return FieldElement(uniform_below(q), q);
}

FieldVector SeededRng::field_vector(std::size_t len, std::uint64_t q) {
  std::vector<FieldElement> elems;
  elems.reserve(len);
  for (std::size_t i = 0; i < len; ++i) elems.push_back(field_element(q));
  return FieldVector(std::move(elems));
}

namespace {

// splitmix64 finalizer.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, StreamRole role,
                          std::uint64_t index) {
  std::uint64_t h = mix(master);
  h = mix(h ^ static_cast<std::uint64_t>(role));
  h = mix(h ^ index);
  return h;
}

}  // namespace pedc
