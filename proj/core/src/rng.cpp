#include "fsc/rng.hpp"

#include <cmath>

namespace fsc {

namespace {

// splitmix64; standard seed-scrambling finalizer.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t run_seed, Stream stream) {
  return splitmix64(splitmix64(run_seed) ^ static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL);
}

}  // namespace fsc
