#ifndef OFFLOAD_RNG_HPP
#define OFFLOAD_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace offload::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Named substream: one generator per (replication, purpose, index) so adding
// streams never perturbs existing ones.
inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t replication,
                                   std::uint64_t purpose, std::uint64_t index) {
  std::uint64_t s = splitmix64(master ^ 0x6a09e667f3bcc908ULL);
  s = splitmix64(s ^ replication);
  s = splitmix64(s ^ (purpose * 0x9e3779b97f4a7c15ULL));
  s = splitmix64(s ^ index);
  return std::mt19937_64(s);
}

// Uniform draw on (0, 1]; explicit 53-bit mapping keeps results identical
// across standard library implementations.
inline double uniform01(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
}

inline double exponential(std::mt19937_64& gen, double rate) {
  return -std::log(uniform01(gen)) / rate;
}

}  // namespace offload::rng

#endif
