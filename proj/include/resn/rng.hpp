#pragma once

#include <cstdint>
#include <random>

namespace resn {

/// splitmix64 finalizer; used to derive independent seed streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Mixes an extra key into a seed. Chain to derive hierarchical streams:
/// derive(derive(master, rep), kTraining). Derivations commute with nothing,
/// so every (base, key) pair names exactly one stream.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key) {
  return splitmix64(base ^ (key * 0xD1B54A32D192ED03ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k1,
                                    std::uint64_t k2) {
  return derive_seed(derive_seed(base, k1), k2);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k1,
                                    std::uint64_t k2, std::uint64_t k3) {
  return derive_seed(derive_seed(base, k1, k2), k3);
}

// Stream tags. Keeping them in one place documents the seeding scheme of a
// whole run: master -> repetition -> {evolution, evaluation(gen,idx),
// final training}, and evaluation -> per-sample streams inside MRS.
namespace seed_tag {
inline constexpr std::uint64_t repetition = 0x5245;   // per-repetition root
inline constexpr std::uint64_t evolution = 0x45564F;  // selection/mutation rng
inline constexpr std::uint64_t evaluation = 0x4556;   // per-individual fitness
inline constexpr std::uint64_t training = 0x5452;     // final gradient training
inline constexpr std::uint64_t sample = 0x534D;       // per-sample MRS stream
}  // namespace seed_tag

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

}  // namespace resn
