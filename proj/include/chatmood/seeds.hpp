// Deterministic seed derivation: independent streams from (master, tags).
#pragma once

#include <cstdint>

namespace chatmood {

/// splitmix64 finalizer; bijective, well-mixed.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a child seed; derive(derive(s, a), b) differs from derive(s, b).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  return mix64(master ^ mix64(tag));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag1, std::uint64_t tag2) {
  return derive_seed(derive_seed(master, tag1), tag2);
}

/// FNV-1a over arbitrary bytes; used to hash genome content.
inline std::uint64_t fnv1a(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace chatmood
