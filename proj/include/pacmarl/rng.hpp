#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace pacmarl::rng {

using Engine = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// FNV-1a, used to turn stream labels into seed words.
constexpr std::uint64_t label_hash(std::string_view label) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::uint64_t word(double v) noexcept {
  // +0.0 and -0.0 name the same stream.
  return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v);
}

// Derives a child seed from a parent and an ordered list of words:
//   h0 = mix64(parent), h_{k+1} = mix64(h_k ^ w_k).
// Order-sensitive and free of shared state, so any cell can compute its own
// stream without coordinating with others.
inline std::uint64_t derive(std::uint64_t parent,
                            std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = mix64(parent);
  for (std::uint64_t w : words) h = mix64(h ^ w);
  return h;
}

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

}  // namespace pacmarl::rng
