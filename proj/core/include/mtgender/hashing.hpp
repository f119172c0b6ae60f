#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mtg {

// Stable across platforms and runs, unlike std::hash. Used for cache keys and
// for seeding the mock backend.
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t hash = kFnvOffset) {
  for (char c : data) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Incremental hasher; fields are length-prefixed so ("ab","c") != ("a","bc").
class StableHasher {
 public:
  StableHasher& add(std::string_view field) {
    const auto size = static_cast<std::uint64_t>(field.size());
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (size >> (8 * i)) & 0xFF;
      hash_ *= 0x100000001b3ULL;
    }
    hash_ = fnv1a64(field, hash_);
    return *this;
  }
  StableHasher& add(std::uint64_t value) { return add(std::to_string(value)); }
  std::uint64_t value() const { return hash_; }
  std::string hex() const;

 private:
  std::uint64_t hash_ = kFnvOffset;
};

std::string to_hex(std::uint64_t value);

}  // namespace mtg
