#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <string>

namespace meshspectra {

/// Incremental 64-bit FNV-1a. Used to key basis caches and to stamp
/// provenance sidecars with a content hash of their input mesh.
class Fnv1a64 {
public:
  Fnv1a64& update(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      state_ ^= bytes[i];
      state_ *= 0x100000001b3ull;
    }
    return *this;
  }

  template <typename T>
  Fnv1a64& update_value(const T& value) {
    static_assert(std::is_trivially_copyable_v<T>);
    return update(&value, sizeof(T));
  }

  std::uint64_t digest() const { return state_; }

private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

std::string hash_hex(std::uint64_t hash);

}  // namespace meshspectra
