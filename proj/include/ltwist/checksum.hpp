#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace ltwist {

/// CRC-32 (IEEE 802.3, reflected, poly 0xEDB88320). Used as the trailing
/// checksum of coefficient table files.
inline uint32_t crc32(const void* data, size_t len, uint32_t seed = 0) {
  static const auto table = [] {
    struct { uint32_t t[256]; } tb{};
    for (uint32_t i = 0; i < 256; ++i) {
      uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      tb.t[i] = c;
    }
    return tb;
  }();
  uint32_t crc = ~seed;
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) crc = table.t[(crc ^ p[i]) & 0xFF] ^ (crc >> 8);
  return ~crc;
}

/// FNV-1a 64-bit; used to digest experiment configs for checkpoint matching.
inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace ltwist
