#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace cliffopt {

/// Packed bit string used for canonical keys and search states (at most 128 bits).
using Key = unsigned __int128;

inline constexpr unsigned kKeyBits = 128;

constexpr Key low_mask(unsigned bits) {
    return bits >= 128 ? ~Key{0} : ((Key{1} << bits) - 1);
}

constexpr std::size_t key_bytes_for_bits(unsigned bits) { return (bits + 7) / 8; }

/// Little-endian fixed-width encoding.
inline void store_key(Key k, std::span<std::uint8_t> out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(k >> (8 * i));
    }
}

inline Key load_key(const std::uint8_t* in, std::size_t width) {
    Key k = 0;
    for (std::size_t i = width; i-- > 0;) {
        k = (k << 8) | in[i];
    }
    return k;
}

inline std::uint64_t hash_key(Key k) {
    std::uint64_t x = static_cast<std::uint64_t>(k) ^ (static_cast<std::uint64_t>(k >> 64) * 0x9E3779B97F4A7C15ull);
    x ^= x >> 31;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 29;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 32;
    return x;
}

inline std::string key_hex(Key k) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    do {
        s.insert(s.begin(), digits[static_cast<unsigned>(k & 0xF)]);
        k >>= 4;
    } while (k != 0);
    return s;
}

inline std::string to_decimal(Key k) {
    std::string s;
    do {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<unsigned>(k % 10)));
        k /= 10;
    } while (k != 0);
    return s;
}

template <typename Word>
constexpr Word swap_bits(Word x, unsigned i, unsigned j) {
    Word d = ((x >> i) ^ (x >> j)) & 1u;
    return static_cast<Word>(x ^ ((d << i) | (d << j)));
}

}  // namespace cliffopt
