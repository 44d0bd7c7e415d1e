#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sanisim {

// Bit vectors are stored one bit per byte (values 0/1). Pages are a few
// thousand bits, so the byte-per-bit layout trades memory for simple,
// branch-light code everywhere bits are inspected individually.
using BitVec = std::vector<std::uint8_t>;

// Pack to 8 bits per byte, MSB first. Used for ledger keys and hex dumps.
std::string pack_bits(const BitVec& bits);

// Inverse of pack_bits; bit_count trims the trailing partial byte.
BitVec unpack_bits(const std::string& bytes, std::size_t bit_count);

// Lowercase hex of the packed form (MSB-first within each byte).
std::string bits_to_hex(const BitVec& bits);

// Parse a hex string into bits, 4 bits per digit, MSB first.
// Throws Error(ParseError) on non-hex input.
BitVec hex_to_bits(const std::string& hex);

inline BitVec all_ones(std::size_t n) { return BitVec(n, 1); }
inline BitVec all_zeros(std::size_t n) { return BitVec(n, 0); }

} // namespace sanisim
