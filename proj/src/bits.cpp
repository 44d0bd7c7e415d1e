#include "sanisim/bits.hpp"

#include "sanisim/error.hpp"

namespace sanisim {

std::string pack_bits(const BitVec& bits) {
    std::string out((bits.size() + 7) / 8, '\0');
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) out[i / 8] |= static_cast<char>(0x80u >> (i % 8));
    }
    return out;
}

BitVec unpack_bits(const std::string& bytes, std::size_t bit_count) {
    BitVec out(bit_count, 0);
    for (std::size_t i = 0; i < bit_count; ++i) {
        const auto byte = static_cast<unsigned char>(bytes[i / 8]);
        out[i] = (byte >> (7 - i % 8)) & 1u;
    }
    return out;
}

std::string bits_to_hex(const BitVec& bits) {
    static const char* digits = "0123456789abcdef";
    const std::string packed = pack_bits(bits);
    std::string out;
    out.reserve(packed.size() * 2);
    for (unsigned char byte : packed) {
        out.push_back(digits[byte >> 4]);
        out.push_back(digits[byte & 0xf]);
    }
    return out;
}

static int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

BitVec hex_to_bits(const std::string& hex) {
    BitVec out;
    out.reserve(hex.size() * 4);
    for (char c : hex) {
        const int v = hex_digit(c);
        if (v < 0) throw Error(ErrorKind::ParseError, std::string("invalid hex digit '") + c + "'");
        for (int b = 3; b >= 0; --b) out.push_back((v >> b) & 1);
    }
    return out;
}

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidGeometry: return "InvalidGeometry";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::BlockRetired: return "BlockRetired";
        case ErrorKind::NopExceeded: return "NopExceeded";
        case ErrorKind::NoReachableLevel: return "NoReachableLevel";
        case ErrorKind::RegionOutOfBounds: return "RegionOutOfBounds";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::NotPrimitive: return "NotPrimitive";
        case ErrorKind::CapacityExceeded: return "CapacityExceeded";
        case ErrorKind::MaskInfeasible: return "MaskInfeasible";
        case ErrorKind::PulseBudgetExhausted: return "PulseBudgetExhausted";
        case ErrorKind::MaskInfeasibleAndFallbackFailed: return "MaskInfeasibleAndFallbackFailed";
        case ErrorKind::Unmapped: return "Unmapped";
        case ErrorKind::ReadFail: return "ReadFail";
        case ErrorKind::DeviceFull: return "DeviceFull";
        case ErrorKind::NoVictim: return "NoVictim";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "UnknownError";
}

} // namespace sanisim
