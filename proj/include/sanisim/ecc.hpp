#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sanisim/bits.hpp"
#include "sanisim/error.hpp"

namespace sanisim::ecc {

// GF(2^m) with log/antilog tables over a primitive polynomial.
// Immutable after construction; cheap to share by value or reference.
class Field {
public:
    // Degree-m primitive polynomial given as a bitmask including the x^m term
    // (e.g. m=4, x^4+x+1 -> 0b10011). Throws Error(NotPrimitive) when alpha
    // does not have multiplicative order 2^m - 1.
    Field(int m, std::uint32_t primitive_poly);

    int m() const { return m_; }
    std::uint32_t primitive_poly() const { return poly_; }
    int order() const { return order_; } // 2^m - 1

    std::uint16_t mul(std::uint16_t a, std::uint16_t b) const {
        if (a == 0 || b == 0) return 0;
        return antilog_[log_[a] + log_[b]];
    }

    std::uint16_t inv(std::uint16_t a) const; // a != 0

    // alpha^e for any integer exponent (reduced mod 2^m - 1).
    std::uint16_t alpha_pow(long long e) const;

    int log_of(std::uint16_t a) const; // a != 0

    // Default primitive polynomial for 3 <= m <= 16.
    static std::uint32_t default_primitive_poly(int m);

private:
    int m_;
    std::uint32_t poly_;
    int order_;
    std::vector<std::uint16_t> log_;
    std::vector<std::uint16_t> antilog_; // doubled to skip the mod in mul
};

struct DecodeOutcome {
    enum class Status { Corrected, Uncorrectable };
    Status status = Status::Uncorrectable;
    BitVec data;                          // first k bits, when Corrected
    int error_count = 0;                  // flips applied, when Corrected
    std::vector<int> error_positions;     // polynomial degrees, ascending

    bool corrected() const { return status == Status::Corrected; }
};

struct MaskResult {
    BitVec clear_mask;             // over the parity region; 1 = program to 0
    int bits_cleared = 0;
    bool verified_uncorrectable = false;
};

// Binary systematic BCH code, possibly shortened by leading zero data bits.
// Word layout: codeword string = data (k bits) followed by parity (n-k bits);
// string index i corresponds to polynomial degree n-1-i. Reported error
// positions are polynomial degrees.
class Code {
public:
    // generator = lcm of minimal polynomials of alpha, alpha^3, ... alpha^(2t-1).
    // n = 2^m - 1 - shortened_by. Throws Error(CapacityExceeded) when m*t >= n
    // (the parity budget cannot fit ahead of the data).
    Code(const Field& field, int t, int shortened_by);

    const Field& field() const { return field_; }
    int n() const { return n_; }
    int k() const { return k_; }
    int t() const { return t_; }
    int shortened_by() const { return shortened_by_; }
    int parity_bits() const { return n_ - k_; }

    // Coefficient of x^i of the generator is generator_poly()[i].
    const std::vector<std::uint8_t>& generator_poly() const { return generator_; }
    std::string generator_hex() const;

    // Systematic parity: remainder of x^(n-k) * data(x) mod generator.
    BitVec encode(const BitVec& data) const;

    // S_i = received(alpha^i) for i = 1..2t; result[0] holds S_1.
    std::vector<std::uint16_t> compute_syndromes(const BitVec& received) const;

    // Error locator sigma from 2t syndromes; sigma[i] is the coefficient of
    // x^i. Degenerate inputs give sigma = {1}. A degree > t signals
    // uncorrectability to the caller.
    std::vector<std::uint16_t> berlekamp_massey(const std::vector<std::uint16_t>& syndromes) const;

    // Degrees j in [0, n) with sigma(alpha^-j) = 0, ascending. Shortened
    // (virtual) positions never appear.
    std::vector<int> chien_search(const std::vector<std::uint16_t>& sigma) const;

    // Full pipeline; never returns a non-codeword as Corrected.
    DecodeOutcome decode(const BitVec& received) const;

    // Selects currently-1 parity bits to program to 0 so that
    // decode(data_read || masked parity) is Uncorrectable: clears the t+1
    // lowest-index candidates, then keeps clearing one at a time while the
    // word still decodes (including miscorrections). `programmable`, when
    // non-null, restricts candidates to positions the device can actually
    // drive to 0. Throws Error(MaskInfeasible) when the budget or the
    // candidate pool runs out.
    MaskResult craft_uncorrectable_mask(const BitVec& data_read, const BitVec& parity_read,
                                        int clear_budget,
                                        const BitVec* programmable = nullptr) const;

private:
    Field field_;
    int n_, k_, t_, shortened_by_;
    std::vector<std::uint8_t> generator_;
    std::uint64_t generator_bits_ = 0; // low-degree-first; valid when fits
    bool generator_fits_u64_ = false;
};

// Splits a page into per-segment BCH words.
struct SegmentLayout {
    int segments_per_page = 4;
    int data_bits_per_segment = 512;
    int parity_bits_per_segment = 50;
    int main_bits = 2048;
    int spare_bits = 256;

    int data_offset(int seg) const { return seg * data_bits_per_segment; }
    int parity_offset(int seg) const { return main_bits + seg * parity_bits_per_segment; }
    int parity_region_bits() const { return segments_per_page * parity_bits_per_segment; }

    // Throws Error(ConfigError) unless segments * data = main bits and the
    // parity region fits in the spare area.
    void validate() const;
};

// Code plus layout, as used by the FTL and sanitizer.
struct Codec {
    Code code;
    SegmentLayout layout;

    // Layout for `segments` equal segments over main/spare geometry, with the
    // code shortened so each segment carries main_bits/segments data bits.
    static Codec make_page_codec(int m, int t, int segments,
                                 int main_bits, int spare_bits);

    BitVec segment_received(const BitVec& page, int seg) const; // data || parity
    BitVec encode_page(const BitVec& main_data) const;          // -> full page image
};

} // namespace sanisim::ecc
