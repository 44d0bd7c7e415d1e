#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sanisim/bits.hpp"
#include "sanisim/error.hpp"
#include "sanisim/rng.hpp"

namespace sanisim {

// Physical geometry plus the stochastic knobs of the cell model.
struct GeometryConfig {
    std::uint32_t blocks_per_device = 64;
    std::uint32_t wordlines_per_block = 32;
    std::uint32_t bits_per_cell = 2;       // 1 = SLC, 2 = MLC (levels = 2^bits)
    std::uint32_t main_bits_per_page = 2048;
    std::uint32_t spare_bits_per_page = 256;
    std::uint32_t nop_limit = 4;           // programs per page between erases
    std::uint32_t erase_endurance = 1000;  // erases before a block retires
    double p_disturb = 1e-3;     // per level-increment coupling to facing neighbor cell
    double q_pulse = 0.3;        // per-cell increment probability per deletion pulse
    double p_read_noise = 1e-5;  // transient per-bit flip probability per read

    std::uint32_t levels() const { return 1u << bits_per_cell; }
    std::uint32_t page_bits() const { return main_bits_per_page + spare_bits_per_page; }
    std::uint32_t cells_per_wordline() const { return page_bits(); }
    std::uint32_t pages_per_wordline() const { return bits_per_cell; }
    std::uint32_t pages_per_block() const { return wordlines_per_block * bits_per_cell; }
    std::uint64_t total_pages() const {
        return static_cast<std::uint64_t>(blocks_per_device) * pages_per_block();
    }

    // Throws Error(InvalidGeometry) when any count is zero, a probability is
    // outside [0,1], or bits_per_cell is not 1 or 2.
    void validate() const;
};

struct PageAddress {
    std::uint32_t block = 0;
    std::uint32_t wordline = 0;
    std::uint32_t page_slot = 0; // 0 = LSB page, 1 = MSB page

    bool operator==(const PageAddress&) const = default;
};

// Outcome of one program/pulse operation.
//   pulses         program-pulse steps (max per-cell increment, or pulse count)
//   exposure       sum of level increments on the target wordline
//   neighbor_flips disturbance-induced increments on wordlines +/-1
//   wear_delta     same sum as exposure, carried as the endurance metric
struct PulseReport {
    std::uint64_t pulses = 0;
    std::uint64_t exposure = 0;
    std::uint64_t neighbor_flips = 0;
    std::uint64_t wear_delta = 0;

    PulseReport& operator+=(const PulseReport& o) {
        pulses += o.pulses;
        exposure += o.exposure;
        neighbor_flips += o.neighbor_flips;
        wear_delta += o.wear_delta;
        return *this;
    }
};

// Gray mapping, level -> per-slot read bit. Adjacent levels differ in one bit;
// level 0 is the erased state and reads all-1s.
//   MLC: 0->(1,1) 1->(0,1) 2->(0,0) 3->(1,0)   (LSB bit, MSB bit)
//   SLC: 0->1 1->0
std::uint8_t gray_bit(std::uint32_t bits_per_cell, std::uint32_t level, std::uint32_t slot);

// Inverse of the gray map: unique level for a full bit pattern.
// bits[slot] gives the desired read bit of each page slot.
std::uint32_t level_for_bits(std::uint32_t bits_per_cell, const std::uint8_t* bits);

// Simulated NAND chip. A Device is a plain value: copying it snapshots cell
// levels, wear, counters and the RNG state, so clones replay identically.
class Device {
public:
    Device(const GeometryConfig& geometry, std::uint64_t seed);

    const GeometryConfig& geometry() const { return geom_; }
    std::uint64_t seed() const { return seed_; }

    // Re-seeds the RNG stream without touching cell state. Used by the
    // scheme comparison harness to run independent trials on one snapshot.
    void reseed(std::uint64_t seed);

    // Block-level erase. All levels return to 0 and program counts reset;
    // wear survives. Reaching erase_endurance retires the block after the
    // erase completes.
    void erase_block(std::uint32_t block_index);

    // Full-page program. Data covers main+spare bits. A 1-bit inhibits the
    // cell; a 0-bit drives it to the unique level that reads 0 on this slot
    // while preserving the sibling slot's current bit (one-way: the target
    // level must be >= the current level, else NoReachableLevel). Validation
    // is atomic: on error no cell moves and no NOP is consumed.
    PulseReport program_page(const PageAddress& addr, const BitVec& data);

    // Same rules as program_page restricted to [bit_offset, bit_offset+len);
    // cells outside the region are inhibited. Consumes NOP of the addressed
    // page only.
    PulseReport partial_program(const PageAddress& addr, std::uint32_t bit_offset,
                                const BitVec& region_data);

    // Gray-map bits of the addressed slot with fresh transient read noise.
    BitVec read_page_raw(const PageAddress& addr);

    // Noiseless view of the stored bits (forensic/lab read; no RNG use).
    BitVec read_page_true(const PageAddress& addr) const;

    // n wordline-wide pulses; each pulse increments every non-saturated cell
    // with probability q_pulse. Optionally restricted to a cell range.
    // Does not consume NOP.
    PulseReport apply_deletion_pulses(std::uint32_t block_index, std::uint32_t wordline_index,
                                      std::uint32_t n,
                                      std::uint32_t cell_begin = 0,
                                      std::uint32_t cell_end = UINT32_MAX);

    // Raw level-targeted program of a whole wordline (sanitization primitive).
    // targets[i] must be >= current level of cell i. Consumes one NOP unit on
    // every page slot of the wordline.
    PulseReport program_wordline_levels(std::uint32_t block_index, std::uint32_t wordline_index,
                                        const std::vector<std::uint8_t>& targets);

    // --- inspection -------------------------------------------------------

    std::uint32_t cell_level(std::uint32_t block, std::uint32_t wordline, std::uint32_t cell) const;
    std::vector<std::uint8_t> wordline_levels(std::uint32_t block, std::uint32_t wordline) const;
    std::uint64_t cell_wear_total() const;
    std::uint32_t cell_wear_max() const;
    std::uint32_t program_count(const PageAddress& addr) const;
    std::uint32_t erase_count(std::uint32_t block_index) const;
    bool retired(std::uint32_t block_index) const;

    // Level the program rule would move this cell to for a 0-bit on `slot`,
    // or nullopt when unreachable. Exposed so the sanitizer can pre-select
    // programmable parity bits.
    std::optional<std::uint32_t> reachable_level_for_zero_bit(const PageAddress& addr,
                                                              std::uint32_t cell) const;

    Rng& rng() { return rng_; }

private:
    struct BlockState {
        std::vector<std::uint8_t> levels;        // wordlines * cells
        std::vector<std::uint16_t> wear;         // cumulative increments per cell
        std::vector<std::uint16_t> program_count; // wordlines * slots
        std::uint32_t erase_count = 0;
        bool retired = false;
    };

    void check_block(std::uint32_t block_index) const;
    void check_addr(const PageAddress& addr) const;
    std::size_t cell_index(std::uint32_t wordline, std::uint32_t cell) const;

    // Applies per-cell increments to (block, wordline), updating wear, and
    // couples each increment into the facing cell of wordlines +/-1 with
    // probability p_disturb per increment. Returns neighbor increment count.
    std::uint64_t commit_increments(BlockState& blk, std::uint32_t wordline,
                                    const std::vector<std::uint8_t>& increments);

    GeometryConfig geom_;
    std::uint64_t seed_;
    std::vector<BlockState> blocks_;
    Rng rng_;
};

} // namespace sanisim
