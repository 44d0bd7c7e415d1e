#include "sanisim/nand.hpp"

#include <algorithm>

namespace sanisim {

void GeometryConfig::validate() const {
    auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidGeometry, what); };
    if (blocks_per_device == 0) bad("blocks_per_device must be >= 1");
    if (wordlines_per_block == 0) bad("wordlines_per_block must be >= 1");
    if (bits_per_cell != 1 && bits_per_cell != 2) bad("bits_per_cell must be 1 or 2");
    if (main_bits_per_page == 0) bad("main_bits_per_page must be >= 1");
    if (spare_bits_per_page == 0) bad("spare_bits_per_page must be >= 1");
    if (nop_limit == 0) bad("nop_limit must be >= 1");
    if (erase_endurance == 0) bad("erase_endurance must be >= 1");
    for (double p : {p_disturb, q_pulse, p_read_noise})
        if (!(p >= 0.0 && p <= 1.0)) bad("probabilities must lie in [0,1]");
}

// Gray map tables; adjacent levels differ in exactly one bit.
namespace {
constexpr std::uint8_t kMlcBits[4][2] = {{1, 1}, {0, 1}, {0, 0}, {1, 0}}; // [level][slot]
constexpr std::uint8_t kSlcBits[2] = {1, 0};
} // namespace

std::uint8_t gray_bit(std::uint32_t bits_per_cell, std::uint32_t level, std::uint32_t slot) {
    if (bits_per_cell == 1) return kSlcBits[level];
    return kMlcBits[level][slot];
}

std::uint32_t level_for_bits(std::uint32_t bits_per_cell, const std::uint8_t* bits) {
    if (bits_per_cell == 1) return bits[0] ? 0u : 1u;
    for (std::uint32_t lv = 0; lv < 4; ++lv)
        if (kMlcBits[lv][0] == bits[0] && kMlcBits[lv][1] == bits[1]) return lv;
    return 0; // unreachable: all four patterns are covered
}

Device::Device(const GeometryConfig& geometry, std::uint64_t seed)
    : geom_(geometry), seed_(seed), rng_(seed) {
    geom_.validate();
    const std::size_t cells = static_cast<std::size_t>(geom_.wordlines_per_block) * geom_.cells_per_wordline();
    const std::size_t counts = static_cast<std::size_t>(geom_.wordlines_per_block) * geom_.bits_per_cell;
    blocks_.resize(geom_.blocks_per_device);
    for (auto& blk : blocks_) {
        blk.levels.assign(cells, 0);
        blk.wear.assign(cells, 0);
        blk.program_count.assign(counts, 0);
    }
}

void Device::reseed(std::uint64_t seed) { rng_.reseed(seed); }

void Device::check_block(std::uint32_t block_index) const {
    if (block_index >= geom_.blocks_per_device)
        throw Error(ErrorKind::IndexOutOfRange, "block " + std::to_string(block_index));
}

void Device::check_addr(const PageAddress& addr) const {
    check_block(addr.block);
    if (addr.wordline >= geom_.wordlines_per_block)
        throw Error(ErrorKind::IndexOutOfRange, "wordline " + std::to_string(addr.wordline));
    if (addr.page_slot >= geom_.bits_per_cell)
        throw Error(ErrorKind::IndexOutOfRange, "page slot " + std::to_string(addr.page_slot));
}

std::size_t Device::cell_index(std::uint32_t wordline, std::uint32_t cell) const {
    return static_cast<std::size_t>(wordline) * geom_.cells_per_wordline() + cell;
}

void Device::erase_block(std::uint32_t block_index) {
    check_block(block_index);
    BlockState& blk = blocks_[block_index];
    if (blk.retired)
        throw Error(ErrorKind::BlockRetired, "block " + std::to_string(block_index));
    std::fill(blk.levels.begin(), blk.levels.end(), 0);
    std::fill(blk.program_count.begin(), blk.program_count.end(), 0);
    blk.erase_count += 1;
    if (blk.erase_count >= geom_.erase_endurance) blk.retired = true;
}

std::uint64_t Device::commit_increments(BlockState& blk, std::uint32_t wordline,
                                        const std::vector<std::uint8_t>& increments) {
    const std::uint32_t cells = geom_.cells_per_wordline();
    const std::uint32_t top = geom_.levels() - 1;
    for (std::uint32_t c = 0; c < cells; ++c) {
        if (!increments[c]) continue;
        const std::size_t idx = cell_index(wordline, c);
        blk.levels[idx] = static_cast<std::uint8_t>(blk.levels[idx] + increments[c]);
        blk.wear[idx] = static_cast<std::uint16_t>(blk.wear[idx] + increments[c]);
    }

    // Disturbance couples each level increment into the facing cell (same
    // column) of the adjacent wordlines, one saturating increment per hit.
    std::uint64_t neighbor_flips = 0;
    if (geom_.p_disturb > 0.0) {
        for (int d : {-1, +1}) {
            const std::int64_t nwl = static_cast<std::int64_t>(wordline) + d;
            if (nwl < 0 || nwl >= static_cast<std::int64_t>(geom_.wordlines_per_block)) continue;
            for (std::uint32_t c = 0; c < cells; ++c) {
                for (std::uint8_t u = 0; u < increments[c]; ++u) {
                    if (!rng_.bernoulli(geom_.p_disturb)) continue;
                    const std::size_t idx = cell_index(static_cast<std::uint32_t>(nwl), c);
                    if (blk.levels[idx] < top) {
                        blk.levels[idx] += 1;
                        blk.wear[idx] += 1;
                        ++neighbor_flips;
                    }
                }
            }
        }
    }
    return neighbor_flips;
}

PulseReport Device::program_page(const PageAddress& addr, const BitVec& data) {
    if (data.size() != geom_.page_bits())
        throw Error(ErrorKind::LengthMismatch, "page data length " + std::to_string(data.size()));
    return partial_program(addr, 0, data);
}

PulseReport Device::partial_program(const PageAddress& addr, std::uint32_t bit_offset,
                                    const BitVec& region_data) {
    check_addr(addr);
    if (bit_offset + region_data.size() > geom_.page_bits() || region_data.empty())
        throw Error(ErrorKind::RegionOutOfBounds,
                    "region [" + std::to_string(bit_offset) + ", +" +
                        std::to_string(region_data.size()) + ") of " +
                        std::to_string(geom_.page_bits()));

    BlockState& blk = blocks_[addr.block];
    if (blk.retired) throw Error(ErrorKind::BlockRetired, "block " + std::to_string(addr.block));

    const std::size_t pc_idx =
        static_cast<std::size_t>(addr.wordline) * geom_.bits_per_cell + addr.page_slot;
    if (blk.program_count[pc_idx] >= geom_.nop_limit)
        throw Error(ErrorKind::NopExceeded,
                    "page has been programmed " + std::to_string(blk.program_count[pc_idx]) +
                        " times since erase");

    // First pass: resolve every 0-bit to a target level; atomic on failure.
    const std::uint32_t cells = geom_.cells_per_wordline();
    std::vector<std::uint8_t> increments(cells, 0);
    for (std::uint32_t r = 0; r < region_data.size(); ++r) {
        if (region_data[r]) continue; // 1-bit = program inhibit
        const std::uint32_t c = bit_offset + r;
        const std::uint8_t cur = blk.levels[cell_index(addr.wordline, c)];
        std::uint8_t want[2];
        if (geom_.bits_per_cell == 1) {
            want[0] = 0;
        } else {
            want[addr.page_slot] = 0;
            want[1 - addr.page_slot] = gray_bit(2, cur, 1 - addr.page_slot);
        }
        const std::uint32_t target = level_for_bits(geom_.bits_per_cell, want);
        if (target < cur)
            throw Error(ErrorKind::NoReachableLevel,
                        "cell " + std::to_string(c) + " at level " + std::to_string(cur) +
                            " cannot reach a 0-bit on slot " + std::to_string(addr.page_slot));
        increments[c] = static_cast<std::uint8_t>(target - cur);
    }

    PulseReport report;
    for (std::uint8_t inc : increments) {
        report.exposure += inc;
        report.pulses = std::max<std::uint64_t>(report.pulses, inc);
    }
    report.wear_delta = report.exposure;
    report.neighbor_flips = commit_increments(blk, addr.wordline, increments);
    blk.program_count[pc_idx] += 1;
    return report;
}

BitVec Device::read_page_true(const PageAddress& addr) const {
    check_addr(addr);
    const BlockState& blk = blocks_[addr.block];
    const std::uint32_t cells = geom_.cells_per_wordline();
    BitVec out(cells);
    for (std::uint32_t c = 0; c < cells; ++c)
        out[c] = gray_bit(geom_.bits_per_cell, blk.levels[cell_index(addr.wordline, c)], addr.page_slot);
    return out;
}

BitVec Device::read_page_raw(const PageAddress& addr) {
    BitVec out = read_page_true(addr);
    rng_.sample_bernoulli_positions(out.size(), geom_.p_read_noise,
                                    [&](std::uint64_t i) { out[i] ^= 1; });
    return out;
}

PulseReport Device::apply_deletion_pulses(std::uint32_t block_index, std::uint32_t wordline_index,
                                          std::uint32_t n,
                                          std::uint32_t cell_begin, std::uint32_t cell_end) {
    check_block(block_index);
    if (wordline_index >= geom_.wordlines_per_block)
        throw Error(ErrorKind::IndexOutOfRange, "wordline " + std::to_string(wordline_index));
    BlockState& blk = blocks_[block_index];
    if (blk.retired) throw Error(ErrorKind::BlockRetired, "block " + std::to_string(block_index));

    const std::uint32_t cells = geom_.cells_per_wordline();
    cell_end = std::min(cell_end, cells);
    if (cell_begin > cell_end)
        throw Error(ErrorKind::RegionOutOfBounds, "pulse cell range");

    const std::uint32_t top = geom_.levels() - 1;
    PulseReport report;
    report.pulses = n;
    std::vector<std::uint8_t> increments(cells, 0);
    for (std::uint32_t pulse = 0; pulse < n; ++pulse) {
        std::fill(increments.begin(), increments.end(), 0);
        for (std::uint32_t c = cell_begin; c < cell_end; ++c) {
            const std::size_t idx = cell_index(wordline_index, c);
            if (blk.levels[idx] < top && rng_.bernoulli(geom_.q_pulse)) {
                increments[c] = 1;
                report.exposure += 1;
            }
        }
        report.neighbor_flips += commit_increments(blk, wordline_index, increments);
    }
    report.wear_delta = report.exposure;
    return report;
}

PulseReport Device::program_wordline_levels(std::uint32_t block_index, std::uint32_t wordline_index,
                                            const std::vector<std::uint8_t>& targets) {
    check_block(block_index);
    if (wordline_index >= geom_.wordlines_per_block)
        throw Error(ErrorKind::IndexOutOfRange, "wordline " + std::to_string(wordline_index));
    const std::uint32_t cells = geom_.cells_per_wordline();
    if (targets.size() != cells)
        throw Error(ErrorKind::LengthMismatch, "targets length != cells per wordline");

    BlockState& blk = blocks_[block_index];
    if (blk.retired) throw Error(ErrorKind::BlockRetired, "block " + std::to_string(block_index));

    // A wordline-wide program touches every page slot once.
    const std::size_t pc_base = static_cast<std::size_t>(wordline_index) * geom_.bits_per_cell;
    for (std::uint32_t s = 0; s < geom_.bits_per_cell; ++s)
        if (blk.program_count[pc_base + s] >= geom_.nop_limit)
            throw Error(ErrorKind::NopExceeded, "slot " + std::to_string(s) + " at NOP limit");

    const std::uint32_t top = geom_.levels() - 1;
    std::vector<std::uint8_t> increments(cells, 0);
    for (std::uint32_t c = 0; c < cells; ++c) {
        const std::uint8_t cur = blk.levels[cell_index(wordline_index, c)];
        if (targets[c] > top)
            throw Error(ErrorKind::IndexOutOfRange, "target level above top state");
        if (targets[c] < cur)
            throw Error(ErrorKind::NoReachableLevel,
                        "cell " + std::to_string(c) + " target below current level");
        increments[c] = static_cast<std::uint8_t>(targets[c] - cur);
    }

    PulseReport report;
    for (std::uint8_t inc : increments) {
        report.exposure += inc;
        report.pulses = std::max<std::uint64_t>(report.pulses, inc);
    }
    report.wear_delta = report.exposure;
    report.neighbor_flips = commit_increments(blk, wordline_index, increments);
    for (std::uint32_t s = 0; s < geom_.bits_per_cell; ++s)
        blk.program_count[pc_base + s] += 1;
    return report;
}

std::uint32_t Device::cell_level(std::uint32_t block, std::uint32_t wordline, std::uint32_t cell) const {
    check_block(block);
    return blocks_[block].levels[cell_index(wordline, cell)];
}

std::vector<std::uint8_t> Device::wordline_levels(std::uint32_t block, std::uint32_t wordline) const {
    check_block(block);
    if (wordline >= geom_.wordlines_per_block)
        throw Error(ErrorKind::IndexOutOfRange, "wordline " + std::to_string(wordline));
    const auto first = blocks_[block].levels.begin() + cell_index(wordline, 0);
    return {first, first + geom_.cells_per_wordline()};
}

std::uint64_t Device::cell_wear_total() const {
    std::uint64_t total = 0;
    for (const auto& blk : blocks_)
        for (std::uint16_t w : blk.wear) total += w;
    return total;
}

std::uint32_t Device::cell_wear_max() const {
    std::uint32_t top = 0;
    for (const auto& blk : blocks_)
        for (std::uint16_t w : blk.wear) top = std::max<std::uint32_t>(top, w);
    return top;
}

std::uint32_t Device::program_count(const PageAddress& addr) const {
    check_addr(addr);
    return blocks_[addr.block]
        .program_count[static_cast<std::size_t>(addr.wordline) * geom_.bits_per_cell + addr.page_slot];
}

std::uint32_t Device::erase_count(std::uint32_t block_index) const {
    check_block(block_index);
    return blocks_[block_index].erase_count;
}

bool Device::retired(std::uint32_t block_index) const {
    check_block(block_index);
    return blocks_[block_index].retired;
}

std::optional<std::uint32_t> Device::reachable_level_for_zero_bit(const PageAddress& addr,
                                                                  std::uint32_t cell) const {
    check_addr(addr);
    const std::uint8_t cur = blocks_[addr.block].levels[cell_index(addr.wordline, cell)];
    std::uint8_t want[2];
    if (geom_.bits_per_cell == 1) {
        want[0] = 0;
    } else {
        want[addr.page_slot] = 0;
        want[1 - addr.page_slot] = gray_bit(2, cur, 1 - addr.page_slot);
    }
    const std::uint32_t target = level_for_bits(geom_.bits_per_cell, want);
    if (target < cur) return std::nullopt;
    return target;
}

} // namespace sanisim
