#include "sanisim/ftl.hpp"

#include <algorithm>
#include <cmath>

namespace sanisim {

const char* scan_mode_name(ScanMode mode) {
    return mode == ScanMode::Decode ? "decode" : "raw";
}

void Ledger::append(std::uint64_t, const BitVec& data) {
    index_.insert(pack_bits(data));
    ++entries_;
}

bool Ledger::contains(const BitVec& data) const {
    return index_.count(pack_bits(data)) != 0;
}

Ftl::Ftl(std::shared_ptr<const ecc::Codec> codec, const GeometryConfig& geometry, FtlConfig config)
    : codec_(std::move(codec)), geom_(geometry), config_(config) {
    geom_.validate();
    if (static_cast<int>(geom_.main_bits_per_page) != codec_->layout.main_bits ||
        static_cast<int>(geom_.spare_bits_per_page) != codec_->layout.spare_bits)
        throw Error(ErrorKind::ConfigError, "codec layout does not match page geometry");
    if (!(config_.op_reserve_frac >= 0.0 && config_.op_reserve_frac <= 0.9))
        throw Error(ErrorKind::ConfigError, "op_reserve fraction must lie in [0, 0.9]");

    const std::uint64_t ppb = geom_.pages_per_block();
    free_threshold_ = config_.free_threshold_pages ? config_.free_threshold_pages
                                                   : static_cast<std::uint32_t>(2 * ppb);

    const auto op_blocks =
        static_cast<std::uint64_t>(std::llround(config_.op_reserve_frac * geom_.blocks_per_device));
    const std::uint64_t usable = (geom_.blocks_per_device - op_blocks) * ppb;
    const std::uint64_t headroom = std::max<std::uint64_t>(free_threshold_, ppb);
    if (usable <= headroom)
        throw Error(ErrorKind::ConfigError, "device too small for the over-provisioning reserve");
    logical_capacity_ = usable - headroom;

    p2l_.assign(geom_.total_pages(), -1);
    page_state_.assign(geom_.total_pages(), PageState::Free);
    free_pages_ = geom_.total_pages();
}

// Page ids follow allocation order inside a block: all slot-0 pages by
// wordline, then slot-1. Filling every low page slot of a block before its
// high slots keeps freshly written data on independent page images.
std::uint64_t Ftl::page_id(const PageAddress& addr) const {
    return (static_cast<std::uint64_t>(addr.block) * geom_.bits_per_cell +
            addr.page_slot) * geom_.wordlines_per_block + addr.wordline;
}

PageAddress Ftl::addr_of(std::uint64_t pid) const {
    PageAddress addr;
    addr.wordline = static_cast<std::uint32_t>(pid % geom_.wordlines_per_block);
    const std::uint64_t rest = pid / geom_.wordlines_per_block;
    addr.page_slot = static_cast<std::uint32_t>(rest % geom_.bits_per_cell);
    addr.block = static_cast<std::uint32_t>(rest / geom_.bits_per_cell);
    return addr;
}

PageAddress Ftl::allocate_page(Device& dev) {
    const std::uint32_t ppb = geom_.pages_per_block();
    while (true) {
        if (open_cursor_ < ppb && !dev.retired(open_block_)) {
            const std::uint64_t pid =
                static_cast<std::uint64_t>(open_block_) * ppb + open_cursor_;
            if (page_state_[pid] == PageState::Free) {
                ++open_cursor_;
                return addr_of(pid);
            }
            ++open_cursor_;
            continue;
        }
        // Open a fresh block: lowest-index fully free, not retired.
        bool found = false;
        for (std::uint32_t b = 0; b < geom_.blocks_per_device; ++b) {
            if (b == open_block_ || dev.retired(b)) continue;
            const std::uint64_t base = static_cast<std::uint64_t>(b) * ppb;
            bool all_free = true;
            for (std::uint32_t i = 0; i < ppb && all_free; ++i)
                all_free = page_state_[base + i] == PageState::Free;
            if (all_free) {
                open_block_ = b;
                open_cursor_ = 0;
                found = true;
                break;
            }
        }
        if (!found) throw Error(ErrorKind::DeviceFull, "no free page available");
    }
}

void Ftl::invalidate(std::uint64_t pid) {
    if (page_state_[pid] == PageState::Valid) --valid_pages_;
    page_state_[pid] = PageState::Invalid;
    p2l_[pid] = -1;
}

void Ftl::host_write(Device& dev, std::uint64_t lpa, const BitVec& main_data) {
    if (lpa >= logical_capacity_)
        throw Error(ErrorKind::IndexOutOfRange,
                    "lpa " + std::to_string(lpa) + " beyond logical capacity " +
                        std::to_string(logical_capacity_));
    if (main_data.size() != static_cast<std::size_t>(codec_->layout.main_bits))
        throw Error(ErrorKind::LengthMismatch, "payload must cover the main area");

    while (free_pages_ < free_threshold_) {
        try {
            collect_one_victim(dev);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::NoVictim) break;
            throw;
        }
    }

    const PageAddress addr = allocate_page(dev);
    const BitVec image = codec_->encode_page(main_data);
    dev.program_page(addr, image);

    const std::uint64_t pid = page_id(addr);
    page_state_[pid] = PageState::Valid;
    ++valid_pages_;
    --free_pages_;
    p2l_[pid] = static_cast<std::int64_t>(lpa);

    if (auto it = l2p_.find(lpa); it != l2p_.end()) invalidate(page_id(it->second));
    tombstones_.erase(lpa);
    l2p_[lpa] = addr;

    ledger_.append(lpa, main_data);
    waf_.host_bits_written += codec_->layout.main_bits;
    waf_.flash_bits_programmed += codec_->layout.main_bits;
}

BitVec Ftl::read_with_recovery(Device& dev, const PageAddress& addr) const {
    const int attempts = 1 + static_cast<int>(config_.recovery_retries);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        const BitVec image = dev.read_page_raw(addr);
        BitVec data;
        data.reserve(codec_->layout.main_bits);
        bool ok = true;
        for (int seg = 0; seg < codec_->layout.segments_per_page && ok; ++seg) {
            const auto outcome = codec_->code.decode(codec_->segment_received(image, seg));
            if (!outcome.corrected()) {
                ok = false;
                break;
            }
            data.insert(data.end(), outcome.data.begin(), outcome.data.end());
        }
        if (ok) return data;
    }
    throw Error(ErrorKind::ReadFail, "uncorrectable after " + std::to_string(attempts) + " reads");
}

BitVec Ftl::host_read(Device& dev, std::uint64_t lpa) {
    if (auto it = l2p_.find(lpa); it != l2p_.end()) return read_with_recovery(dev, it->second);
    // A securely deleted lpa still drives the physical read path so the
    // read-fail signal reaches the host in real time.
    if (auto it = tombstones_.find(lpa); it != tombstones_.end())
        return read_with_recovery(dev, it->second);
    throw Error(ErrorKind::Unmapped, "lpa " + std::to_string(lpa));
}

void Ftl::trim_offchip(std::uint64_t lpa_from, std::uint64_t lpa_to) {
    for (std::uint64_t lpa = lpa_from; lpa <= lpa_to; ++lpa) {
        if (auto it = l2p_.find(lpa); it != l2p_.end()) {
            invalidate(page_id(it->second));
            l2p_.erase(it);
        }
        tombstones_.erase(lpa);
        if (lpa == lpa_to) break; // lpa_to == UINT64_MAX guard
    }
}

void Ftl::drop_tombstones_in_block(std::uint32_t block) {
    for (auto it = tombstones_.begin(); it != tombstones_.end();) {
        if (it->second.block == block)
            it = tombstones_.erase(it);
        else
            ++it;
    }
}

GcReport Ftl::collect_one_victim(Device& dev) {
    const std::uint32_t ppb = geom_.pages_per_block();

    std::int64_t victim = -1;
    std::uint32_t victim_valid = UINT32_MAX;
    for (std::uint32_t b = 0; b < geom_.blocks_per_device; ++b) {
        if (b == open_block_ || dev.retired(b)) continue;
        const std::uint64_t base = static_cast<std::uint64_t>(b) * ppb;
        std::uint32_t valid = 0, invalid = 0;
        for (std::uint32_t i = 0; i < ppb; ++i) {
            const PageState st = page_state_[base + i];
            valid += st == PageState::Valid;
            invalid += st == PageState::Invalid;
        }
        if (invalid == 0) continue; // nothing reclaimable here
        if (valid < victim_valid) {
            victim = b;
            victim_valid = valid;
        }
    }
    if (victim < 0) throw Error(ErrorKind::NoVictim, "no block holds invalid pages");

    GcReport report;
    const std::uint64_t base = static_cast<std::uint64_t>(victim) * ppb;
    for (std::uint32_t i = 0; i < ppb; ++i) {
        const std::uint64_t pid = base + i;
        if (page_state_[pid] != PageState::Valid) continue;
        const PageAddress src = addr_of(pid);
        const std::uint64_t lpa = static_cast<std::uint64_t>(p2l_[pid]);

        BitVec image;
        try {
            image = codec_->encode_page(read_with_recovery(dev, src));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ReadFail) throw;
            image = dev.read_page_raw(src); // move the bits as they stand
        }

        const PageAddress dst = allocate_page(dev);
        dev.program_page(dst, image);
        const std::uint64_t dst_pid = page_id(dst);
        page_state_[dst_pid] = PageState::Valid;
        ++valid_pages_;
        --free_pages_;
        p2l_[dst_pid] = static_cast<std::int64_t>(lpa);
        invalidate(pid);
        l2p_[lpa] = dst;
        waf_.flash_bits_programmed += codec_->layout.main_bits;
        ++report.copies;
    }

    dev.erase_block(static_cast<std::uint32_t>(victim));
    for (std::uint32_t i = 0; i < ppb; ++i) {
        if (page_state_[base + i] != PageState::Free) {
            page_state_[base + i] = PageState::Free;
            ++free_pages_;
        }
        p2l_[base + i] = -1;
    }
    drop_tombstones_in_block(static_cast<std::uint32_t>(victim));
    ++report.erased_blocks;
    return report;
}

GcReport Ftl::garbage_collect(Device& dev) { return collect_one_victim(dev); }

double Ftl::waf() const {
    if (waf_.host_bits_written == 0) return 1.0;
    return static_cast<double>(waf_.flash_bits_programmed) /
           static_cast<double>(waf_.host_bits_written);
}

std::uint64_t Ftl::invalid_pages() const {
    return geom_.total_pages() - free_pages_ - valid_pages_;
}

PageState Ftl::page_state(const PageAddress& addr) const {
    return page_state_[page_id(addr)];
}

std::optional<PageAddress> Ftl::lookup(std::uint64_t lpa) const {
    if (auto it = l2p_.find(lpa); it != l2p_.end()) return it->second;
    return std::nullopt;
}

void Ftl::mark_deleted_on_chip(std::uint64_t lpa) {
    auto it = l2p_.find(lpa);
    if (it == l2p_.end()) throw Error(ErrorKind::Unmapped, "lpa " + std::to_string(lpa));
    const PageAddress addr = it->second;
    invalidate(page_id(addr));
    l2p_.erase(it);
    tombstones_[lpa] = addr;
}

ScanReport Ftl::forensic_scan(const Device& dev, ScanMode mode) const {
    std::vector<PageAddress> all;
    all.reserve(geom_.total_pages());
    for (std::uint64_t pid = 0; pid < geom_.total_pages(); ++pid) all.push_back(addr_of(pid));
    return forensic_scan_pages(dev, mode, all);
}

ScanReport Ftl::forensic_scan_pages(const Device& dev, ScanMode mode,
                                    const std::vector<PageAddress>& pages) const {
    ScanReport report;
    report.mode = mode;
    for (const PageAddress& addr : pages) {
        const BitVec image = dev.read_page_true(addr);
        bool hit = false;
        if (mode == ScanMode::Raw) {
            const BitVec main(image.begin(), image.begin() + codec_->layout.main_bits);
            hit = ledger_.contains(main);
        } else {
            BitVec data;
            data.reserve(codec_->layout.main_bits);
            bool ok = true;
            for (int seg = 0; seg < codec_->layout.segments_per_page && ok; ++seg) {
                const auto outcome = codec_->code.decode(codec_->segment_received(image, seg));
                if (!outcome.corrected()) {
                    ok = false;
                    break;
                }
                data.insert(data.end(), outcome.data.begin(), outcome.data.end());
            }
            hit = ok && ledger_.contains(data);
        }
        if (hit) {
            ++report.recoverable_pages;
            report.residue_addresses.push_back(addr);
        }
    }
    return report;
}

} // namespace sanisim
