#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sanisim/ecc.hpp"
#include "sanisim/nand.hpp"

namespace sanisim {

enum class PageState : std::uint8_t { Free, Valid, Invalid };

struct FtlConfig {
    // Pages of free headroom below which writes trigger collection.
    // 0 = default (two blocks' worth).
    std::uint32_t free_threshold_pages = 0;
    double op_reserve_frac = 0.125; // physical blocks hidden from the host
    std::uint32_t recovery_retries = 5;
};

struct WafCounters {
    std::uint64_t host_bits_written = 0;
    std::uint64_t flash_bits_programmed = 0; // includes GC copies
};

struct GcReport {
    std::uint32_t copies = 0;
    std::uint32_t erased_blocks = 0;
};

enum class ScanMode { Decode, Raw };

const char* scan_mode_name(ScanMode mode);

struct ScanReport {
    ScanMode mode = ScanMode::Decode;
    std::uint64_t recoverable_pages = 0;
    std::vector<PageAddress> residue_addresses;
};

// Shadow log of everything the host ever wrote. Measurement instrumentation,
// not device state: the forensic scanner needs ground truth to decide whether
// a physical page still holds data the host once stored.
class Ledger {
public:
    void append(std::uint64_t lpa, const BitVec& data);
    bool contains(const BitVec& data) const;
    std::size_t size() const { return entries_; }

private:
    std::size_t entries_ = 0;
    std::unordered_set<std::string> index_; // packed payloads
};

// Page-mapping FTL over one Device. Plain value: copying an (Ftl, Device)
// pair snapshots the whole stack for scheme comparison.
class Ftl {
public:
    Ftl(std::shared_ptr<const ecc::Codec> codec, const GeometryConfig& geometry, FtlConfig config);

    // Encodes segment parity, programs a free page, remaps the lpa and logs
    // the payload. Collects garbage first when free space is below threshold.
    void host_write(Device& dev, std::uint64_t lpa, const BitVec& main_data);

    // Decodes the mapped page with up to R recovery re-reads. Throws
    // Error(Unmapped) or Error(ReadFail).
    BitVec host_read(Device& dev, std::uint64_t lpa);

    // Metadata-only deletion: unmaps and invalidates, never touches cells.
    // Unmapped lpas in the range are skipped.
    void trim_offchip(std::uint64_t lpa_from, std::uint64_t lpa_to);

    // Reclaims the block with the fewest valid pages (lowest index on ties):
    // valid pages move to fresh pages with re-encoded parity, then the victim
    // is erased. Throws Error(NoVictim) when no block has an invalid page.
    GcReport garbage_collect(Device& dev);

    double waf() const;

    // Sweeps every physical page (any state, over-provisioned space included)
    // against the ledger. Decode mode requires all segments to correct and the
    // decoded payload to match a logged write; raw mode compares stored main
    // bits exactly. Reads the true cell state: a forensic lab read, not a
    // noisy device read.
    ScanReport forensic_scan(const Device& dev, ScanMode mode) const;

    // Same check restricted to the given physical pages.
    ScanReport forensic_scan_pages(const Device& dev, ScanMode mode,
                                   const std::vector<PageAddress>& pages) const;

    // --- surface for the sanitizer -----------------------------------------

    std::optional<PageAddress> lookup(std::uint64_t lpa) const;

    // Marks a code-modulated-deleted page: invalid, unmapped, but remembered
    // so a host read of the stale lpa still drives the physical read path and
    // surfaces the read-fail signal (until the block is erased).
    void mark_deleted_on_chip(std::uint64_t lpa);

    BitVec read_with_recovery(Device& dev, const PageAddress& addr) const; // throws ReadFail

    const Ledger& ledger() const { return ledger_; }
    const ecc::Codec& codec() const { return *codec_; }
    std::shared_ptr<const ecc::Codec> codec_ptr() const { return codec_; }
    std::uint32_t recovery_retries() const { return config_.recovery_retries; }

    // --- accounting ---------------------------------------------------------

    std::uint64_t logical_capacity() const { return logical_capacity_; }
    std::uint64_t free_pages() const { return free_pages_; }
    std::uint64_t valid_pages() const { return valid_pages_; }
    std::uint64_t invalid_pages() const;
    std::uint32_t free_threshold() const { return free_threshold_; }
    const WafCounters& waf_counters() const { return waf_; }
    PageState page_state(const PageAddress& addr) const;

private:
    std::uint64_t page_id(const PageAddress& addr) const;
    PageAddress addr_of(std::uint64_t pid) const;
    PageAddress allocate_page(Device& dev); // throws DeviceFull
    void invalidate(std::uint64_t pid);
    GcReport collect_one_victim(Device& dev); // throws NoVictim
    void drop_tombstones_in_block(std::uint32_t block);

    std::shared_ptr<const ecc::Codec> codec_;
    GeometryConfig geom_;
    FtlConfig config_;
    std::uint32_t free_threshold_ = 0;
    std::uint64_t logical_capacity_ = 0;

    std::map<std::uint64_t, PageAddress> l2p_;
    std::map<std::uint64_t, PageAddress> tombstones_; // on-chip deleted lpas
    std::vector<std::int64_t> p2l_;                   // pid -> lpa, -1 = none
    std::vector<PageState> page_state_;
    std::uint64_t free_pages_ = 0;
    std::uint64_t valid_pages_ = 0;

    std::uint32_t open_block_ = 0;
    std::uint32_t open_cursor_ = 0; // next in-block page ordinal (slot-major)

    WafCounters waf_;
    Ledger ledger_;
};

} // namespace sanisim
