#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sanisim/ftl.hpp"
#include "sanisim/nand.hpp"

namespace sanisim {

// The five page-level deletion schemes under comparison.
enum class Scheme { Scrub, PartialOverwrite, DownBit, DeletionPulse, CodeModulated };

const char* scheme_name(Scheme scheme);
const std::vector<Scheme>& all_schemes();

enum class Verification { NotVerified, ReadFailConfirmed };

const char* verification_name(Verification v);

struct DeletionReport {
    Scheme scheme = Scheme::Scrub;
    std::uint64_t pulses = 0;
    std::uint64_t exposure = 0;
    std::uint64_t neighbor_flips = 0;
    std::uint64_t wear_delta = 0;
    std::uint32_t nop_consumed = 0;
    Verification verification = Verification::NotVerified;
    bool fallback_used = false;
};

// Drives every cell of the wordline to the top level. Consumes one NOP unit
// per page slot.
DeletionReport scrub_page(Device& dev, const PageAddress& addr);

// Programs each cell to a uniformly drawn reachable level in [current, top].
DeletionReport partial_overwrite_page(Device& dev, const PageAddress& addr);

// Collapses the wordline toward single-level state: cells at level 0 move to
// level 1, everything else is inhibited. Requires an MLC geometry.
DeletionReport down_bit_program_page(Device& dev, const PageAddress& addr);

// Applies wordline pulses one at a time until a page read is no longer
// recoverable (a segment fails to decode, or the decoded payload matches no
// logged write). Does not consume NOP. Throws Error(PulseBudgetExhausted)
// when the page still recovers after max_pulses.
DeletionReport deletion_pulse_page(Device& dev, const Ftl& ftl, const PageAddress& addr,
                                   std::uint32_t max_pulses);

std::uint32_t default_max_pulses(const GeometryConfig& geom); // 2 * (levels - 1)

// The proposed scheme: crafts per-segment parity masks from a page read,
// partial-programs the spare region with them, programs the main area with
// all-1s (lowest-state) data, then re-reads until every segment is
// uncorrectable — falling back to spare-region pulses when needed. On
// success the lpa is unmapped (invalid + tombstoned) and the report carries
// ReadFailConfirmed. Throws Error(MaskInfeasibleAndFallbackFailed) when the
// page still decodes after the pulse budget, Error(Unmapped) for unknown lpas.
DeletionReport code_modulated_delete(Ftl& ftl, Device& dev, std::uint64_t lpa);

// True iff no read of the page within the recovery budget yields a full
// decode matching the ledger. Pure measurement: reads only.
bool verify_deletion(Device& dev, const Ftl& ftl, const PageAddress& addr);

struct SchemeRow {
    Scheme scheme = Scheme::Scrub;
    std::uint32_t trials = 0;
    std::uint32_t deletions_attempted = 0;
    std::uint32_t deletions_succeeded = 0;
    double median_exposure = 0;
    double median_pulses = 0;
    double median_wear_delta = 0;
    double median_neighbor_flips = 0;
    double median_nop_consumed = 0;
    std::uint32_t readfail_confirmed = 0; // deletion calls verified in-call
    std::uint32_t fallback_count = 0;
    double median_residue_decode = 0;     // targeted pages still recoverable
    double median_residue_raw = 0;
    std::map<std::string, std::uint32_t> failures; // error kind -> count
};

struct ComparisonTable {
    std::vector<std::uint64_t> target_lpas;
    std::uint32_t trials = 0;
    std::vector<SchemeRow> rows; // one per scheme, enum order
};

// Runs every scheme x trial on bit-exact clones of (ftl, device). Each trial
// reseeds the clone with a seed derived from the device seed and the trial
// index, identically across schemes, so rows start from the same snapshot
// and stay comparable. Scheme failures are recorded per row, not thrown.
ComparisonTable compare_schemes(const Ftl& base_ftl, const Device& base_device,
                                const std::vector<std::uint64_t>& target_lpas,
                                std::uint32_t trials);

} // namespace sanisim
