#pragma once

#include <span>
#include <vector>

#include "core/types.hpp"

namespace mbv {

enum class TickOrderPolicy {
    sort_if_needed,  // reorder ascending by time
    require_sorted,  // UnsortedInput when out of order
};

// Checks every tick for strictly positive, finite value and volume and
// returns the stream sorted by time. Ties keep a deterministic order
// (security, value, volume) so downstream bucket sums are order-fixed.
std::vector<TradeTick> validate_ticks(
    std::vector<TradeTick> ticks,
    TickOrderPolicy policy = TickOrderPolicy::sort_if_needed);

enum class AlignMode {
    strict,   // every security needs a trade in every bucket
    lenient,  // buckets empty for some security merge into their left
              // neighbor (leading empties merge right); N shrinks
};

// One effective grid bucket after lenient merging: the original bucket
// indices [first, last] it covers (0-based, inclusive).
struct GridGroup {
    int first = 0;
    int last = 0;
};

struct AlignmentResult {
    AveragingWindow window;        // as requested
    int requested_buckets = 0;
    int effective_buckets = 0;
    std::vector<GridGroup> groups;       // size == effective_buckets
    std::vector<AlignedSeries> series;   // portfolio security order

    bool merged() const noexcept { return effective_buckets != requested_buckets; }
};

// Buckets the validated ticks of the given securities onto the window grid.
// Bucket i covers [begin + i*eps, begin + (i+1)*eps); the last bucket is
// closed on the right. Ticks outside the window or for other securities are
// ignored.
AlignmentResult align_to_grid(std::span<const TradeTick> ticks,
                              const AveragingWindow& window,
                              std::span<const SecurityId> securities,
                              AlignMode mode = AlignMode::strict);

}  // namespace mbv
