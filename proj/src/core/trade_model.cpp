#include "core/trade_model.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "core/errors.hpp"
#include "core/sum.hpp"

namespace mbv {

namespace {

bool tick_less(const TradeTick& a, const TradeTick& b) {
    return std::tie(a.time, a.security, a.value, a.volume) <
           std::tie(b.time, b.security, b.value, b.volume);
}

// Bucket index for a tick time, with the last bucket closed on the right.
int bucket_index(double time, const AveragingWindow& w) {
    if (time < w.begin() || time > w.end()) return -1;
    const double eps = w.bucket_seconds();
    int idx = static_cast<int>(std::floor((time - w.begin()) / eps));
    if (idx >= w.bucket_count) idx = w.bucket_count - 1;  // right edge
    if (idx < 0) idx = 0;
    return idx;
}

}  // namespace

std::vector<TradeTick> validate_ticks(std::vector<TradeTick> ticks,
                                      TickOrderPolicy policy) {
    for (std::size_t i = 0; i < ticks.size(); ++i) {
        const TradeTick& t = ticks[i];
        if (!std::isfinite(t.time))
            raise(ErrorCode::nonpositive_field,
                  "tick " + std::to_string(i) + ": non-finite time");
        if (!(t.value > 0.0) || !std::isfinite(t.value))
            raise(ErrorCode::nonpositive_field,
                  "tick " + std::to_string(i) + " ('" + t.security +
                      "'): value must be > 0");
        if (!(t.volume > 0.0) || !std::isfinite(t.volume))
            raise(ErrorCode::nonpositive_field,
                  "tick " + std::to_string(i) + " ('" + t.security +
                      "'): volume must be > 0");
        const double price = t.value / t.volume;
        if (!(price > 0.0) || !std::isfinite(price))
            raise(ErrorCode::nonpositive_field,
                  "tick " + std::to_string(i) + " ('" + t.security +
                      "'): implied price is not finite and positive");
    }
    const bool sorted = std::is_sorted(
        ticks.begin(), ticks.end(),
        [](const TradeTick& a, const TradeTick& b) { return a.time < b.time; });
    if (!sorted) {
        if (policy == TickOrderPolicy::require_sorted)
            raise(ErrorCode::unsorted_input, "ticks are not sorted by time");
        std::stable_sort(ticks.begin(), ticks.end(), tick_less);
    }
    return ticks;
}

AlignmentResult align_to_grid(std::span<const TradeTick> ticks,
                              const AveragingWindow& window,
                              std::span<const SecurityId> securities,
                              AlignMode mode) {
    window.validate();
    if (securities.empty())
        raise(ErrorCode::invalid_argument, "no securities to align");

    const int n = window.bucket_count;
    const std::size_t j_count = securities.size();

    std::unordered_map<SecurityId, std::size_t> sec_index;
    for (std::size_t j = 0; j < j_count; ++j) sec_index.emplace(securities[j], j);
    if (sec_index.size() != j_count)
        raise(ErrorCode::invalid_argument, "duplicate security in alignment set");

    // Collect ticks per (security, bucket) keeping the validated order, so
    // the per-bucket sums are order-fixed regardless of caller threading.
    std::vector<std::vector<std::vector<const TradeTick*>>> cells(
        j_count, std::vector<std::vector<const TradeTick*>>(n));
    for (const TradeTick& t : ticks) {
        auto it = sec_index.find(t.security);
        if (it == sec_index.end()) continue;
        const int b = bucket_index(t.time, window);
        if (b < 0) continue;
        cells[it->second][static_cast<std::size_t>(b)].push_back(&t);
    }

    // Grid occupancy: a bucket is full when every security traded in it.
    std::vector<bool> full(n, true);
    for (int i = 0; i < n; ++i)
        for (std::size_t j = 0; j < j_count; ++j)
            if (cells[j][static_cast<std::size_t>(i)].empty()) {
                full[static_cast<std::size_t>(i)] = false;
                break;
            }

    std::vector<GridGroup> groups;
    if (mode == AlignMode::strict) {
        for (int i = 0; i < n; ++i)
            if (!full[static_cast<std::size_t>(i)]) {
                // report the first offending (security, bucket) pair
                for (std::size_t j = 0; j < j_count; ++j)
                    if (cells[j][static_cast<std::size_t>(i)].empty())
                        raise(ErrorCode::empty_bucket,
                              "security '" + securities[j] + "' has no trades in bucket " +
                                  std::to_string(i + 1) + " of " + std::to_string(n));
            }
        groups.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) groups.push_back({i, i});
    } else {
        // Merge each empty bucket into its left neighbor; leading empties
        // fold into the first full bucket's group.
        int first_full = -1;
        for (int i = 0; i < n; ++i)
            if (full[static_cast<std::size_t>(i)]) {
                first_full = i;
                break;
            }
        if (first_full < 0)
            raise(ErrorCode::empty_bucket,
                  "no bucket has trades for every security");
        groups.push_back({0, first_full});
        for (int i = first_full + 1; i < n; ++i) {
            if (full[static_cast<std::size_t>(i)])
                groups.push_back({i, i});
            else
                groups.back().last = i;
        }
        if (groups.size() < 2)
            raise(ErrorCode::degenerate_series,
                  "lenient merging left fewer than 2 buckets");
    }

    AlignmentResult result;
    result.window = window;
    result.requested_buckets = n;
    result.effective_buckets = static_cast<int>(groups.size());
    result.groups = std::move(groups);
    result.series.reserve(j_count);

    for (std::size_t j = 0; j < j_count; ++j) {
        AlignedSeries series;
        series.security = securities[j];
        series.buckets.reserve(result.groups.size());
        for (const GridGroup& g : result.groups) {
            // Order-fixed reduction: sums do not depend on input permutation.
            std::vector<const TradeTick*> group_ticks;
            for (int i = g.first; i <= g.last; ++i)
                for (const TradeTick* t : cells[j][static_cast<std::size_t>(i)])
                    group_ticks.push_back(t);
            std::sort(group_ticks.begin(), group_ticks.end(),
                      [](const TradeTick* a, const TradeTick* b) {
                          return tick_less(*a, *b);
                      });
            KahanSum value;
            KahanSum volume;
            for (const TradeTick* t : group_ticks) {
                value.add(t->value);
                volume.add(t->volume);
            }
            series.buckets.push_back({value.value(), volume.value()});
        }
        result.series.push_back(std::move(series));
    }
    return result;
}

}  // namespace mbv
