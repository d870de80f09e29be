#include "core/trade_model.hpp"

#include <algorithm>
#include <random>

#include "doctest.h"

#include "core/errors.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mbv;

namespace {

AveragingWindow window_over(double begin, double end, int buckets) {
    return AveragingWindow::from_extent(begin, end, buckets);
}

}  // namespace

TEST_CASE("validate_ticks accepts positive trades and keeps implied price") {
    std::vector<TradeTick> ticks{{1.0, "A", 10.0, 5.0}};
    const auto out = validate_ticks(ticks);
    REQUIRE(out.size() == 1);
    CHECK(out[0].price() == doctest::Approx(2.0));
}

TEST_CASE("validate_ticks rejects nonpositive fields") {
    CHECK_MBV_ERROR(ErrorCode::nonpositive_field,
                    validate_ticks({{1.0, "A", 0.0, 5.0}}));
    CHECK_MBV_ERROR(ErrorCode::nonpositive_field,
                    validate_ticks({{1.0, "A", 10.0, -1.0}}));
    CHECK_MBV_ERROR(ErrorCode::nonpositive_field,
                    validate_ticks({{1.0, "A", 10.0, 0.0}}));
}

TEST_CASE("validate_ticks sorting policies") {
    std::vector<TradeTick> ticks{{2.0, "A", 1.0, 1.0}, {1.0, "A", 2.0, 1.0}};
    const auto sorted = validate_ticks(ticks);
    CHECK(sorted[0].time == 1.0);
    CHECK(sorted[1].time == 2.0);
    CHECK_MBV_ERROR(ErrorCode::unsorted_input,
                    validate_ticks(ticks, TickOrderPolicy::require_sorted));
}

TEST_CASE("align_to_grid splits ticks by sub-interval") {
    std::vector<TradeTick> ticks{{1.0, "A", 2.0, 1.0},
                                 {2.0, "A", 4.0, 1.0},
                                 {3.0, "A", 6.0, 1.0},
                                 {4.0, "A", 8.0, 1.0}};
    const std::vector<SecurityId> secs{"A"};
    const auto res = align_to_grid(ticks, window_over(0.5, 4.5, 2), secs);
    REQUIRE(res.series.size() == 1);
    REQUIRE(res.series[0].buckets.size() == 2);
    CHECK(res.series[0].buckets[0].value == 6.0);
    CHECK(res.series[0].buckets[0].volume == 2.0);
    CHECK(res.series[0].buckets[1].value == 14.0);
    CHECK(res.series[0].buckets[1].volume == 2.0);
    CHECK(res.effective_buckets == 2);
}

TEST_CASE("align_to_grid bucket boundaries: half-open, last closed") {
    // boundary at 2.0 belongs to the second bucket; window end at 4.0 belongs
    // to the last bucket
    std::vector<TradeTick> ticks{{0.0, "A", 1.0, 1.0},
                                 {2.0, "A", 1.0, 1.0},
                                 {4.0, "A", 1.0, 1.0}};
    const std::vector<SecurityId> secs{"A"};
    const auto res = align_to_grid(ticks, window_over(0.0, 4.0, 2), secs);
    CHECK(res.series[0].buckets[0].volume == 1.0);
    CHECK(res.series[0].buckets[1].volume == 2.0);
}

TEST_CASE("align_to_grid ignores ticks outside the window and other ids") {
    std::vector<TradeTick> ticks{{-1.0, "A", 1.0, 1.0}, {0.5, "A", 2.0, 1.0},
                                 {1.5, "A", 3.0, 1.0},  {9.0, "A", 7.0, 1.0},
                                 {0.6, "B", 5.0, 1.0},  {1.6, "B", 5.0, 1.0}};
    const std::vector<SecurityId> secs{"A"};
    const auto res = align_to_grid(ticks, window_over(0.0, 2.0, 2), secs);
    CHECK(res.series[0].buckets[0].value == 2.0);
    CHECK(res.series[0].buckets[1].value == 3.0);
}

TEST_CASE("align_to_grid strict mode reports the empty bucket") {
    std::vector<TradeTick> ticks{{0.5, "A", 1.0, 1.0}};  // nothing in bucket 2
    const std::vector<SecurityId> secs{"A"};
    CHECK_MBV_ERROR(ErrorCode::empty_bucket,
                    align_to_grid(ticks, window_over(0.0, 2.0, 2), secs));
}

TEST_CASE("align_to_grid lenient mode merges leftward and shrinks N") {
    std::vector<TradeTick> ticks{{0.5, "A", 1.0, 1.0},
                                 {1.5, "A", 2.0, 2.0},
                                 // bucket 3 empty
                                 {3.5, "A", 4.0, 1.0}};
    const std::vector<SecurityId> secs{"A"};
    const auto res = align_to_grid(ticks, window_over(0.0, 4.0, 4), secs,
                                   AlignMode::lenient);
    CHECK(res.requested_buckets == 4);
    CHECK(res.effective_buckets == 3);
    CHECK(res.merged());
    REQUIRE(res.series[0].buckets.size() == 3);
    // bucket 3 merged into bucket 2's group
    CHECK(res.series[0].buckets[1].value == 2.0);
    CHECK(res.series[0].buckets[2].value == 4.0);
    CHECK(res.groups[2].first == 3);

    SUBCASE("a leading empty bucket folds into the first full one") {
        std::vector<TradeTick> lead{{1.5, "A", 2.0, 2.0},
                                    {2.5, "A", 3.0, 1.0},
                                    {3.5, "A", 4.0, 1.0}};
        const auto r2 =
            align_to_grid(lead, window_over(0.0, 4.0, 4), secs,
                          AlignMode::lenient);
        CHECK(r2.effective_buckets == 3);
        CHECK(r2.groups[0].first == 0);
        CHECK(r2.groups[0].last == 1);
    }
}

TEST_CASE("align_to_grid lenient cannot rescue an always-empty security") {
    std::vector<TradeTick> ticks{{0.5, "A", 1.0, 1.0}, {1.5, "A", 1.0, 1.0}};
    const std::vector<SecurityId> secs{"A", "B"};
    CHECK_MBV_ERROR(ErrorCode::empty_bucket,
                    align_to_grid(ticks, window_over(0.0, 2.0, 2), secs,
                                  AlignMode::lenient));
}

TEST_CASE("alignment conserves integer totals exactly") {
    // integer values keep all sums exact, so conservation is bit-exact and
    // independent of summation order
    oracle::Rand rand(7001);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = rand.uniform_int(2, 8);
        std::vector<TradeTick> ticks;
        double total_value = 0.0;
        double total_volume = 0.0;
        for (int b = 0; b < n; ++b)
            for (int k = 0, count = rand.uniform_int(1, 6); k < count; ++k) {
                const double value = rand.uniform_int(1, 1000);
                const double volume = rand.uniform_int(1, 100);
                ticks.push_back(
                    {static_cast<double>(b) + 0.5 * (k + 1) / (count + 1),
                     "A", value, volume});
                total_value += value;
                total_volume += volume;
            }
        const std::vector<SecurityId> secs{"A"};
        const auto res = align_to_grid(
            ticks, window_over(0.0, static_cast<double>(n), n), secs);
        double sum_value = 0.0;
        double sum_volume = 0.0;
        for (const Bucket& b : res.series[0].buckets) {
            sum_value += b.value;
            sum_volume += b.volume;
        }
        CHECK(sum_value == total_value);
        CHECK(sum_volume == total_volume);
    }
}

TEST_CASE("alignment is permutation-invariant within buckets") {
    oracle::Rand rand(7002);
    std::vector<TradeTick> ticks;
    for (int b = 0; b < 5; ++b)
        for (int k = 0; k < 7; ++k)
            ticks.push_back({b + 0.1 + 0.1 * k, "A",
                             rand.uniform(0.001, 50.0),
                             rand.uniform(0.001, 9.0)});
    const std::vector<SecurityId> secs{"A"};
    const auto window = window_over(0.0, 5.0, 5);
    const auto base = align_to_grid(ticks, window, secs);

    std::mt19937_64 shuffler(99);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(ticks.begin(), ticks.end(), shuffler);
        const auto shuffled = align_to_grid(ticks, window, secs);
        for (std::size_t i = 0; i < base.series[0].buckets.size(); ++i) {
            CHECK(shuffled.series[0].buckets[i].value ==
                  base.series[0].buckets[i].value);
            CHECK(shuffled.series[0].buckets[i].volume ==
                  base.series[0].buckets[i].volume);
        }
    }
}

TEST_CASE("bucket implied price stays inside the tick price range") {
    oracle::Rand rand(7003);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<TradeTick> ticks;
        double lo = 1e300;
        double hi = 0.0;
        for (int k = 0; k < 9; ++k) {
            const double volume = rand.uniform(0.1, 20.0);
            const double price = rand.uniform(0.5, 100.0);
            lo = std::min(lo, price);
            hi = std::max(hi, price);
            ticks.push_back({0.1 + 0.05 * k, "A", price * volume, volume});
        }
        ticks.push_back({1.5, "A", 1.0, 1.0});  // second bucket occupant
        const std::vector<SecurityId> secs{"A"};
        const auto res = align_to_grid(ticks, window_over(0.0, 2.0, 2), secs);
        const double p = res.series[0].buckets[0].price();
        CHECK(p >= lo * (1.0 - 1e-12));
        CHECK(p <= hi * (1.0 + 1e-12));
    }
}

TEST_CASE("averaging window validation") {
    CHECK_MBV_ERROR(ErrorCode::degenerate_series,
                    AveragingWindow::from_extent(0.0, 1.0, 1));
    CHECK_MBV_ERROR(ErrorCode::invalid_argument,
                    AveragingWindow::from_extent(1.0, 1.0, 4));
}
