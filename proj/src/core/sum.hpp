#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace mbv {

// Neumaier-compensated accumulator. Keeps the volume-conservation and
// decomposition identities tight (relative 1e-12) for series up to ~1e6
// buckets, where a plain left-to-right sum would drift.
class KahanSum {
public:
    KahanSum() = default;
    explicit KahanSum(double initial) : sum_(initial) {}

    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            // |sum| >= |x|: low-order bits of x were lost
            compensation_ += (sum_ - t) + x;
        } else {
            compensation_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    KahanSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }

    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) noexcept {
    KahanSum acc;
    for (double v : values) acc.add(v);
    return acc.value();
}

inline double compensated_mean(std::span<const double> values) noexcept {
    if (values.empty()) return 0.0;
    return compensated_sum(values) / static_cast<double>(values.size());
}

}  // namespace mbv
