#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace mbv {

using SecurityId = std::string;

// One market trade: time in seconds, traded value (currency) and volume
// (shares). The price is always derived as value/volume, never stored.
struct TradeTick {
    double time = 0.0;
    SecurityId security;
    double value = 0.0;
    double volume = 0.0;

    double price() const noexcept { return value / volume; }
};

// The averaging interval [center - width/2, center + width/2] split into
// bucket_count equal sub-intervals.
struct AveragingWindow {
    double center = 0.0;
    double half_width = 0.0;
    int bucket_count = 0;

    double begin() const noexcept { return center - half_width; }
    double end() const noexcept { return center + half_width; }
    double width() const noexcept { return 2.0 * half_width; }
    double bucket_seconds() const noexcept {
        return width() / static_cast<double>(bucket_count);
    }

    static AveragingWindow from_extent(double begin, double end, int buckets);

    // N >= 2 and a strictly positive width.
    void validate() const;
};

// One aggregated grid bucket: total traded value and volume.
struct Bucket {
    double value = 0.0;
    double volume = 0.0;

    double price() const noexcept { return value / volume; }
};

// Per-security series on the common grid.
struct AlignedSeries {
    SecurityId security;
    std::vector<Bucket> buckets;

    std::vector<double> values() const;
    std::vector<double> volumes() const;
    std::vector<double> prices() const;
};

// Holdings and reference prices fixed at composition time t0. Securities
// keep their insertion order; all per-security vectors downstream use it.
class PortfolioSpec {
public:
    PortfolioSpec() = default;
    explicit PortfolioSpec(double composition_time)
        : composition_time_(composition_time) {}

    void add(const SecurityId& security, double shares, double reference_price);

    double composition_time() const noexcept { return composition_time_; }
    void set_composition_time(double t) noexcept { composition_time_ = t; }

    std::size_t size() const noexcept { return order_.size(); }
    const std::vector<SecurityId>& securities() const noexcept { return order_; }
    const std::vector<double>& holdings() const noexcept { return holdings_; }
    const std::vector<double>& reference_prices() const noexcept {
        return reference_prices_;
    }

    bool contains(const SecurityId& security) const;
    std::size_t index_of(const SecurityId& security) const;  // UnknownSecurity
    double holding(const SecurityId& security) const;
    double reference_price(const SecurityId& security) const;

    double total_shares() const;  // W_sigma(t0)
    double total_value() const;   // Q_sigma(t0)

    // Relative share counts x_j(t0) = U_j(t0) / W_sigma(t0).
    std::vector<double> share_weights() const;
    // Relative invested amounts X_j(t0) = p_j(t0) U_j(t0) / (s(t0) W_sigma(t0)).
    std::vector<double> value_weights() const;

    // At least one security, all holdings/prices strictly positive and finite.
    void validate() const;

private:
    double composition_time_ = 0.0;
    std::vector<SecurityId> order_;
    std::unordered_map<SecurityId, std::size_t> index_;
    std::vector<double> holdings_;
    std::vector<double> reference_prices_;
};

// Per-security series rescaled so the traded volume over the window equals
// the portfolio holding exactly.
struct NormalizedSeries {
    SecurityId security;
    double scale = 1.0;  // lambda_j
    std::vector<Bucket> buckets;

    std::vector<double> values() const;
    std::vector<double> volumes() const;
    std::vector<double> prices() const;
};

struct PortfolioBucket {
    double value = 0.0;   // Q(t_i)
    double volume = 0.0;  // W(t_i)
    double price = 0.0;   // s(t_i) = Q/W
};

// The portfolio modelled as a single traded security.
struct PortfolioSeries {
    std::vector<PortfolioBucket> buckets;
    PortfolioSpec reference;

    std::size_t size() const noexcept { return buckets.size(); }
    std::vector<double> values() const;
    std::vector<double> volumes() const;
    std::vector<double> prices() const;
};

}  // namespace mbv
