#include "core/types.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/sum.hpp"

namespace mbv {

namespace {

std::vector<double> extract(const std::vector<Bucket>& buckets,
                            double (Bucket::*field)) {
    std::vector<double> out;
    out.reserve(buckets.size());
    for (const Bucket& b : buckets) out.push_back(b.*field);
    return out;
}

}  // namespace

AveragingWindow AveragingWindow::from_extent(double begin, double end,
                                             int buckets) {
    AveragingWindow w;
    w.center = 0.5 * (begin + end);
    w.half_width = 0.5 * (end - begin);
    w.bucket_count = buckets;
    w.validate();
    return w;
}

void AveragingWindow::validate() const {
    if (bucket_count < 2)
        raise(ErrorCode::degenerate_series,
              "averaging window needs at least 2 buckets, got " +
                  std::to_string(bucket_count));
    if (!(half_width > 0.0) || !std::isfinite(half_width) ||
        !std::isfinite(center))
        raise(ErrorCode::invalid_argument, "averaging window width must be positive and finite");
}

std::vector<double> AlignedSeries::values() const {
    return extract(buckets, &Bucket::value);
}
std::vector<double> AlignedSeries::volumes() const {
    return extract(buckets, &Bucket::volume);
}
std::vector<double> AlignedSeries::prices() const {
    std::vector<double> out;
    out.reserve(buckets.size());
    for (const Bucket& b : buckets) out.push_back(b.price());
    return out;
}

std::vector<double> NormalizedSeries::values() const {
    return extract(buckets, &Bucket::value);
}
std::vector<double> NormalizedSeries::volumes() const {
    return extract(buckets, &Bucket::volume);
}
std::vector<double> NormalizedSeries::prices() const {
    std::vector<double> out;
    out.reserve(buckets.size());
    for (const Bucket& b : buckets) out.push_back(b.price());
    return out;
}

void PortfolioSpec::add(const SecurityId& security, double shares,
                        double reference_price) {
    if (index_.count(security) != 0)
        raise(ErrorCode::invalid_argument,
              "security '" + security + "' already in portfolio");
    if (!(shares > 0.0) || !std::isfinite(shares))
        raise(ErrorCode::nonpositive_field,
              "holding for '" + security + "' must be > 0");
    if (!(reference_price > 0.0) || !std::isfinite(reference_price))
        raise(ErrorCode::nonpositive_field,
              "reference price for '" + security + "' must be > 0");
    index_.emplace(security, order_.size());
    order_.push_back(security);
    holdings_.push_back(shares);
    reference_prices_.push_back(reference_price);
}

bool PortfolioSpec::contains(const SecurityId& security) const {
    return index_.count(security) != 0;
}

std::size_t PortfolioSpec::index_of(const SecurityId& security) const {
    auto it = index_.find(security);
    if (it == index_.end())
        raise(ErrorCode::unknown_security,
              "security '" + security + "' not in portfolio");
    return it->second;
}

double PortfolioSpec::holding(const SecurityId& security) const {
    return holdings_[index_of(security)];
}

double PortfolioSpec::reference_price(const SecurityId& security) const {
    return reference_prices_[index_of(security)];
}

double PortfolioSpec::total_shares() const {
    return compensated_sum(holdings_);
}

double PortfolioSpec::total_value() const {
    KahanSum acc;
    for (std::size_t j = 0; j < order_.size(); ++j)
        acc.add(reference_prices_[j] * holdings_[j]);
    return acc.value();
}

std::vector<double> PortfolioSpec::share_weights() const {
    const double w_sigma = total_shares();
    std::vector<double> x;
    x.reserve(order_.size());
    for (double u : holdings_) x.push_back(u / w_sigma);
    return x;
}

std::vector<double> PortfolioSpec::value_weights() const {
    const double denom = total_value();  // s(t0) W_sigma(t0) = Q_sigma(t0)
    std::vector<double> big_x;
    big_x.reserve(order_.size());
    for (std::size_t j = 0; j < order_.size(); ++j)
        big_x.push_back(reference_prices_[j] * holdings_[j] / denom);
    return big_x;
}

void PortfolioSpec::validate() const {
    if (order_.empty())
        raise(ErrorCode::invalid_argument, "portfolio has no securities");
    // add() already rejects nonpositive entries; re-check the derived totals.
    if (!(total_shares() > 0.0) || !(total_value() > 0.0))
        raise(ErrorCode::nonpositive_field,
              "portfolio totals must be strictly positive");
}

std::vector<double> PortfolioSeries::values() const {
    std::vector<double> out;
    out.reserve(buckets.size());
    for (const PortfolioBucket& b : buckets) out.push_back(b.value);
    return out;
}

std::vector<double> PortfolioSeries::volumes() const {
    std::vector<double> out;
    out.reserve(buckets.size());
    for (const PortfolioBucket& b : buckets) out.push_back(b.volume);
    return out;
}

std::vector<double> PortfolioSeries::prices() const {
    std::vector<double> out;
    out.reserve(buckets.size());
    for (const PortfolioBucket& b : buckets) out.push_back(b.price);
    return out;
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return "InvalidArgument";
        case ErrorCode::nonpositive_field: return "NonPositiveField";
        case ErrorCode::unsorted_input: return "UnsortedInput";
        case ErrorCode::empty_bucket: return "EmptyBucket";
        case ErrorCode::degenerate_series: return "DegenerateSeries";
        case ErrorCode::zero_total_volume: return "ZeroTotalVolume";
        case ErrorCode::unknown_security: return "UnknownSecurity";
        case ErrorCode::mismatched_length: return "MismatchedLength";
        case ErrorCode::empty_list: return "EmptyList";
        case ErrorCode::zero_weight_sum: return "ZeroWeightSum";
        case ErrorCode::weight_sum: return "WeightSumError";
        case ErrorCode::domain: return "DomainError";
        case ErrorCode::infeasible_targets: return "InfeasibleTargets";
        case ErrorCode::io: return "IoError";
        case ErrorCode::parse: return "ParseError";
        case ErrorCode::internal: return "InternalError";
    }
    return "UnknownError";
}

}  // namespace mbv
