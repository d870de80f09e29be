#include "core/aggregation.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/sum.hpp"

namespace mbv {

double normalization_scale(double holding, double total_traded) {
    if (!(holding > 0.0) || !std::isfinite(holding))
        raise(ErrorCode::nonpositive_field, "holding must be > 0");
    if (total_traded == 0.0)
        raise(ErrorCode::zero_total_volume,
              "security did not trade in the window");
    if (!(total_traded > 0.0) || !std::isfinite(total_traded))
        raise(ErrorCode::nonpositive_field, "total traded volume must be > 0");
    return holding / total_traded;
}

NormalizedSeries normalize_series(const AlignedSeries& series,
                                  const PortfolioSpec& spec) {
    const double holding = spec.holding(series.security);  // UnknownSecurity
    if (series.buckets.empty())
        raise(ErrorCode::empty_list,
              "series '" + series.security + "' has no buckets");

    KahanSum total;
    for (const Bucket& b : series.buckets) {
        if (!(b.volume > 0.0))
            raise(ErrorCode::nonpositive_field,
                  "series '" + series.security + "' has a nonpositive bucket volume");
        total.add(b.volume);
    }

    NormalizedSeries out;
    out.security = series.security;
    out.scale = normalization_scale(holding, total.value());
    out.buckets.reserve(series.buckets.size());
    for (const Bucket& b : series.buckets)
        out.buckets.push_back({out.scale * b.value, out.scale * b.volume});
    return out;
}

PortfolioSeries portfolio_series(std::span<const NormalizedSeries> normalized,
                                 const PortfolioSpec& spec) {
    spec.validate();
    if (normalized.empty())
        raise(ErrorCode::empty_list, "no normalized series");
    const std::size_t n = normalized.front().buckets.size();
    for (const NormalizedSeries& s : normalized)
        if (s.buckets.size() != n)
            raise(ErrorCode::mismatched_length,
                  "series '" + s.security + "' has " +
                      std::to_string(s.buckets.size()) + " buckets, expected " +
                      std::to_string(n));

    PortfolioSeries out;
    out.reference = spec;
    out.buckets.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        KahanSum value;
        KahanSum volume;
        for (const NormalizedSeries& s : normalized) {
            value.add(s.buckets[i].value);
            volume.add(s.buckets[i].volume);
        }
        PortfolioBucket b;
        b.value = value.value();
        b.volume = volume.value();
        b.price = b.value / b.volume;
        out.buckets.push_back(b);
    }
    return out;
}

double portfolio_price_t0(const PortfolioSpec& spec) {
    spec.validate();
    return spec.total_value() / spec.total_shares();
}

}  // namespace mbv
