#include "core/moments.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/sum.hpp"

namespace mbv {

namespace {

constexpr double kCorrelationFloor = 1e-14;

// Centered second moment, (1/N) sum (x_i - mean)^2. Nonnegative by
// construction, unlike the mean-of-squares form.
double centered_variance(std::span<const double> values, double mean) {
    KahanSum acc;
    for (double v : values) {
        const double d = v - mean;
        acc.add(d * d);
    }
    return acc.value() / static_cast<double>(values.size());
}

double centered_covariance(std::span<const double> a, double mean_a,
                           std::span<const double> b, double mean_b) {
    KahanSum acc;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc.add((a[i] - mean_a) * (b[i] - mean_b));
    return acc.value() / static_cast<double>(a.size());
}

}  // namespace

double raw_moment(std::span<const double> values, int order) {
    if (values.empty()) raise(ErrorCode::empty_list, "raw_moment of empty list");
    if (order < 1)
        raise(ErrorCode::domain, "moment order must be >= 1");
    KahanSum acc;
    for (double v : values) {
        double p = v;
        for (int k = 1; k < order; ++k) p *= v;
        acc.add(p);
    }
    return acc.value() / static_cast<double>(values.size());
}

double unweighted_mean(std::span<const double> values) {
    if (values.empty()) raise(ErrorCode::empty_list, "mean of empty list");
    return compensated_mean(values);
}

double unweighted_variance(std::span<const double> values) {
    if (values.size() < 2)
        raise(ErrorCode::degenerate_series,
              "variance needs at least 2 samples");
    return centered_variance(values, compensated_mean(values));
}

MomentSet moment_set(std::span<const double> values,
                     std::span<const double> volumes) {
    if (values.size() != volumes.size())
        raise(ErrorCode::mismatched_length,
              "value/volume series lengths differ");
    if (values.size() < 2)
        raise(ErrorCode::degenerate_series,
              "moment set needs at least 2 buckets, got " +
                  std::to_string(values.size()));

    MomentSet m;
    m.sample_count = static_cast<int>(values.size());
    m.mean_value = compensated_mean(values);
    m.mean_volume = compensated_mean(volumes);
    m.mean_sq_value = raw_moment(values, 2);
    m.mean_sq_volume = raw_moment(volumes, 2);

    const double var_value = centered_variance(values, m.mean_value);
    const double var_volume = centered_variance(volumes, m.mean_volume);
    m.sigma_value = std::sqrt(var_value);
    m.sigma_volume = std::sqrt(var_volume);
    m.value_cv = m.sigma_value / m.mean_value;
    m.volume_cv = m.sigma_volume / m.mean_volume;
    m.cov_value_volume =
        centered_covariance(values, m.mean_value, volumes, m.mean_volume);
    m.phi = m.cov_value_volume / (m.mean_value * m.mean_volume);

    std::vector<double> prices(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        prices[i] = values[i] / volumes[i];
    const double price_mean = compensated_mean(prices);
    m.price_cv_psi0 = std::sqrt(centered_variance(prices, price_mean)) / price_mean;

    const double spread = m.value_cv * m.volume_cv;
    m.corr_a = spread > kCorrelationFloor ? m.phi / spread : 0.0;
    return m;
}

MomentSet moment_set(const PortfolioSeries& series) {
    return moment_set(series.values(), series.volumes());
}

MomentSet moment_set(const NormalizedSeries& series) {
    return moment_set(series.values(), series.volumes());
}

double vwap(std::span<const double> prices, std::span<const double> volumes) {
    if (prices.size() != volumes.size())
        raise(ErrorCode::mismatched_length, "price/volume lengths differ");
    if (prices.empty()) raise(ErrorCode::empty_list, "vwap of empty series");
    KahanSum weighted;
    KahanSum total;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(volumes[i] > 0.0))
            raise(ErrorCode::zero_weight_sum,
                  "vwap weights must be strictly positive");
        weighted.add(prices[i] * volumes[i]);
        total.add(volumes[i]);
    }
    const double denom = total.value();
    if (denom == 0.0) raise(ErrorCode::zero_weight_sum, "vwap weight sum is zero");
    return weighted.value() / denom;
}

double vwap_decomposition_check(const PortfolioSpec& spec,
                                std::span<const double> security_vwaps) {
    spec.validate();
    if (security_vwaps.size() != spec.size())
        raise(ErrorCode::unknown_security,
              "need one VWAP per portfolio security");
    const std::vector<double> x = spec.share_weights();
    KahanSum acc;
    for (std::size_t j = 0; j < x.size(); ++j)
        acc.add(security_vwaps[j] * x[j]);
    return acc.value();
}

ReturnSeries returns(std::span<const double> prices,
                     std::span<const double> volumes, double reference_price) {
    if (!(reference_price > 0.0) || !std::isfinite(reference_price))
        raise(ErrorCode::domain, "reference price must be > 0");
    if (prices.size() != volumes.size())
        raise(ErrorCode::mismatched_length, "price/volume lengths differ");
    if (prices.empty()) raise(ErrorCode::empty_list, "returns of empty series");

    ReturnSeries out;
    out.reference_price = reference_price;
    out.instant.reserve(prices.size());
    for (double p : prices) out.instant.push_back(p / reference_price);
    out.average = vwap(prices, volumes) / reference_price;
    return out;
}

}  // namespace mbv
