#include "core/decomposition.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/sum.hpp"

namespace mbv {

namespace {

constexpr double kCvFloor = 1e-14;

double centered_mean(std::span<const double> v) { return compensated_mean(v); }

// (1/N) sum (a_i - mean_a)(b_i - mean_b)
double biased_covariance(std::span<const double> a, std::span<const double> b) {
    const double mean_a = centered_mean(a);
    const double mean_b = centered_mean(b);
    KahanSum acc;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc.add((a[i] - mean_a) * (b[i] - mean_b));
    return acc.value() / static_cast<double>(a.size());
}

template <typename Series>
VolumeCvDecomposition build_volume_decomposition(std::span<const Series> series,
                                                 const PortfolioSpec& spec) {
    spec.validate();
    if (series.size() != spec.size())
        raise(ErrorCode::mismatched_length,
              "need one series per portfolio security");
    const std::size_t j_count = series.size();
    const std::size_t n = series.front().buckets.size();
    std::vector<std::vector<double>> volumes;
    volumes.reserve(j_count);
    for (std::size_t j = 0; j < j_count; ++j) {
        if (series[j].buckets.size() != n)
            raise(ErrorCode::mismatched_length,
                  "series '" + series[j].security + "' is not on the shared grid");
        if (series[j].security != spec.securities()[j])
            raise(ErrorCode::unknown_security,
                  "series order must match the portfolio security order");
        volumes.push_back(series[j].volumes());
    }
    if (n < 2)
        raise(ErrorCode::degenerate_series,
              "volume decomposition needs at least 2 buckets");

    VolumeCvDecomposition d;
    d.x_weights = spec.share_weights();
    d.chi_j.reserve(j_count);
    std::vector<double> means(j_count);
    for (std::size_t j = 0; j < j_count; ++j) {
        means[j] = centered_mean(volumes[j]);
        d.chi_j.push_back(security_volume_cv(volumes[j]));
    }

    d.chi_jk = SymmetricMatrix(j_count);
    d.beta_jk = SymmetricMatrix(j_count);
    for (std::size_t j = 0; j < j_count; ++j) {
        for (std::size_t k = j; k < j_count; ++k) {
            const double cov = biased_covariance(volumes[j], volumes[k]);
            const double chi_jk = cov / (means[j] * means[k]);
            d.chi_jk.set(j, k, chi_jk);
            if (j == k) {
                d.beta_jk.set(j, k, 1.0);
            } else {
                const double denom = d.chi_j[j] * d.chi_j[k];
                d.beta_jk.set(j, k, denom > kCvFloor ? chi_jk / denom : 0.0);
            }
        }
    }

    d.beta_j.resize(j_count);
    for (std::size_t j = 0; j < j_count; ++j) {
        KahanSum row;
        for (std::size_t k = 0; k < j_count; ++k) row.add(d.beta_jk.at(j, k));
        d.beta_j[j] = row.value();
    }

    KahanSum chi_sq;
    for (std::size_t j = 0; j < j_count; ++j)
        for (std::size_t k = 0; k < j_count; ++k)
            chi_sq.add(d.beta_jk.at(j, k) * d.chi_j[j] * d.chi_j[k] *
                       d.x_weights[j] * d.x_weights[k]);
    d.chi_sq_reconstructed = chi_sq.value();
    return d;
}

}  // namespace

double security_volume_cv(std::span<const double> volumes) {
    if (volumes.size() < 2)
        raise(ErrorCode::degenerate_series,
              "volume CV needs at least 2 buckets");
    for (double v : volumes)
        if (!(v > 0.0))
            raise(ErrorCode::nonpositive_field, "volumes must be > 0");
    const double mean = centered_mean(volumes);
    KahanSum acc;
    for (double v : volumes) {
        const double dev = v - mean;
        acc.add(dev * dev);
    }
    const double variance = acc.value() / static_cast<double>(volumes.size());
    return std::sqrt(variance) / mean;
}

VolumeCvDecomposition volume_cv_matrix(std::span<const AlignedSeries> series,
                                       const PortfolioSpec& spec) {
    return build_volume_decomposition(series, spec);
}

VolumeCvDecomposition volume_cv_matrix(std::span<const NormalizedSeries> series,
                                       const PortfolioSpec& spec) {
    return build_volume_decomposition(series, spec);
}

double chi_linear_decomposition(const VolumeCvDecomposition& decomp) {
    KahanSum acc;
    for (std::size_t j = 0; j < decomp.chi_j.size(); ++j)
        acc.add(decomp.beta_j[j] * decomp.chi_j[j] * decomp.x_weights[j]);
    return acc.value();
}

SymmetricMatrix return_covariance_matrix(std::span<const ReturnSeries> series) {
    if (series.empty())
        raise(ErrorCode::empty_list, "no return series");
    const std::size_t n = series.front().instant.size();
    for (const ReturnSeries& s : series)
        if (s.instant.size() != n)
            raise(ErrorCode::mismatched_length,
                  "return series are not on the shared grid");
    if (n < 2)
        raise(ErrorCode::degenerate_series,
              "return covariance needs at least 2 buckets");

    SymmetricMatrix cov(series.size());
    for (std::size_t j = 0; j < series.size(); ++j)
        for (std::size_t k = j; k < series.size(); ++k)
            cov.set(j, k, biased_covariance(series[j].instant, series[k].instant));
    return cov;
}

double markowitz_quadratic_form(const SymmetricMatrix& covariance,
                                std::span<const double> value_weights) {
    if (value_weights.size() != covariance.size())
        raise(ErrorCode::mismatched_length,
              "weight count does not match covariance size");
    const double total = compensated_sum(value_weights);
    if (std::fabs(total - 1.0) > 1e-12)
        raise(ErrorCode::weight_sum,
              "value weights must sum to 1, got " + std::to_string(total));
    KahanSum acc;
    for (std::size_t j = 0; j < value_weights.size(); ++j)
        for (std::size_t k = 0; k < value_weights.size(); ++k)
            acc.add(covariance.at(j, k) * value_weights[j] * value_weights[k]);
    return acc.value();
}

TaylorDecomposition taylor_decomposition(
    double psi0, double a, const VolumeCvDecomposition& decomp,
    std::span<const double> security_returns,
    std::span<const double> value_weights) {
    const std::size_t j_count = decomp.chi_j.size();
    if (security_returns.size() != j_count || value_weights.size() != j_count)
        raise(ErrorCode::mismatched_length,
              "returns/weights do not match the decomposition size");

    TaylorDecomposition out;
    out.chi_linear = chi_linear_decomposition(decomp);
    out.chi_sq_bilinear = decomp.chi_sq_reconstructed;

    KahanSum factor;
    for (std::size_t j = 0; j < j_count; ++j)
        for (std::size_t k = 0; k < j_count; ++k)
            factor.add(security_returns[j] * security_returns[k] *
                       value_weights[j] * value_weights[k]);
    out.return_factor = factor.value();

    KahanSum avg_return;
    for (std::size_t j = 0; j < j_count; ++j)
        avg_return.add(security_returns[j] * value_weights[j]);
    const double r = avg_return.value();
    const double r_sq = r * r;
    const double scale = std::fmax(std::fabs(out.return_factor), std::fabs(r_sq));
    if (scale > 0.0 && std::fabs(out.return_factor - r_sq) / scale > 1e-10)
        raise(ErrorCode::domain,
              "return factor does not match the squared average return; "
              "inconsistent returns or weights");

    out.mu = psi0 * psi0 - 2.0 * a * psi0 * out.chi_linear +
             (1.0 - psi0 * psi0) * out.chi_sq_bilinear;
    out.theta = out.mu * out.return_factor;
    return out;
}

}  // namespace mbv
