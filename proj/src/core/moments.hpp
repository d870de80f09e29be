#pragma once

#include <span>
#include <vector>

#include "core/types.hpp"

namespace mbv {

// First and second moments of the trade value and volume series, the
// coefficients of variation psi (values) and chi (volumes), the normalized
// value-volume covariance phi, and the unweighted price CV psi0.
struct MomentSet {
    int sample_count = 0;
    double mean_value = 0.0;     // Q(t;1)
    double mean_volume = 0.0;    // W(t;1)
    double mean_sq_value = 0.0;  // Q(t;2)
    double mean_sq_volume = 0.0; // W(t;2)
    double sigma_value = 0.0;    // sigma_Q
    double sigma_volume = 0.0;   // sigma_W
    double value_cv = 0.0;       // psi
    double volume_cv = 0.0;      // chi
    double cov_value_volume = 0.0;
    double phi = 0.0;            // cov / (Q(t;1) W(t;1))
    double price_cv_psi0 = 0.0;  // unweighted CV of bucket prices
    double corr_a = 0.0;         // phi / (psi chi), 0 when psi chi ~ 0
};

// (1/N) sum x_i^n for n >= 1.
double raw_moment(std::span<const double> values, int order);

// Biased (1/N) statistics throughout; no Bessel correction.
MomentSet moment_set(std::span<const double> values,
                     std::span<const double> volumes);
MomentSet moment_set(const PortfolioSeries& series);
MomentSet moment_set(const NormalizedSeries& series);

// Volume weighted average price: sum p_i w_i / sum w_i.
double vwap(std::span<const double> prices, std::span<const double> volumes);

// sum_j p_j(t) x_j(t0): the caller compares it with the portfolio VWAP.
// security_vwaps follow the portfolio security order.
double vwap_decomposition_check(const PortfolioSpec& spec,
                                std::span<const double> security_vwaps);

// Instant gross returns p_i / p(t0) plus their volume-weighted average,
// which equals vwap(prices)/reference.
struct ReturnSeries {
    std::vector<double> instant;
    double reference_price = 0.0;
    double average = 0.0;
};

ReturnSeries returns(std::span<const double> prices,
                     std::span<const double> volumes, double reference_price);

// Unweighted (1/N) mean and variance helpers used by the Markowitz path.
double unweighted_mean(std::span<const double> values);
double unweighted_variance(std::span<const double> values);

}  // namespace mbv
