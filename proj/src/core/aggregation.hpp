#pragma once

#include <span>

#include "core/types.hpp"

namespace mbv {

// lambda_j = U_j(t0) / U_sigma_j(t): rescales the market trades of one
// security into trades of exactly the held share count.
double normalization_scale(double holding, double total_traded);

// Applies lambda_j to every bucket. Bucket prices are untouched; the
// normalized volumes sum to the holding.
NormalizedSeries normalize_series(const AlignedSeries& series,
                                  const PortfolioSpec& spec);

// Bucketwise sums over securities: Q(t_i), W(t_i) and s(t_i) = Q/W.
// All series must share the grid length and appear in portfolio order.
PortfolioSeries portfolio_series(std::span<const NormalizedSeries> normalized,
                                 const PortfolioSpec& spec);

// s(t0) = Q_sigma(t0) / W_sigma(t0).
double portfolio_price_t0(const PortfolioSpec& spec);

}  // namespace mbv
