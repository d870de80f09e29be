#pragma once

#include <optional>
#include <span>
#include <string>

#include "core/moments.hpp"
#include "core/types.hpp"

namespace mbv {

// Market-based price variance, the defining W^2-weighted form:
//   Phi(t) = (1 / sum W_i^2) sum (s_i - s(t))^2 W_i^2
// with s(t) the VWAP of the same series.
double weighted_price_variance(std::span<const double> prices,
                               std::span<const double> volumes);
double weighted_price_variance(const PortfolioSeries& series);

// mu(psi, chi, phi) = (psi^2 - 2 phi + chi^2) / (1 + chi^2).
// Algebraically, weighted_price_variance == closed_form_mu * vwap^2.
double closed_form_mu(double psi_sq, double chi_sq, double phi);
double closed_form_mu(const MomentSet& moments);

// Theta(t, t0) = Phi(t) / s^2(t0).
double market_based_return_variance(double price_variance,
                                    double reference_price);

// Classical variance: unweighted (1/N) variance of the instant returns
// about their unweighted mean.
double markowitz_variance(const ReturnSeries& series);

struct TaylorMu {
    double constant = 0.0;   // psi0^2
    double linear = 0.0;     // -2 a psi0 chi
    double quadratic = 0.0;  // (1 - psi0^2) chi^2
    double mu = 0.0;         // sum of the three
};

// Second-order expansion of mu in the volume CV. chi beyond 1 is accepted
// (real series can exceed it); the caller flags validity.
TaylorMu taylor_mu(double psi0, double a, double chi);

struct TaylorVariances {
    TaylorMu mu;
    double phi = 0.0;    // mu * s^2(t)
    double theta = 0.0;  // mu * R^2(t, t0)
    bool within_validity = true;  // mu >= 0 and chi <= 1
};

TaylorVariances taylor_variances(double psi0, double a, double chi,
                                 double mean_price, double gross_return);

// Same expansion written in Markowitz terms:
//   theta = Theta_M - 2 a sqrt(Theta_M) R chi + (R^2 - Theta_M) chi^2,
// identical to taylor_variances with psi0 = sqrt(Theta_M)/R.
double taylor_form_3_3(double theta_markowitz, double gross_return, double a,
                       double chi);

enum class Regime { high_psi0, low_psi0, zero_covariance, mixed };

const char* regime_name(Regime regime);

struct RegimeThresholds {
    double high_psi0 = 0.9;
    double low_psi0 = 0.1;
    double zero_cov_a = 0.05;
};

struct RegimeReport {
    Regime tag = Regime::mixed;
    std::optional<double> y;  // chi / psi0, when psi0 > 0
    // Taylor theta under the regime's limiting form, scaled by R^2.
    double asymptotic_theta = 0.0;
    // chi where the high-psi0 linear form vanishes (1/(2a), a >= 1/2, <= 1).
    std::optional<double> vanishing_chi;
    // low-psi0 case: Theta / Theta_M ~ (chi/psi0)^2.
    std::optional<double> underestimation_ratio;
    std::string note;
};

RegimeReport regime_analysis(double psi0, double a, double chi,
                             double gross_return = 1.0,
                             const RegimeThresholds& thresholds = {});

// Everything the engine derives for one series: both variance routes with
// their relative difference, the Markowitz value, the Taylor expansion, and
// the regime classification.
struct VarianceResult {
    double mean_price = 0.0;     // s(t), VWAP
    double gross_return = 0.0;   // R(t, t0)
    double phi_weighted = 0.0;   // defining route
    double phi_closed = 0.0;     // mu * s^2 route
    double phi_rel_diff = 0.0;
    bool numerical_warning = false;  // routes diverge beyond 1e-8
    double theta_weighted = 0.0;
    double theta_closed = 0.0;
    double theta_rel_diff = 0.0;
    double theta_markowitz = 0.0;
    double mu = 0.0;
    double second_moment_price = 0.0;  // phi_weighted + s^2(t)
    TaylorVariances taylor;
    double theta_form_3_3 = 0.0;
    RegimeReport regime;
    bool psi0_sq_exceeds_unit = false;
    bool chi_exceeds_unit = false;
};

VarianceResult compute_variances(const MomentSet& moments,
                                 std::span<const double> prices,
                                 std::span<const double> volumes,
                                 double reference_price,
                                 const RegimeThresholds& thresholds = {});

}  // namespace mbv
