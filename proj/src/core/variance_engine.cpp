#include "core/variance_engine.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/sum.hpp"

namespace mbv {

namespace {

constexpr double kRouteWarningThreshold = 1e-8;

double relative_difference(double a, double b) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    if (scale == 0.0) return 0.0;
    return std::fabs(a - b) / scale;
}

}  // namespace

double weighted_price_variance(std::span<const double> prices,
                               std::span<const double> volumes) {
    if (prices.size() != volumes.size())
        raise(ErrorCode::mismatched_length, "price/volume lengths differ");
    if (prices.size() < 2)
        raise(ErrorCode::degenerate_series,
              "weighted price variance needs at least 2 buckets");
    const double mean_price = vwap(prices, volumes);
    KahanSum num;
    KahanSum denom;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        const double d = prices[i] - mean_price;
        const double w_sq = volumes[i] * volumes[i];
        num.add(d * d * w_sq);
        denom.add(w_sq);
    }
    return num.value() / denom.value();
}

double weighted_price_variance(const PortfolioSeries& series) {
    return weighted_price_variance(series.prices(), series.volumes());
}

double closed_form_mu(double psi_sq, double chi_sq, double phi) {
    return (psi_sq - 2.0 * phi + chi_sq) / (1.0 + chi_sq);
}

double closed_form_mu(const MomentSet& moments) {
    return closed_form_mu(moments.value_cv * moments.value_cv,
                          moments.volume_cv * moments.volume_cv, moments.phi);
}

double market_based_return_variance(double price_variance,
                                    double reference_price) {
    if (!(reference_price > 0.0) || !std::isfinite(reference_price))
        raise(ErrorCode::domain, "reference price must be > 0");
    return price_variance / (reference_price * reference_price);
}

double markowitz_variance(const ReturnSeries& series) {
    if (series.instant.size() < 2)
        raise(ErrorCode::degenerate_series,
              "Markowitz variance needs at least 2 returns");
    return unweighted_variance(series.instant);
}

TaylorMu taylor_mu(double psi0, double a, double chi) {
    if (!(psi0 >= 0.0) || !std::isfinite(psi0))
        raise(ErrorCode::domain, "psi0 must be >= 0");
    if (std::fabs(a) > 1.0 + 1e-12)
        raise(ErrorCode::domain, "covariance coefficient a must lie in [-1, 1]");
    if (!(chi >= 0.0) || !std::isfinite(chi))
        raise(ErrorCode::domain, "chi must be >= 0");
    TaylorMu t;
    t.constant = psi0 * psi0;
    t.linear = -2.0 * a * psi0 * chi;
    // grouped as (1 - psi0^2) * chi^2 so the J=1 securities decomposition
    // reproduces this value bit for bit
    t.quadratic = (1.0 - psi0 * psi0) * (chi * chi);
    t.mu = t.constant + t.linear + t.quadratic;
    return t;
}

TaylorVariances taylor_variances(double psi0, double a, double chi,
                                 double mean_price, double gross_return) {
    TaylorVariances out;
    out.mu = taylor_mu(psi0, a, chi);
    out.phi = out.mu.mu * (mean_price * mean_price);
    out.theta = out.mu.mu * (gross_return * gross_return);
    out.within_validity = out.mu.mu >= 0.0 && chi <= 1.0;
    return out;
}

double taylor_form_3_3(double theta_markowitz, double gross_return, double a,
                       double chi) {
    if (theta_markowitz < 0.0)
        raise(ErrorCode::domain, "Markowitz variance must be >= 0");
    if (std::fabs(a) > 1.0 + 1e-12)
        raise(ErrorCode::domain, "covariance coefficient a must lie in [-1, 1]");
    return theta_markowitz -
           2.0 * a * std::sqrt(theta_markowitz) * gross_return * chi +
           (gross_return * gross_return - theta_markowitz) * chi * chi;
}

const char* regime_name(Regime regime) {
    switch (regime) {
        case Regime::high_psi0: return "HIGH_PSI0";
        case Regime::low_psi0: return "LOW_PSI0";
        case Regime::zero_covariance: return "ZERO_COV";
        case Regime::mixed: return "MIXED";
    }
    return "UNKNOWN";
}

RegimeReport regime_analysis(double psi0, double a, double chi,
                             double gross_return,
                             const RegimeThresholds& thresholds) {
    RegimeReport report;
    const double r_sq = gross_return * gross_return;
    if (psi0 > 0.0) report.y = chi / psi0;

    if (psi0 >= thresholds.high_psi0) {
        report.tag = Regime::high_psi0;
        report.asymptotic_theta = (1.0 - 2.0 * a * chi) * r_sq;
        if (a >= 0.5) {
            const double vanish = 1.0 / (2.0 * a);
            if (vanish <= 1.0) report.vanishing_chi = vanish;
        }
        report.note =
            "high return fluctuations: Markowitz near its maximum, positive "
            "value-volume covariance pulls the market-based variance down";
    } else if (psi0 <= thresholds.low_psi0) {
        report.tag = Regime::low_psi0;
        report.asymptotic_theta = (psi0 * psi0 + chi * chi) * r_sq;
        if (psi0 > 0.0) {
            const double y = chi / psi0;
            report.underestimation_ratio = y * y;
        }
        report.note =
            "low return fluctuations: volume fluctuations dominate, Markowitz "
            "may undervalue the variance";
    } else if (std::fabs(a) <= thresholds.zero_cov_a) {
        report.tag = Regime::zero_covariance;
        report.asymptotic_theta =
            (psi0 * psi0 + (1.0 - psi0 * psi0) * chi * chi) * r_sq;
        report.note =
            "zero value-volume covariance: variance grows with chi^2 toward "
            "R^2 as chi^2 -> 1";
    } else {
        report.tag = Regime::mixed;
        report.asymptotic_theta = taylor_mu(psi0, a, chi).mu * r_sq;
        report.note = "no limiting case applies; full second-order expansion";
    }
    return report;
}

VarianceResult compute_variances(const MomentSet& moments,
                                 std::span<const double> prices,
                                 std::span<const double> volumes,
                                 double reference_price,
                                 const RegimeThresholds& thresholds) {
    VarianceResult r;
    r.mean_price = vwap(prices, volumes);
    r.gross_return = r.mean_price / reference_price;

    r.phi_weighted = weighted_price_variance(prices, volumes);
    r.mu = closed_form_mu(moments);
    r.phi_closed = r.mu * r.mean_price * r.mean_price;
    r.phi_rel_diff = relative_difference(r.phi_weighted, r.phi_closed);
    r.numerical_warning = r.phi_rel_diff > kRouteWarningThreshold;

    r.theta_weighted =
        market_based_return_variance(r.phi_weighted, reference_price);
    r.theta_closed = r.mu * r.gross_return * r.gross_return;
    r.theta_rel_diff = relative_difference(r.theta_weighted, r.theta_closed);

    const ReturnSeries rets = returns(prices, volumes, reference_price);
    r.theta_markowitz = markowitz_variance(rets);

    r.second_moment_price = r.phi_weighted + r.mean_price * r.mean_price;

    const double psi0 = moments.price_cv_psi0;
    const double chi = moments.volume_cv;
    const double a = moments.corr_a;
    r.taylor = taylor_variances(psi0, a, chi, r.mean_price, r.gross_return);
    r.theta_form_3_3 =
        taylor_form_3_3(r.theta_markowitz, r.gross_return, a, chi);
    r.regime = regime_analysis(psi0, a, chi, r.gross_return, thresholds);
    r.psi0_sq_exceeds_unit = psi0 * psi0 > 1.0;
    r.chi_exceeds_unit = chi > 1.0;
    return r;
}

}  // namespace mbv
