#include "core/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "core/aggregation.hpp"
#include "core/errors.hpp"
#include "core/sum.hpp"

namespace mbv {

namespace {

double rel_diff(double a, double b) {
    const double scale = std::fmax(std::fabs(a), std::fabs(b));
    if (scale == 0.0) return 0.0;
    return std::fabs(a - b) / scale;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

AnalysisResult analyze_aligned(const AlignmentResult& aligned,
                               const PortfolioSpec& spec,
                               const AnalyzeOptions& options) {
    spec.validate();

    AnalysisResult r;
    r.window = aligned.window;
    r.requested_buckets = aligned.requested_buckets;
    r.effective_buckets = aligned.effective_buckets;
    r.price_t0 = portfolio_price_t0(spec);
    r.total_shares = spec.total_shares();
    r.total_value = spec.total_value();

    std::vector<NormalizedSeries> normalized;
    normalized.reserve(aligned.series.size());
    for (const AlignedSeries& s : aligned.series)
        normalized.push_back(normalize_series(s, spec));

    // conservation diagnostics (Neumaier sums; contract is relative 1e-12)
    double worst = 0.0;
    for (const NormalizedSeries& s : normalized) {
        KahanSum total;
        for (const Bucket& b : s.buckets) total.add(b.volume);
        worst = std::fmax(
            worst, std::fabs(total.value() - spec.holding(s.security)) /
                       spec.holding(s.security));
    }
    const PortfolioSeries portfolio = portfolio_series(normalized, spec);
    {
        KahanSum total;
        for (const PortfolioBucket& b : portfolio.buckets) total.add(b.volume);
        worst = std::fmax(worst, std::fabs(total.value() - r.total_shares) /
                                     r.total_shares);
    }
    r.volume_conservation_rel = worst;

    r.moments = moment_set(portfolio);
    const std::vector<double> prices = portfolio.prices();
    const std::vector<double> volumes = portfolio.volumes();
    r.variance = compute_variances(r.moments, prices, volumes, r.price_t0,
                                   options.thresholds);

    // per-security statistics on the shared grid
    const std::size_t j_count = aligned.series.size();
    const std::vector<double> x = spec.share_weights();
    const std::vector<double> big_x = spec.value_weights();
    std::vector<double> security_vwaps(j_count);
    std::vector<ReturnSeries> security_returns;
    security_returns.reserve(j_count);
    r.securities.resize(j_count);
    for (std::size_t j = 0; j < j_count; ++j) {
        const AlignedSeries& s = aligned.series[j];
        const std::vector<double> p_j = s.prices();
        const std::vector<double> u_j = s.volumes();
        SecurityBreakdown& b = r.securities[j];
        b.id = s.security;
        b.x_weight = x[j];
        b.value_weight = big_x[j];
        b.price_t0 = spec.reference_prices()[j];
        b.vwap = vwap(p_j, u_j);
        security_vwaps[j] = b.vwap;
        security_returns.push_back(returns(p_j, u_j, b.price_t0));
        b.gross_return = security_returns.back().average;
    }

    r.volume_decomp = volume_cv_matrix(
        std::span<const AlignedSeries>(aligned.series), spec);
    for (std::size_t j = 0; j < j_count; ++j) {
        r.securities[j].chi_j = r.volume_decomp.chi_j[j];
        r.securities[j].beta_j = r.volume_decomp.beta_j[j];
    }

    r.chi_sq_portfolio = r.moments.volume_cv * r.moments.volume_cv;
    r.chi_sq_rel_diff =
        rel_diff(r.chi_sq_portfolio, r.volume_decomp.chi_sq_reconstructed);
    r.chi_linear = chi_linear_decomposition(r.volume_decomp);
    r.chi_linear_abs_diff = std::fabs(r.chi_linear - r.moments.volume_cv);

    r.theta_jk = return_covariance_matrix(
        std::span<const ReturnSeries>(security_returns));
    r.theta_markowitz_quadratic_form =
        markowitz_quadratic_form(r.theta_jk, big_x);
    r.theta_markowitz_rel_diff = rel_diff(r.theta_markowitz_quadratic_form,
                                          r.variance.theta_markowitz);

    r.vwap_decomposed = vwap_decomposition_check(spec, security_vwaps);
    r.vwap_rel_diff = rel_diff(r.vwap_decomposed, r.variance.mean_price);

    {
        KahanSum acc;
        for (std::size_t j = 0; j < j_count; ++j)
            acc.add(security_returns[j].average * big_x[j]);
        r.return_decomposed = acc.value();
    }
    r.return_rel_diff = rel_diff(r.return_decomposed, r.variance.gross_return);

    std::vector<double> avg_returns(j_count);
    for (std::size_t j = 0; j < j_count; ++j)
        avg_returns[j] = security_returns[j].average;
    r.taylor_decomp =
        taylor_decomposition(r.moments.price_cv_psi0, r.moments.corr_a,
                             r.volume_decomp, avg_returns, big_x);
    r.return_factor_rel_diff =
        rel_diff(r.taylor_decomp.return_factor,
                 r.variance.gross_return * r.variance.gross_return);

    // divergence: canonical Theta is the defining weighted route
    const double theta = r.variance.theta_weighted;
    const double theta_m = r.variance.theta_markowitz;
    if (theta_m > 0.0) r.theta_ratio = theta / theta_m;
    const double scale = std::fmax(theta, theta_m);
    if (scale <= 1e-30 || rel_diff(theta, theta_m) <= 1e-9) {
        r.markowitz_bias = "consistent";
    } else if (theta_m > theta) {
        r.markowitz_bias = "overestimates";
    } else {
        r.markowitz_bias = "underestimates";
    }
    return r;
}

AnalysisResult analyze_ticks(std::span<const TradeTick> ticks,
                             const PortfolioSpec& spec,
                             const AveragingWindow& window,
                             const AnalyzeOptions& options) {
    std::vector<TradeTick> validated =
        validate_ticks(std::vector<TradeTick>(ticks.begin(), ticks.end()));
    const AlignmentResult aligned =
        align_to_grid(validated, window, spec.securities(), options.mode);
    return analyze_aligned(aligned, spec, options);
}

std::vector<SweepRow> sweep(RegimePreset regime, std::span<const double> chis,
                            const RegimeKnobs& knobs) {
    std::vector<SweepRow> rows;
    rows.reserve(chis.size());
    for (double chi : chis) {
        RegimeKnobs point = knobs;
        point.chi = chi;
        const GeneratorSpec spec = generate_regime(regime, point);
        const GeneratedData data = generate(spec);

        AlignmentResult aligned;
        aligned.window = data.window();
        aligned.requested_buckets = spec.buckets;
        aligned.effective_buckets = spec.buckets;
        aligned.series = data.series;
        const AnalysisResult analysis = analyze_aligned(aligned, data.portfolio);

        SweepRow row;
        row.chi_target = chi;
        row.chi_measured = analysis.moments.volume_cv;
        row.psi0_target = spec.target_price_cv;
        row.psi0_measured = analysis.moments.price_cv_psi0;
        row.a_target = spec.target_corr_a
                           ? *spec.target_corr_a
                           : std::numeric_limits<double>::quiet_NaN();
        row.a_measured = analysis.moments.corr_a;
        row.gross_return = analysis.variance.gross_return;
        row.theta_exact = analysis.variance.theta_weighted;
        row.theta_markowitz = analysis.variance.theta_markowitz;
        const double a_nominal =
            spec.target_corr_a ? *spec.target_corr_a : analysis.moments.corr_a;
        row.theta_taylor_nominal =
            taylor_variances(spec.target_price_cv, a_nominal, chi,
                             analysis.variance.mean_price,
                             analysis.variance.gross_return)
                .theta;
        row.theta_taylor_measured = analysis.variance.taylor.theta;
        row.theta_ratio = analysis.theta_ratio.value_or(
            std::numeric_limits<double>::quiet_NaN());
        rows.push_back(row);
    }
    return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::string out =
        "chi,chi_measured,psi0,psi0_measured,a,a_measured,gross_return,"
        "theta_exact,theta_markowitz,theta_taylor_nominal,"
        "theta_taylor_measured,theta_ratio\n";
    for (const SweepRow& r : rows) {
        out += format_double(r.chi_target) + ',' +
               format_double(r.chi_measured) + ',' +
               format_double(r.psi0_target) + ',' +
               format_double(r.psi0_measured) + ',' +
               format_double(r.a_target) + ',' + format_double(r.a_measured) +
               ',' + format_double(r.gross_return) + ',' +
               format_double(r.theta_exact) + ',' +
               format_double(r.theta_markowitz) + ',' +
               format_double(r.theta_taylor_nominal) + ',' +
               format_double(r.theta_taylor_measured) + ',' +
               format_double(r.theta_ratio) + '\n';
    }
    return out;
}

}  // namespace mbv
