#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/decomposition.hpp"
#include "core/moments.hpp"
#include "core/synthetic.hpp"
#include "core/trade_model.hpp"
#include "core/types.hpp"
#include "core/variance_engine.hpp"

namespace mbv {

struct AnalyzeOptions {
    AlignMode mode = AlignMode::strict;
    RegimeThresholds thresholds;
};

struct SecurityBreakdown {
    SecurityId id;
    double x_weight = 0.0;      // x_j(t0)
    double value_weight = 0.0;  // X_j(t0)
    double price_t0 = 0.0;
    double vwap = 0.0;          // p_j(t)
    double gross_return = 0.0;  // R_j(t, t0)
    double chi_j = 0.0;
    double beta_j = 0.0;
};

// Full pipeline output: one window, one portfolio.
struct AnalysisResult {
    AveragingWindow window;
    int requested_buckets = 0;
    int effective_buckets = 0;

    double price_t0 = 0.0;       // s(t0)
    double total_shares = 0.0;   // W_sigma(t0)
    double total_value = 0.0;    // Q_sigma(t0)

    MomentSet moments;
    VarianceResult variance;

    std::vector<SecurityBreakdown> securities;
    VolumeCvDecomposition volume_decomp;
    SymmetricMatrix theta_jk;

    // consistency diagnostics, each pair reported with its difference
    double chi_sq_portfolio = 0.0;
    double chi_sq_rel_diff = 0.0;
    double chi_linear = 0.0;
    double chi_linear_abs_diff = 0.0;
    double theta_markowitz_quadratic_form = 0.0;
    double theta_markowitz_rel_diff = 0.0;
    double vwap_decomposed = 0.0;
    double vwap_rel_diff = 0.0;
    double return_decomposed = 0.0;
    double return_rel_diff = 0.0;
    TaylorDecomposition taylor_decomp;
    double return_factor_rel_diff = 0.0;
    double volume_conservation_rel = 0.0;  // worst security + portfolio

    std::optional<double> theta_ratio;  // Theta / Theta_M
    std::string markowitz_bias;  // overestimates | underestimates | consistent
};

AnalysisResult analyze_aligned(const AlignmentResult& aligned,
                               const PortfolioSpec& spec,
                               const AnalyzeOptions& options = {});

AnalysisResult analyze_ticks(std::span<const TradeTick> ticks,
                             const PortfolioSpec& spec,
                             const AveragingWindow& window,
                             const AnalyzeOptions& options = {});

// chi sweep over synthetic data for one regime preset. theta_taylor_nominal
// evaluates the expansion at the design targets (the theory curve);
// theta_taylor_measured at the measured psi0, a, chi.
struct SweepRow {
    double chi_target = 0.0;
    double chi_measured = 0.0;
    double psi0_target = 0.0;
    double psi0_measured = 0.0;
    double a_target = 0.0;  // NaN when the model takes no target
    double a_measured = 0.0;
    double gross_return = 0.0;
    double theta_exact = 0.0;
    double theta_markowitz = 0.0;
    double theta_taylor_nominal = 0.0;
    double theta_taylor_measured = 0.0;
    double theta_ratio = 0.0;  // exact / Markowitz
};

std::vector<SweepRow> sweep(RegimePreset regime, std::span<const double> chis,
                            const RegimeKnobs& knobs = {});

std::string sweep_csv(std::span<const SweepRow> rows);

}  // namespace mbv
