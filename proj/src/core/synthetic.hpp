#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/types.hpp"

namespace mbv {

// Generation family for the volume process.
//  - correlated_lognormal: price and volume are exponentiated near-normal
//    variates; a mixing coefficient solved by bisection induces the target
//    value-volume correlation a. Feasible only where the data manifold
//    permits: with chi >> psi0 the correlation of values and volumes is
//    pinned near 1 regardless of the price process.
//  - volume_burst: constant base volume plus a deterministic set of
//    high-volume buckets with a co-moving price level. Reproduces the
//    low-psi0 regime where the weighted price variance far exceeds the
//    unweighted one. The correlation target is ignored (reported ~1).
enum class VolumeModel { correlated_lognormal, volume_burst };

struct GeneratorSpec {
    std::uint64_t seed = 1;
    int securities = 1;  // J
    int buckets = 1000;  // N
    double target_price_cv = 0.2;        // psi0 in [0, 1.5]
    double target_volume_cv = 0.2;       // chi in [0, 1]
    std::optional<double> target_corr_a; // a in [-1, 1]; unset = natural
    // Uniform cross-security volume correlation target (common factor
    // loading). Exact matrix matching is not promised.
    std::optional<double> volume_common_corr;
    double base_price = 100.0;
    double base_volume = 1000.0;
    VolumeModel model = VolumeModel::correlated_lognormal;
    // Portfolio holdings; default is the generated traded volume per
    // security, which makes every normalization scale exactly 1.
    std::optional<std::vector<double>> holdings_override;
    // Timestamp layout used when the series is emitted as trades.
    double window_start = 0.0;
    double bucket_seconds = 1.0;

    void validate() const;
};

struct GeneratedData {
    std::vector<AlignedSeries> series;  // portfolio security order
    PortfolioSpec portfolio;
    GeneratorSpec spec;

    AveragingWindow window() const;
};

// Deterministic: the spec (seed included) fully determines the output.
// Throws InfeasibleTargets when no mixing coefficient reaches the requested
// correlation for the requested CV pair.
GeneratedData generate(const GeneratorSpec& spec);

enum class RegimePreset { high_psi0, low_psi0, zero_covariance };

struct RegimeKnobs {
    std::optional<double> chi;
    std::optional<double> a;
    std::optional<double> psi0;
    int buckets = 10000;
    std::uint64_t seed = 1;
    int securities = 1;
};

// Preset GeneratorSpec for the three limiting cases. Preset values are
// implementation choices inside the qualitative ranges: high_psi0 -> 0.95,
// low_psi0 -> 0.03 (burst model), zero_covariance -> a = 0 with psi0 = 1
// (lower psi0 cannot keep a at zero once chi exceeds it).
GeneratorSpec generate_regime(RegimePreset regime, const RegimeKnobs& knobs = {});

const char* regime_preset_name(RegimePreset regime);
RegimePreset regime_preset_from_name(const std::string& name);

// Feasible correlation range [a_min, a_max] of the lognormal family at the
// given CV targets (exposed for tests and error messages).
std::pair<double, double> feasible_correlation_range(double price_cv,
                                                     double volume_cv);

}  // namespace mbv
