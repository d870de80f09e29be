#include "core/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "core/errors.hpp"
#include "core/sum.hpp"

namespace mbv {

namespace {

// --- deterministic variates -------------------------------------------------
//
// mt19937_64 output is pinned by the standard, so the draw sequence is
// platform-independent. Normals come from a sum of 12 uniforms (bounded,
// branch-free); their exact moment generating function
//   M(s) = ((e^s - 1)/s)^12 e^{-6s}
// is used below when solving generator parameters, so the analytic CV
// targeting does not assume true Gaussian tails.

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double normal12() {
        double s = 0.0;
        for (int k = 0; k < 12; ++k) s += uniform();
        return s - 6.0;
    }

private:
    std::mt19937_64 engine_;
};

// log E[e^{s Z}] for the 12-uniform normal.
double log_mgf(double s) {
    if (s == 0.0) return 0.0;
    return 12.0 * std::log(std::expm1(s) / s) - 6.0 * s;
}

// Composite volume variate: sqrt(gamma) common + sqrt(1-gamma) own factor.
double log_mgf_composite(double s, double gamma) {
    if (gamma <= 0.0) return log_mgf(s);
    return log_mgf(s * std::sqrt(gamma)) + log_mgf(s * std::sqrt(1.0 - gamma));
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        raise(ErrorCode::internal, "bisection bracket does not straddle a root");
    for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if (flo * fmid < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

// --- correlated lognormal family ---------------------------------------------
//
// volume_i = B_w exp(sv Zhat_i) / E[...]        (Zhat: composite variate)
// price_i  = B_s exp(rho sp Zhat_i + tau H_i) / E[...],  tau = sqrt(1-rho^2) sp
//
// Every population moment reduces to products of the explicit MGFs, so the
// CV and correlation targets are solved against exact expressions.

struct LognormalParams {
    double sigma_volume = 0.0;  // sv
    double sigma_price = 0.0;   // sp
    double rho = 0.0;
    double gamma = 0.0;
};

double volume_cv_sq(double sv, double gamma) {
    return std::expm1(log_mgf_composite(2.0 * sv, gamma) -
                      2.0 * log_mgf_composite(sv, gamma));
}

double price_cv_sq(double sp, double rho, double gamma) {
    const double tau = std::sqrt(std::max(0.0, 1.0 - rho * rho)) * sp;
    const double ln = log_mgf_composite(2.0 * rho * sp, gamma) +
                      log_mgf(2.0 * tau) -
                      2.0 * (log_mgf_composite(rho * sp, gamma) + log_mgf(tau));
    return std::expm1(ln);
}

double solve_sigma_volume(double chi, double gamma) {
    if (chi <= 0.0) return 0.0;
    const double target = chi * chi;
    return bisect([&](double s) { return volume_cv_sq(s, gamma) - target; },
                  0.0, 8.0, 1e-13);
}

double solve_sigma_price(double psi0, double rho, double gamma) {
    if (psi0 <= 0.0) return 0.0;
    const double target = psi0 * psi0;
    return bisect([&](double s) { return price_cv_sq(s, rho, gamma) - target; },
                  0.0, 8.0, 1e-13);
}

// Value-volume correlation a = phi / (psi chi) at given mixing rho,
// with sigma_price re-solved so the price CV target is held.
double correlation_at(double rho, double psi0, double chi, double sv,
                      double gamma) {
    if (chi <= 0.0) return 0.0;
    const double sp = solve_sigma_price(psi0, rho, gamma);
    const double tau = std::sqrt(std::max(0.0, 1.0 - rho * rho)) * sp;
    const double e = rho * sp + sv;  // value exponent on the composite variate

    const double phi = std::expm1(log_mgf_composite(rho * sp + 2.0 * sv, gamma) -
                                  log_mgf_composite(e, gamma) -
                                  log_mgf_composite(sv, gamma));
    const double psi_sq =
        std::expm1(log_mgf_composite(2.0 * e, gamma) + log_mgf(2.0 * tau) -
                   2.0 * (log_mgf_composite(e, gamma) + log_mgf(tau)));
    const double chi_sq = volume_cv_sq(sv, gamma);
    const double denom = std::sqrt(psi_sq * chi_sq);
    if (denom == 0.0) return 0.0;
    return phi / denom;
}

struct CorrelationSolve {
    double rho = 0.0;
    double a_min = 0.0;
    double a_max = 0.0;
    bool feasible = true;
};

CorrelationSolve solve_rho(double target_a, double psi0, double chi,
                           double sv, double gamma) {
    auto a_of = [&](double rho) {
        return correlation_at(rho, psi0, chi, sv, gamma);
    };

    // a(rho) can dip to an interior minimum when chi exceeds psi0; locate it
    // first, then bisect on the increasing right branch.
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 120; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (a_of(m1) < a_of(m2))
            hi = m2;
        else
            lo = m1;
    }
    const double rho_min = 0.5 * (lo + hi);

    CorrelationSolve out;
    out.a_min = a_of(rho_min);
    out.a_max = std::max(a_of(1.0), a_of(-1.0));

    constexpr double kSlack = 1e-9;
    if (target_a < out.a_min - kSlack || target_a > a_of(1.0) + kSlack) {
        // the left branch may still reach targets between a(-1) and a_min
        if (target_a >= out.a_min - kSlack && target_a <= a_of(-1.0) + kSlack) {
            out.rho = bisect(
                [&](double r) { return a_of(r) - target_a; }, -1.0, rho_min,
                1e-6);
            return out;
        }
        out.feasible = false;
        return out;
    }
    const double a_lo = a_of(rho_min);
    const double a_hi = a_of(1.0);
    if (target_a <= a_lo) {
        out.rho = rho_min;
    } else if (target_a >= a_hi) {
        out.rho = 1.0;
    } else {
        out.rho = bisect([&](double r) { return a_of(r) - target_a; }, rho_min,
                         1.0, 1e-6);
    }
    return out;
}

// --- burst family -------------------------------------------------------------

struct BurstParams {
    int burst_count = 0;       // m deterministic high-volume buckets
    double volume_factor = 1.0;  // k
    double price_jump = 0.0;     // d: burst price level (1 + d) x base
    double sigma_base = 0.0;     // base price jitter exponent scale
};

double burst_volume_cv_sq(double f, double k) {
    const double g = 1.0 + f * (k - 1.0);
    return f * (1.0 - f) * (k - 1.0) * (k - 1.0) / (g * g);
}

BurstParams solve_burst(double psi0, double chi, int n) {
    if (psi0 <= 0.0)
        raise(ErrorCode::infeasible_targets,
              "volume_burst model needs a positive price CV target");
    if (chi <= 0.0)
        raise(ErrorCode::infeasible_targets,
              "volume_burst model needs a positive volume CV target");

    // Amplification closure: aim the W^2-weighted/unweighted price variance
    // ratio near (chi/psi0)^2, the low-psi0 limiting value.
    const double ratio = 0.85 * (chi / psi0) * (chi / psi0);
    const double k = std::sqrt(std::max(4.0, ratio * (1.0 + chi * chi)));
    const double f0 = chi * chi / ((k - 1.0) * (k - 1.0));
    BurstParams p;
    p.burst_count = std::max(1, static_cast<int>(std::lround(f0 * n)));
    if (p.burst_count >= n / 2)
        raise(ErrorCode::infeasible_targets,
              "volume_burst model cannot reach the volume CV target at this N");
    const double f = static_cast<double>(p.burst_count) / n;

    // exact k for the integer burst count
    p.volume_factor = bisect(
        [&](double kk) { return burst_volume_cv_sq(f, kk) - chi * chi; }, 1.0,
        1e7, 1e-10);

    // base jitter carries a fixed 20% share of the price variance
    const double base_share = 0.2;
    const double cv_base_sq = base_share * psi0 * psi0;
    p.sigma_base = bisect(
        [&](double t) {
            return std::expm1(log_mgf(2.0 * t) - 2.0 * log_mgf(t)) - cv_base_sq;
        },
        0.0, 4.0, 1e-13);

    // price jump from the unweighted price CV target:
    //   mean = 1 + f d,  E[s^2] = (1-f)(1+cv_base^2) + f (1+d)^2
    p.price_jump = bisect(
        [&](double d) {
            const double mean = 1.0 + f * d;
            const double second =
                (1.0 - f) * (1.0 + cv_base_sq) + f * (1.0 + d) * (1.0 + d);
            return second / (mean * mean) - 1.0 - psi0 * psi0;
        },
        0.0, 1e4, 1e-12);
    return p;
}

}  // namespace

void GeneratorSpec::validate() const {
    if (securities < 1)
        raise(ErrorCode::invalid_argument, "generator needs at least 1 security");
    if (buckets < 2)
        raise(ErrorCode::invalid_argument, "generator needs at least 2 buckets");
    if (!(target_price_cv >= 0.0) || target_price_cv > 1.5)
        raise(ErrorCode::invalid_argument, "target price CV must lie in [0, 1.5]");
    if (!(target_volume_cv >= 0.0) || target_volume_cv > 1.0)
        raise(ErrorCode::invalid_argument, "target volume CV must lie in [0, 1]");
    if (target_corr_a && std::fabs(*target_corr_a) > 1.0)
        raise(ErrorCode::invalid_argument, "target correlation must lie in [-1, 1]");
    if (volume_common_corr &&
        (*volume_common_corr < 0.0 || *volume_common_corr >= 1.0))
        raise(ErrorCode::infeasible_targets,
              "cross-security volume correlation must lie in [0, 1) for the "
              "common-factor model");
    if (!(base_price > 0.0) || !(base_volume > 0.0))
        raise(ErrorCode::invalid_argument, "base price/volume must be > 0");
    if (!(bucket_seconds > 0.0))
        raise(ErrorCode::invalid_argument, "bucket duration must be > 0");
    if (holdings_override &&
        holdings_override->size() != static_cast<std::size_t>(securities))
        raise(ErrorCode::mismatched_length,
              "holdings override needs one entry per security");
}

AveragingWindow GeneratedData::window() const {
    return AveragingWindow::from_extent(
        spec.window_start,
        spec.window_start + spec.bucket_seconds * spec.buckets, spec.buckets);
}

std::pair<double, double> feasible_correlation_range(double price_cv,
                                                     double volume_cv) {
    const double sv = solve_sigma_volume(volume_cv, 0.0);
    const CorrelationSolve s = solve_rho(2.0, price_cv, volume_cv, sv, 0.0);
    return {s.a_min, s.a_max};
}

GeneratedData generate(const GeneratorSpec& spec) {
    spec.validate();
    const int n = spec.buckets;
    const int j_count = spec.securities;
    const double psi0 = spec.target_price_cv;
    const double chi = spec.target_volume_cv;
    const double gamma =
        j_count > 1 ? spec.volume_common_corr.value_or(0.0) : 0.0;

    GeneratedData out;
    out.spec = spec;
    Rng rng(spec.seed);

    std::vector<double> base_prices(j_count);
    for (int j = 0; j < j_count; ++j)
        base_prices[static_cast<std::size_t>(j)] =
            spec.base_price * (1.0 + 0.1 * j);

    if (spec.model == VolumeModel::correlated_lognormal) {
        const double sv = solve_sigma_volume(chi, gamma);
        double rho = 0.0;
        if (spec.target_corr_a && chi > 0.0) {
            if (psi0 <= 0.0) {
                // constant prices force values proportional to volumes: a = 1
                if (std::fabs(*spec.target_corr_a - 1.0) > 0.1)
                    raise(ErrorCode::infeasible_targets,
                          "constant prices pin the value-volume correlation at "
                          "1; requested " + std::to_string(*spec.target_corr_a));
            } else {
                const CorrelationSolve s =
                    solve_rho(*spec.target_corr_a, psi0, chi, sv, gamma);
                if (!s.feasible)
                    raise(ErrorCode::infeasible_targets,
                          "correlation target " +
                              std::to_string(*spec.target_corr_a) +
                              " is unreachable at price CV " +
                              std::to_string(psi0) + ", volume CV " +
                              std::to_string(chi) + "; feasible range is [" +
                              std::to_string(s.a_min) + ", " +
                              std::to_string(s.a_max) + "]");
                rho = s.rho;
            }
        }
        const double sp = solve_sigma_price(psi0, rho, gamma);
        const double tau = std::sqrt(std::max(0.0, 1.0 - rho * rho)) * sp;

        // mean corrections so E[volume] = base_volume, E[price] = base_price
        const double vol_norm = std::exp(log_mgf_composite(sv, gamma));
        const double price_norm =
            std::exp(log_mgf_composite(rho * sp, gamma) + log_mgf(tau));

        const double sg = std::sqrt(gamma);
        const double so = std::sqrt(1.0 - gamma);

        out.series.resize(static_cast<std::size_t>(j_count));
        for (int j = 0; j < j_count; ++j) {
            out.series[static_cast<std::size_t>(j)].security =
                "SYN" + std::to_string(j);
            out.series[static_cast<std::size_t>(j)].buckets.reserve(
                static_cast<std::size_t>(n));
        }

        // antithetic bucket pairs damp the sampling error of the measured CVs
        std::vector<double> zhat(static_cast<std::size_t>(j_count));
        std::vector<double> h(static_cast<std::size_t>(j_count));
        for (int i = 0; i < n; ++i) {
            if (i % 2 == 0) {
                const double common = rng.normal12();
                for (int j = 0; j < j_count; ++j) {
                    const double own = rng.normal12();
                    zhat[static_cast<std::size_t>(j)] = sg * common + so * own;
                    h[static_cast<std::size_t>(j)] = rng.normal12();
                }
            } else {
                for (int j = 0; j < j_count; ++j) {
                    zhat[static_cast<std::size_t>(j)] =
                        -zhat[static_cast<std::size_t>(j)];
                    h[static_cast<std::size_t>(j)] = -h[static_cast<std::size_t>(j)];
                }
            }
            for (int j = 0; j < j_count; ++j) {
                const double z = zhat[static_cast<std::size_t>(j)];
                const double volume =
                    spec.base_volume * std::exp(sv * z) / vol_norm;
                const double price =
                    base_prices[static_cast<std::size_t>(j)] *
                    std::exp(rho * sp * z + tau * h[static_cast<std::size_t>(j)]) /
                    price_norm;
                out.series[static_cast<std::size_t>(j)].buckets.push_back(
                    {price * volume, volume});
            }
        }
    } else {
        if (spec.target_corr_a)
            raise(ErrorCode::infeasible_targets,
                  "volume_burst model does not take a correlation target; the "
                  "burst structure pins it near 1");
        const BurstParams p = solve_burst(psi0, chi, n);
        const double price_norm = std::exp(log_mgf(p.sigma_base));

        // deterministic, evenly spread burst positions with a seeded phase
        const int m = p.burst_count;
        const int phase = static_cast<int>(rng.uniform() * n);
        std::vector<bool> is_burst(static_cast<std::size_t>(n), false);
        for (int t = 0; t < m; ++t) {
            const long idx =
                (static_cast<long>(t) * n / m + phase) % n;
            is_burst[static_cast<std::size_t>(idx)] = true;
        }

        out.series.resize(static_cast<std::size_t>(j_count));
        for (int j = 0; j < j_count; ++j) {
            auto& series = out.series[static_cast<std::size_t>(j)];
            series.security = "SYN" + std::to_string(j);
            series.buckets.reserve(static_cast<std::size_t>(n));
        }
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < j_count; ++j) {
                auto& series = out.series[static_cast<std::size_t>(j)];
                const double base = base_prices[static_cast<std::size_t>(j)];
                double price;
                double volume;
                if (is_burst[static_cast<std::size_t>(i)]) {
                    price = base * (1.0 + p.price_jump);
                    volume = spec.base_volume * p.volume_factor;
                } else {
                    price = base * std::exp(p.sigma_base * rng.normal12()) /
                            price_norm;
                    volume = spec.base_volume;
                }
                series.buckets.push_back({price * volume, volume});
            }
        }
    }

    out.portfolio = PortfolioSpec(spec.window_start);
    for (int j = 0; j < j_count; ++j) {
        const auto& series = out.series[static_cast<std::size_t>(j)];
        double holding;
        if (spec.holdings_override) {
            holding = (*spec.holdings_override)[static_cast<std::size_t>(j)];
        } else {
            // same compensated sum the aggregation stage uses, so lambda_j
            // comes out exactly 1
            KahanSum total;
            for (const Bucket& b : series.buckets) total.add(b.volume);
            holding = total.value();
        }
        out.portfolio.add(series.security, holding,
                          base_prices[static_cast<std::size_t>(j)]);
    }
    return out;
}

GeneratorSpec generate_regime(RegimePreset regime, const RegimeKnobs& knobs) {
    GeneratorSpec spec;
    spec.seed = knobs.seed;
    spec.buckets = knobs.buckets;
    spec.securities = knobs.securities;
    switch (regime) {
        case RegimePreset::high_psi0:
            spec.target_price_cv = knobs.psi0.value_or(0.95);
            spec.target_volume_cv = knobs.chi.value_or(0.5);
            spec.target_corr_a = knobs.a.value_or(0.6);
            spec.model = VolumeModel::correlated_lognormal;
            break;
        case RegimePreset::low_psi0:
            spec.target_price_cv = knobs.psi0.value_or(0.03);
            spec.target_volume_cv = knobs.chi.value_or(0.5);
            spec.target_corr_a = std::nullopt;  // pinned near 1 by the bursts
            if (knobs.a)
                raise(ErrorCode::infeasible_targets,
                      "the low-psi0 regime uses the volume_burst model, which "
                      "takes no correlation target");
            spec.model = VolumeModel::volume_burst;
            break;
        case RegimePreset::zero_covariance:
            spec.target_price_cv = knobs.psi0.value_or(1.0);
            spec.target_volume_cv = knobs.chi.value_or(0.5);
            spec.target_corr_a = knobs.a.value_or(0.0);
            spec.model = VolumeModel::correlated_lognormal;
            break;
    }
    return spec;
}

const char* regime_preset_name(RegimePreset regime) {
    switch (regime) {
        case RegimePreset::high_psi0: return "HIGH_PSI0";
        case RegimePreset::low_psi0: return "LOW_PSI0";
        case RegimePreset::zero_covariance: return "ZERO_COV";
    }
    return "UNKNOWN";
}

RegimePreset regime_preset_from_name(const std::string& name) {
    if (name == "HIGH_PSI0" || name == "high_psi0") return RegimePreset::high_psi0;
    if (name == "LOW_PSI0" || name == "low_psi0") return RegimePreset::low_psi0;
    if (name == "ZERO_COV" || name == "zero_covariance" || name == "zero_cov")
        return RegimePreset::zero_covariance;
    raise(ErrorCode::invalid_argument, "unknown regime '" + name + "'");
}

}  // namespace mbv
