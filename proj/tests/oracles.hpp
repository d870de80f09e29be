// Test-only reference implementations: plain textbook loops, independent of
// the compensated summation paths in the library.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

inline double covariance(const std::vector<double>& a,
                         const std::vector<double>& b) {
    const double ma = mean(a);
    const double mb = mean(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(a.size());
}

inline double vwap(const std::vector<double>& prices,
                   const std::vector<double>& volumes) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        num += prices[i] * volumes[i];
        den += volumes[i];
    }
    return num / den;
}

// W^2-weighted squared deviation of prices from their VWAP
inline double weighted_price_variance(const std::vector<double>& prices,
                                      const std::vector<double>& volumes) {
    const double s = vwap(prices, volumes);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        const double d = prices[i] - s;
        num += d * d * volumes[i] * volumes[i];
        den += volumes[i] * volumes[i];
    }
    return num / den;
}

// smallest eigenvalue via cyclic Jacobi rotations (small symmetric matrices)
inline double smallest_eigenvalue(std::vector<std::vector<double>> m) {
    const std::size_t n = m.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += m[p][q] * m[p][q];
        if (off < 1e-26) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(m[p][q]) < 1e-300) continue;
                const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) +
                                  std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m[k][p];
                    const double mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m[p][k];
                    const double mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    double lo = m[0][0];
    for (std::size_t k = 1; k < n; ++k) lo = std::min(lo, m[k][k]);
    return lo;
}

inline double rel_diff(double a, double b) {
    const double scale = std::fmax(std::fabs(a), std::fabs(b));
    if (scale == 0.0) return 0.0;
    return std::fabs(a - b) / scale;
}

// deterministic uniform helpers for randomized tests
class Rand {
public:
    explicit Rand(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(engine_() %
                                     static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace oracle
