#pragma once

#include <span>
#include <vector>

#include "core/moments.hpp"
#include "core/types.hpp"

namespace mbv {

// Small dense symmetric matrix, row-major.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(std::size_t size)
        : size_(size), data_(size * size, 0.0) {}

    std::size_t size() const noexcept { return size_; }
    double at(std::size_t j, std::size_t k) const { return data_[j * size_ + k]; }
    void set(std::size_t j, std::size_t k, double v) {
        data_[j * size_ + k] = v;
        data_[k * size_ + j] = v;
    }
    const std::vector<double>& data() const noexcept { return data_; }

private:
    std::size_t size_ = 0;
    std::vector<double> data_;
};

// chi_j: coefficient of variation of one security's bucket volumes.
// Scale-invariant, so aligned and normalized series give the same value.
double security_volume_cv(std::span<const double> volumes);

// Decomposition of the portfolio volume CV by securities:
//   chi_jk = cov{U_j, U_k} / (mean U_j mean U_k) = beta_jk chi_j chi_k,
//   chi^2 = sum_jk beta_jk chi_j chi_k x_j x_k  (exact identity).
// beta_jk is declared 0 when chi_j chi_k vanishes; beta_jj stays 1.
struct VolumeCvDecomposition {
    std::vector<double> chi_j;
    SymmetricMatrix chi_jk;
    SymmetricMatrix beta_jk;
    std::vector<double> beta_j;      // row sums of beta_jk
    std::vector<double> x_weights;   // x_j(t0)
    double chi_sq_reconstructed = 0.0;
};

VolumeCvDecomposition volume_cv_matrix(std::span<const AlignedSeries> series,
                                       const PortfolioSpec& spec);
VolumeCvDecomposition volume_cv_matrix(std::span<const NormalizedSeries> series,
                                       const PortfolioSpec& spec);

// First-order reconstruction chi ~ sum_j beta_j chi_j x_j. A diagnostic;
// exact only in degenerate correlation structures.
double chi_linear_decomposition(const VolumeCvDecomposition& decomp);

// theta_jk: biased (1/N) covariances of instant gross returns about their
// unweighted means.
SymmetricMatrix return_covariance_matrix(std::span<const ReturnSeries> series);

// Theta_M = sum_jk theta_jk X_j X_k. Weights must sum to 1 (rel 1e-12).
double markowitz_quadratic_form(const SymmetricMatrix& covariance,
                                std::span<const double> value_weights);

// Full second-order decomposition of the portfolio variance by securities:
// the bracketed mu expansion times sum_jk R_j R_k X_j X_k. The return factor
// must match (sum_j R_j X_j)^2 to relative 1e-10.
struct TaylorDecomposition {
    double theta = 0.0;
    double mu = 0.0;
    double chi_linear = 0.0;      // sum beta_j chi_j x_j
    double chi_sq_bilinear = 0.0; // sum beta_jk chi_j chi_k x_j x_k
    double return_factor = 0.0;   // sum R_j R_k X_j X_k
};

TaylorDecomposition taylor_decomposition(
    double psi0, double a, const VolumeCvDecomposition& decomp,
    std::span<const double> security_returns,
    std::span<const double> value_weights);

}  // namespace mbv
