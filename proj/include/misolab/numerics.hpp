#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "misolab/rng.hpp"

namespace misolab {

using Complex = std::complex<double>;
using ComplexVec = Eigen::VectorXcd;
using ComplexMat = Eigen::MatrixXcd;
/// Square complex matrix expected to satisfy A == Aᴴ.
using HermitianMat = Eigen::MatrixXcd;

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// i.i.d. CN(0, 1) entries (unit total variance per entry).
ComplexVec sample_cn(int dim, RngStream& rng);

/// Digamma ψ(x), x > 0. Integer arguments use the harmonic series
/// ψ(m) = -γ + Σ_{p<m} 1/p; everything else uses recurrence plus the
/// asymptotic expansion.
double digamma(double x);

/// E[log₂ u] for u ~ χ²(k), k even: (ψ(k/2) + ln 2) / ln 2.
double chi2_log_mean_bits(int k);

/// log₂ max{k - 2, 1}, the lower bound on E[log₂ u] for u ~ χ²(k), k even.
double chi2_log_lower_bound_bits(int k);

/// Density of ‖h‖² for h ~ CN(0, I_M), i.e. Gamma(M, 1).
double gamma_density(double g, int shape_m);

/// Interval outside of which Gamma(M, 1) carries less than ~1e-15 of its mass.
struct Support {
    double lo;
    double hi;
};
Support gamma_effective_support(int shape_m);

/// Fixed-order Gauss-Legendre rule on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

/// Adaptive Gauss-Legendre: bisects until the two-half estimate agrees with
/// the whole-interval estimate to within max(abs_tol, rel_tol·|I|).
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-13,
                 double rel_tol = 1e-13, int panels = 16);

bool is_hermitian(const ComplexMat& m, double tol = 1e-12);

/// Smallest and largest eigenvalue of a Hermitian matrix.
struct EigenRange {
    double min;
    double max;
};
EigenRange hermitian_eigen_range(const HermitianMat& m);

}  // namespace misolab
