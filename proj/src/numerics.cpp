#include "misolab/numerics.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "misolab/error.hpp"

namespace misolab {

ComplexVec sample_cn(int dim, RngStream& rng) {
    if (dim < 1) throw Error(ErrorKind::InvalidDimension, "sample_cn needs dim >= 1");
    ComplexVec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.complex_normal();
    return v;
}

double digamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorKind::Domain, "digamma needs a finite x > 0");

    if (x == std::floor(x) && x <= 1.0e4) {
        const auto m = static_cast<long>(x);
        double harmonic = 0.0;
        // summed smallest-first to keep the rounding error well under 1e-13
        for (long p = m - 1; p >= 1; --p) harmonic += 1.0 / static_cast<double>(p);
        return -kEulerGamma + harmonic;
    }

    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv2 = 1.0 / (x * x);
    // Bernoulli-number tail: B2/2, B4/4, ..., B12/12
    const double tail =
        inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * 691.0 / 32760)))));
    return shift + std::log(x) - 0.5 / x - tail;
}

namespace {

void require_even_positive(int k, const char* what) {
    if (k < 2 || k % 2 != 0) throw Error(ErrorKind::Domain, std::string(what) + " needs an even k >= 2");
}

}  // namespace

double chi2_log_mean_bits(int k) {
    require_even_positive(k, "chi2_log_mean_bits");
    return (digamma(k / 2) + std::numbers::ln2) / std::numbers::ln2;
}

double chi2_log_lower_bound_bits(int k) {
    require_even_positive(k, "chi2_log_lower_bound_bits");
    return std::log2(std::max(k - 2, 1));
}

double gamma_density(double g, int shape_m) {
    if (shape_m < 1) throw Error(ErrorKind::Domain, "gamma_density needs shape >= 1");
    if (!(g >= 0.0)) throw Error(ErrorKind::Domain, "gamma_density needs g >= 0");
    if (g == 0.0) return shape_m == 1 ? 1.0 : 0.0;
    const double log_density = (shape_m - 1) * std::log(g) - g - std::lgamma(static_cast<double>(shape_m));
    return std::exp(log_density);
}

Support gamma_effective_support(int shape_m) {
    const double m = shape_m;
    const double spread = std::sqrt(m);
    return {std::max(0.0, m - 12.0 * spread - 12.0), m + 14.0 * spread + 40.0};
}

namespace {

constexpr int kOrder = 20;

struct LegendreRule {
    std::array<double, kOrder> nodes{};
    std::array<double, kOrder> weights{};
};

LegendreRule make_rule() {
    LegendreRule rule;
    for (int i = 0; i < kOrder; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
        double derivative = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int n = 2; n <= kOrder; ++n) {
                const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            derivative = kOrder * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / derivative;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * derivative * derivative);
    }
    return rule;
}

const LegendreRule& rule() {
    static const LegendreRule instance = make_rule();
    return instance;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double whole, double abs_tol,
                double rel_tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gauss_legendre(f, a, mid);
    const double right = gauss_legendre(f, mid, b);
    const double refined = left + right;
    if (depth >= 40 || std::abs(refined - whole) <= std::max(abs_tol, rel_tol * std::abs(refined))) return refined;
    return adaptive(f, a, mid, left, 0.5 * abs_tol, rel_tol, depth + 1) +
           adaptive(f, mid, b, right, 0.5 * abs_tol, rel_tol, depth + 1);
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
    const auto& r = rule();
    const double half = 0.5 * (b - a);
    const double center = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < kOrder; ++i) sum += r.weights[i] * f(center + half * r.nodes[i]);
    return half * sum;
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol,
                 int panels) {
    if (!(b > a)) return 0.0;
    if (panels < 1) panels = 1;
    const double width = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double hi = p + 1 == panels ? b : lo + width;
        total += adaptive(f, lo, hi, gauss_legendre(f, lo, hi), abs_tol / panels, rel_tol, 0);
    }
    return total;
}

bool is_hermitian(const ComplexMat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    if (!m.allFinite()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

EigenRange hermitian_eigen_range(const HermitianMat& m) {
    Eigen::SelfAdjointEigenSolver<HermitianMat> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "eigenvalue solve failed");
    const auto& ev = solver.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff()};
}

}  // namespace misolab
