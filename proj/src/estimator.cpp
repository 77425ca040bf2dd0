#include "misolab/estimator.hpp"

#include <cmath>
#include <string>

#include "misolab/error.hpp"
#include "misolab/parallel.hpp"

namespace misolab {

MmseState reset(int m) {
    if (m < 1) throw Error(ErrorKind::InvalidDimension, "estimator dimension must be >= 1");
    return MmseState{ComplexVec::Zero(m), HermitianMat::Identity(m, m), 0};
}

UpdateReport update(MmseState& state, const ComplexVec& x, Complex y, Hygiene hygiene) {
    if (x.size() != state.h_hat.size())
        throw Error(ErrorKind::InvalidInput, "input has dim " + std::to_string(x.size()) + ", estimator has " +
                                                 std::to_string(state.h_hat.size()));

    UpdateReport report;
    const ComplexVec gain_dir = state.omega * x.conjugate();  // Ωx*
    const double denom = (x.transpose() * gain_dir).value().real() + 1.0;
    const Complex innovation = y - (x.transpose() * state.h_hat).value();

    report.increment = gain_dir * (innovation / denom);
    state.h_hat += report.increment;
#ifdef MISO_LAB_INJECT_SIGN_FLIP
    state.omega.noalias() += (gain_dir / denom) * gain_dir.adjoint();
#else
    // Ωx*xᵀΩ = (Ωx*)(Ωx*)ᴴ because Ω is Hermitian
    state.omega.noalias() -= (gain_dir / denom) * gain_dir.adjoint();
#endif
    ++state.t_in_block;

    state.omega = (0.5 * (state.omega + state.omega.adjoint())).eval();
    if (hygiene == Hygiene::Symmetrize) return report;

    Eigen::SelfAdjointEigenSolver<HermitianMat> solver(state.omega);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "eigen solve failed in update");
    const auto& ev = solver.eigenvalues();
    report.min_eig = ev.minCoeff();
    report.max_eig = ev.maxCoeff();
    report.spectrum_checked = true;
    if (hygiene == Hygiene::Inspect) return report;

    const double violation = std::max(-report.min_eig, report.max_eig - 1.0);
    if (violation > kSpectrumHardLimit)
        throw Error(ErrorKind::InvalidState, "covariance spectrum left [0, 1] by " + std::to_string(violation));
    if (violation > kSpectrumSlack) {
        const Eigen::VectorXd clipped = ev.cwiseMax(0.0).cwiseMin(1.0);
        state.omega = solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().adjoint();
        report.clipped = true;
    }
    return report;
}

namespace {

void validate_prior(const GaussPrior& prior) {
    const auto m = prior.mean.size();
    if (m < 1 || prior.cov.rows() != m || prior.cov.cols() != m)
        throw Error(ErrorKind::InvalidInput, "prior mean/cov dimensions disagree");
    const double scale = std::max(1.0, prior.cov.cwiseAbs().maxCoeff());
    if (!is_hermitian(prior.cov, 1e-12 * scale)) throw Error(ErrorKind::InvalidState, "prior covariance not Hermitian");
    if (hermitian_eigen_range(prior.cov).min < -kSpectrumSlack * scale)
        throw Error(ErrorKind::InvalidState, "prior covariance not PSD");
}

}  // namespace

GaussPrior update_general(const GaussPrior& prior, const ComplexMat& a_mat, const ComplexVec& y_vec) {
    validate_prior(prior);
    if (a_mat.cols() != prior.mean.size()) throw Error(ErrorKind::InvalidInput, "A must have prior-dim columns");
    if (a_mat.rows() != y_vec.size()) throw Error(ErrorKind::InvalidInput, "A rows must match y length");
    if (a_mat.rows() == 0) return prior;

    const ComplexMat a_omega = a_mat * prior.cov;  // AΩ
    ComplexMat innovation_cov = a_omega * a_mat.adjoint();
    innovation_cov += ComplexMat::Identity(a_mat.rows(), a_mat.rows());
    const Eigen::LDLT<ComplexMat> ldlt(innovation_cov);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "innovation covariance solve failed");

    const ComplexVec residual = y_vec - a_mat * prior.mean;
    GaussPrior post;
    post.mean = prior.mean + a_omega.adjoint() * ldlt.solve(residual);
    post.cov = prior.cov - a_omega.adjoint() * ldlt.solve(a_omega);
    post.cov = (0.5 * (post.cov + post.cov.adjoint())).eval();
    return post;
}

GaussPrior batch_condition(const GaussPrior& prior, std::span<const Observation> observations) {
    validate_prior(prior);
    const auto m = prior.mean.size();
    const auto n = static_cast<Eigen::Index>(observations.size());
    if (n == 0) return prior;

    ComplexMat rows(n, m);
    ComplexVec ys(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& obs = observations[static_cast<std::size_t>(i)];
        if (obs.row.size() != m) throw Error(ErrorKind::InvalidInput, "observation row has wrong dimension");
        rows.row(i) = obs.row.transpose();
        ys[i] = obs.y;
    }

    // Joint covariance blocks of (u, y): Σ_uy = Ω Aᴴ, Σ_yy = A Ω Aᴴ + I.
    const ComplexMat cross = prior.cov * rows.adjoint();
    const ComplexMat output_cov = rows * cross + ComplexMat::Identity(n, n);
    const Eigen::FullPivLU<ComplexMat> lu(output_cov);
    if (!lu.isInvertible()) throw Error(ErrorKind::NumericalFailure, "singular output covariance");

    GaussPrior post;
    post.mean = prior.mean + cross * lu.solve(ys - rows * prior.mean);
    post.cov = prior.cov - cross * lu.solve(cross.adjoint());
    return post;
}

GaussPrior as_prior(const MmseState& state) { return GaussPrior{state.h_hat, state.omega}; }

MmseState run_feedback_block(const Encoder& encoder, const ChannelConfig& cfg, RngStream& rng, int steps,
                             Hygiene hygiene, const std::function<void(const StepView&)>& observer,
                             ComplexVec* h_out) {
    if (steps < 0 || steps > cfg.coherence) throw Error(ErrorKind::InvalidInput, "steps must lie in [0, T_c]");
    const std::uint64_t message = rng.next_u64();
    BlockState block = new_block(cfg, rng);
    MmseState state = reset(cfg.antennas);
    std::vector<Complex> outputs;
    outputs.reserve(static_cast<std::size_t>(steps));

    for (int k = 0; k < steps; ++k) {
        const EncoderInput input{message, outputs, &state, cfg.antennas, cfg.power, k};
        const ComplexVec x = encoder(input);
        const Complex y = feedback(transmit(block, x, rng));
        outputs.push_back(y);
        const UpdateReport report = update(state, x, y, hygiene);
        if (observer) observer(StepView{k + 2, block.h, state, x, y, report});
    }
    if (h_out) *h_out = block.h;
    return state;
}

ErrorCovEstimate estimate_error_cov_mc(const Encoder& encoder, const ChannelConfig& cfg, int t, std::size_t trials,
                                       std::uint64_t seed) {
    cfg.validate();
    if (trials < 2) throw Error(ErrorKind::InvalidInput, "need at least two trials");
    if (t < 1 || t > cfg.coherence) throw Error(ErrorKind::InvalidInput, "t must lie in [1, T_c]");

    const int m = cfg.antennas;
    struct Sums {
        ComplexMat err_outer, err_outer_sq, cross, cross_sq, omega;
    };
    const ComplexMat zero = ComplexMat::Zero(m, m);
    const Sums init{zero, zero, zero, zero, zero};

    const Sums sums = reduce_trials(
        trials, init,
        [&](Sums& acc, std::size_t i) {
            RngStream rng(seed, i);
            ComplexVec h;
            const MmseState state = run_feedback_block(encoder, cfg, rng, t - 1, Hygiene::Symmetrize, {}, &h);
            const ComplexVec err = h - state.h_hat;
            const ComplexMat outer = err * err.adjoint();
            const ComplexMat cross = state.h_hat * err.adjoint();
            acc.err_outer += outer;
            acc.err_outer_sq += outer.cwiseAbs2().cast<Complex>();
            acc.cross += cross;
            acc.cross_sq += cross.cwiseAbs2().cast<Complex>();
            acc.omega += state.omega;
        },
        [](Sums& acc, const Sums& part) {
            acc.err_outer += part.err_outer;
            acc.err_outer_sq += part.err_outer_sq;
            acc.cross += part.cross;
            acc.cross_sq += part.cross_sq;
            acc.omega += part.omega;
        });

    const double n = static_cast<double>(trials);
    auto stderr_of = [n](const ComplexMat& sum, const ComplexMat& sum_sq) {
        // complex entries: Var = E|X|² - |EX|², real and imaginary parts jointly
        const Eigen::MatrixXd var = ((sum_sq.real() / n) - (sum / n).cwiseAbs2()).cwiseMax(0.0) * (n / (n - 1.0));
        return ComplexMat((var / n).cwiseSqrt().cast<Complex>());
    };

    ErrorCovEstimate out;
    out.trials = trials;
    out.empirical = sums.err_outer / n;
    out.empirical_stderr = stderr_of(sums.err_outer, sums.err_outer_sq);
    out.cross = sums.cross / n;
    out.cross_stderr = stderr_of(sums.cross, sums.cross_sq);
    out.mean_reported = sums.omega / n;
    return out;
}

}  // namespace misolab
