#pragma once

#include "opinion/design.hpp"
#include "opinion/spectrum.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace opinion {

/// Right/left null vectors of a matrix with a simple zero eigenvalue,
/// normalized so w^T v = 1. v is scaled to have its largest-magnitude
/// entry equal to +1.
struct NullPair {
    Eigen::VectorXd v;
    Eigen::VectorXd w;
};

/// Rank-revealing extraction (pivot tolerance 1e-10) of the null pair.
/// Throws NumericError when zero is not in the spectrum or the kernel is
/// not one-dimensional (multiplicity reported in the message).
NullPair null_pair(const Eigen::MatrixXd& l);

/// Row sums equal column sums within tol.
bool weight_balanced(const Eigen::MatrixXd& m, double tol = 1e-10);

enum class Stability { Stable, Marginal, Unstable };

std::string to_string(Stability s);

/// Verdict over the nonzero spectrum of Lz: Stable iff every eigenvalue
/// other than the single zero has real part > 1e-10; Marginal when some
/// eigenvalue sits within +-1e-10 of the imaginary axis; Unstable when a
/// real part < -1e-10 exists.
Stability stability_verdict(const SpectrumReport& lz_spectrum);

enum class PredictMethod { General, UniformCorollary, Block };

struct SteadyStatePrediction {
    Eigen::VectorXd xf;
    Eigen::VectorXd v; // right null vector of Lz
    Eigen::VectorXd w; // left null vector, w^T v = 1
    int n_zero = 1;    // zero eigenvalues used
    PredictMethod method = PredictMethod::General;
};

/// Steady state x_f = P^-1 v (w^T P x0) from the null pair of Lz.
/// Requires a stable design (nonzero eigenvalues of Lz in the open right
/// half plane); throws NumericError otherwise. Block designs are routed
/// through predict_block.
SteadyStatePrediction predict_steady_state(const DesignResult& design,
                                           const Eigen::VectorXd& x0);

/// Uniform-left-vector shortcut x_f = (1/n) P^-1 1 1^T P x0. Only valid
/// when Az is weight-balanced (checked, tolerance 1e-10); otherwise throws
/// InputError directing the caller to predict_steady_state.
SteadyStatePrediction predict_uniform(const DesignResult& design,
                                      const Eigen::VectorXd& x0);

/// Block steady state: leader part P1^-1 1_r (w1^T P1 x0_L), follower part
/// -P2^-1 Lz22^-1 Lz21 1_r (w1^T P1 x0_L), with w1 the leader block's left
/// null vector normalized against its right null vector. x0 and the result
/// are in original vertex order (the design's ordering is applied
/// internally).
SteadyStatePrediction predict_block(const DesignResult& design,
                                    const Eigen::VectorXd& x0);

struct OpinionState {
    double t = 0.0;
    Eigen::VectorXd x;
};

struct Trajectory {
    std::vector<OpinionState> samples;
    double dt = 0.0;
    bool converged = false;
    double t_converged = -1.0; // first time ||Lx x||_inf < settle_tol
    std::string warning;       // set when dt exceeds the stability guard
};

struct SimOptions {
    double dt = 1e-3;
    double t_end = 20.0;
    double settle_tol = 1e-9; // convergence detection on ||xdot||_inf; 0 disables
    int max_samples = 10000;  // uniform thinning cap; 0 keeps every step
};

/// Fixed-step classical RK4 integration of xdot = -Lx x from t = 0.
/// Integration always runs to t_end; convergence is only detected, not an
/// early exit. Samples are thinned to at most max_samples rows (first and
/// last always retained). Throws InputError on bad dt/t_end/x0 and
/// NumericError when a non-finite state appears (message carries the first
/// bad timestamp).
Trajectory simulate(const Eigen::MatrixXd& lx, const Eigen::VectorXd& x0,
                    const SimOptions& opt);

struct VerificationReport {
    SteadyStatePrediction prediction;
    Eigen::VectorXd xf_simulated;
    double max_error = 0.0; // ||xf_pred - x(t_end)||_inf
    Stability stability = Stability::Stable;
    SpectrumReport lz_spectrum;
    bool converged = false;
    double t_converged = -1.0;
    double tolerance = 0.0; // 1e-6 after convergence, 1e-3 at fixed t_end
    bool pass = false;
    Trajectory trajectory; // original vertex order
};

/// Runs the applicable predictor plus the simulator and compares.
/// x0 in original vertex order; block designs are permuted internally.
/// A non-stable spectrum short-circuits to a failing report instead of
/// integrating a divergent system.
VerificationReport verify(const DesignResult& design, const Eigen::VectorXd& x0,
                          const SimOptions& opt);

} // namespace opinion
