#pragma once

#include <Eigen/Dense>

namespace opinion {

/// Dense eigenvalue report. `leading_in_spectrum` says whether +rho(M) is
/// itself an eigenvalue (the Perron situation for nonnegative matrices);
/// `leading_simple` whether that eigenvalue has multiplicity one. Both are
/// decided with gap tolerance 1e-8.
struct SpectrumReport {
    Eigen::VectorXcd eigenvalues;
    double spectral_radius = 0.0;
    bool leading_in_spectrum = false;
    bool leading_simple = false;
    bool converged = true;

    static constexpr double kGapTol = 1e-8;
};

/// All complex eigenvalues of a real square matrix (n <= 256) via the
/// standard dense real-Schur path. On solver non-convergence the report is
/// returned with converged = false rather than throwing.
SpectrumReport spectrum(const Eigen::MatrixXd& m);

} // namespace opinion
