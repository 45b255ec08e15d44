#include "opinion/spectrum.hpp"

#include "opinion/errors.hpp"

#include <Eigen/Eigenvalues>

#include <complex>

namespace opinion {

SpectrumReport spectrum(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols())
        throw InputError("spectrum: matrix must be square");
    if (m.rows() > 256)
        throw InputError("spectrum: n > 256 not supported");
    if (!m.allFinite())
        throw InputError("spectrum: non-finite entries");

    SpectrumReport rep;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    rep.converged = solver.info() == Eigen::Success;
    rep.eigenvalues = solver.eigenvalues(); // partial results on non-convergence

    rep.spectral_radius = 0.0;
    for (int i = 0; i < rep.eigenvalues.size(); ++i)
        rep.spectral_radius = std::max(rep.spectral_radius, std::abs(rep.eigenvalues(i)));

    const double gap = SpectrumReport::kGapTol * std::max(1.0, rep.spectral_radius);
    int at_leading = 0;
    for (int i = 0; i < rep.eigenvalues.size(); ++i)
        if (std::abs(rep.eigenvalues(i) - std::complex<double>(rep.spectral_radius, 0.0)) <= gap)
            ++at_leading;
    rep.leading_in_spectrum = at_leading >= 1;
    rep.leading_simple = at_leading == 1;
    return rep;
}

} // namespace opinion
